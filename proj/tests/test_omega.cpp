#include "doctest.h"
#include "mukleene/clusters.hpp"
#include "mukleene/errors.hpp"

#include <algorithm>

using namespace mukleene;

namespace {

RSet pts(std::initializer_list<Rat> xs) { return RSet::from_points(std::vector<Rat>(xs)); }

const Rat kTol = Rat::pow2(-30);

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invariant;
}

// Oracle that claims [0,1] is nonempty but denies every proper subwindow.
struct Liar final : SetQuery {
  CardInfo cardinality() const override { return CardInfo::at_most(1); }

protected:
  bool answer(const RIv& w) override { return w.lo == Rat(0) && w.hi == Rat(1); }
};

}  // namespace

TEST_CASE("emptiness flags under the at-most-one promise") {
  RSetQuery empty{RSet{}};
  CHECK(emptiness_flag(empty) == 0);
  RSetQuery one{pts({Rat(1, 2)})};
  CHECK(emptiness_flag(one) == 1);
  CHECK(one.query_count() >= 1);
}

TEST_CASE("locating the element of an at-most-one set") {
  RSetQuery q{pts({Rat(3, 8)})};
  Located loc = locate_unique(q, 30);
  CHECK_FALSE(loc.sentinel);
  CHECK(loc.where.contains(Rat(3, 8)));
  CHECK(loc.where.width() <= kTol);

  RSetQuery empty{RSet{}};
  CHECK(locate_unique(empty, 30).sentinel);

  RSetQuery two{pts({Rat(1, 4), Rat(3, 4)})};
  CHECK(code_of([&] { locate_unique(two, 10); }) == Errc::precondition_violated);

  Liar liar;
  CHECK(code_of([&] { locate_unique(liar, 10); }) == Errc::oracle_inconsistent);
}

TEST_CASE("singleton extraction insists on an element") {
  RSetQuery q{pts({Rat(2, 3)})};
  Enclosure e = extract_singleton(q, 30);
  CHECK(e.contains(Rat(2, 3)));
  CHECK(e.width() <= kTol);
  RSetQuery empty{RSet{}};
  CHECK(code_of([&] { extract_singleton(empty, 10); }) == Errc::precondition_violated);
}

TEST_CASE("finite covers are disjoint, ordered, and inhabited") {
  RSet a = pts({Rat(1, 8), Rat(5, 8), Rat(7, 8)});
  RSetQuery q{a};
  auto windows = cover_finite(q, 10);
  REQUIRE(windows.size() == 3);
  for (size_t i = 0; i < windows.size(); ++i) {
    CHECK(windows[i].width() <= Rat::pow2(-10));
    if (i) CHECK(windows[i - 1].hi < windows[i].lo);
  }
  CHECK(windows[0].contains(Rat(1, 8)));
  CHECK(windows[1].contains(Rat(5, 8)));
  CHECK(windows[2].contains(Rat(7, 8)));
}

TEST_CASE("cardinality-gated covers accept and reject by the promise") {
  RSet a = pts({Rat(1, 8), Rat(5, 8), Rat(7, 8)});
  RSetQuery q1{a};
  CHECK(cover_exactly(q1, 3, 10).size() == 3);
  RSetQuery q2{a};
  CHECK(code_of([&] { cover_exactly(q2, 2, 10); }) == Errc::precondition_violated);
  RSetQuery q3{a};
  CHECK(cover_at_most(q3, 5, 10).size() == 3);
  RSetQuery q4{a};
  CHECK(code_of([&] { cover_at_most(q4, 2, 10); }) == Errc::precondition_violated);
}

TEST_CASE("exact counting needs honest cardinality data") {
  RSet a = pts({Rat(1, 8), Rat(5, 8), Rat(7, 8)});
  RSetQuery declared{a};  // finite point lists declare themselves exactly
  CHECK(exact_count(declared, 10) == 3);

  RSetQuery tight{a, CardInfo::at_most(3)};
  CHECK(exact_count(tight, 10) == 3);

  RSetQuery slack{a, CardInfo::at_most(4)};
  CHECK(code_of([&] { exact_count(slack, 10); }) == Errc::precision_exhausted);

  RSetQuery lying{a, CardInfo::at_most(2)};
  CHECK(code_of([&] { exact_count(lying, 10); }) == Errc::oracle_inconsistent);

  RSetQuery nodata{a, CardInfo::unknown()};
  CHECK(code_of([&] { exact_count(nodata, 10); }) == Errc::precondition_violated);
  RSetQuery nodata2{a, CardInfo::unknown()};
  CHECK(code_of([&] { count_bound(nodata2); }) == Errc::precondition_violated);
  RSetQuery bounded{a, CardInfo::at_most(7)};
  CHECK(count_bound(bounded) == 7);
}

TEST_CASE("the family entry point mirrors the direct calls") {
  RSet single = pts({Rat(1, 2)});
  RSetQuery q1{single};
  OmegaResult flag = omega_family(q1, OmegaVariant::flag);
  CHECK(flag.flag == 1);
  CHECK(flag.queries_used >= 1);

  RSetQuery q2{single};
  OmegaResult loc = omega_family(q2, OmegaVariant::locate);
  REQUIRE(loc.elements.size() == 1);
  CHECK(loc.elements[0].contains(Rat(1, 2)));

  RSetQuery q3{RSet{}};
  OmegaResult sent = omega_family(q3, OmegaVariant::locate);
  CHECK(sent.sentinel);
  CHECK(sent.elements.empty());

  RSetQuery q4{pts({Rat(1, 8), Rat(5, 8), Rat(7, 8)})};
  OmegaResult cnt = omega_family(q4, OmegaVariant::count);
  REQUIRE(cnt.count.has_value());
  CHECK(*cnt.count == 3);

  for (auto v : {OmegaVariant::flag, OmegaVariant::locate, OmegaVariant::extract,
                 OmegaVariant::cover, OmegaVariant::cover_exact, OmegaVariant::cover_at_most,
                 OmegaVariant::count, OmegaVariant::count_bound})
    CHECK(omega_variant_from_name(omega_variant_name(v)) == v);
  CHECK_THROWS_AS(omega_variant_from_name("bogus"), Error);
}

TEST_CASE("affine copies plant scaled preimages side by side") {
  RSet x = pts({Rat(1, 2)});
  RSet copies = affine_copies(x, 4);
  REQUIRE(copies.exact_card().has_value());
  CHECK(*copies.exact_card() == 4);
  // one copy inside each quarter
  for (long k = 0; k < 4; ++k) {
    RIv quarter{Rat(k, 4), Rat(k + 1, 4), true, false};
    CHECK(copies.nonempty_in(quarter));
  }
  CHECK(affine_copies(RSet{}, 3).empty());
}

TEST_CASE("emptiness and location recovered from a cardinality bound alone") {
  GeCountFn bound = [](const RSet& s) {
    auto card = s.exact_card();
    return card ? *card + 1 : uint64_t{50};  // any honest over-estimate
  };
  CHECK(nonempty_via_count_bound(pts({Rat(3, 8)}), bound));
  CHECK_FALSE(nonempty_via_count_bound(RSet{}, bound));

  Located loc = locate_via_count_bound(pts({Rat(5, 16)}), bound, 30);
  CHECK_FALSE(loc.sentinel);
  CHECK(loc.where.contains(Rat(5, 16)));
  CHECK(loc.where.width() <= kTol);
  CHECK(locate_via_count_bound(RSet{}, bound, 10).sentinel);
}

TEST_CASE("least element via the self-referential filter") {
  RSetQuery q{pts({Rat(1, 8), Rat(5, 8), Rat(7, 8)})};
  LeastResult r = least_via_filter(q, 30);
  CHECK_FALSE(r.sentinel);
  CHECK(r.least.contains(Rat(1, 8)));
  CHECK(r.least.width() <= kTol);
  CHECK(r.recursive_calls == 7);

  RSetQuery empty{RSet{}};
  CHECK(least_via_filter(empty, 10).sentinel);

  RSetQuery one{pts({Rat(9, 16)})};
  LeastResult single = least_via_filter(one, 30);
  CHECK(single.least.contains(Rat(9, 16)));
}

TEST_CASE("order-least respects a caller-supplied strict order") {
  RSet x = pts({Rat(1, 8), Rat(5, 8), Rat(7, 8)});
  WoResult desc = wo_least(x, x, [](const Rat& a, const Rat& b) { return a > b; });
  CHECK_FALSE(desc.sentinel);
  CHECK(desc.least == Rat(7, 8));

  WoResult asc = wo_least(x, x, [](const Rat& a, const Rat& b) { return a < b; });
  CHECK(asc.least == Rat(1, 8));

  // restriction to a subset
  WoResult sub = wo_least(x, pts({Rat(5, 8), Rat(7, 8)}),
                          [](const Rat& a, const Rat& b) { return a < b; });
  CHECK(sub.least == Rat(5, 8));

  CHECK(wo_least(x, RSet{}, [](const Rat& a, const Rat& b) { return a < b; }).sentinel);

  CHECK(code_of([&] {
          wo_least(x, x, [](const Rat&, const Rat&) { return true; });  // reflexive
        }) == Errc::inconsistent_order);
}

#include "doctest.h"
#include "mukleene/clusters.hpp"
#include "mukleene/errors.hpp"

#include <map>

#include "support/corpus.hpp"

using namespace mukleene;

namespace {

PAff tent() {
  return PAff::from_parts({Rat(0), Rat(1, 2), Rat(1)},
                          {Piece{Rat(2), Rat(0)}, Piece{Rat(-2), Rat(2)}},
                          {Rat(0), Rat(1), Rat(0)});
}

PAff step_half() { return RSet::from_points({Rat(1, 2)}).characteristic(); }

PAff stair() {
  return staircase_from_points({Rat(1, 4), Rat(1, 2), Rat(3, 4)}, 30);
}

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

const Rat kTol = Rat::pow2(-30);

}  // namespace

TEST_CASE("variation prefix climbs by slope and jump") {
  PAff p = variation_prefix(step_half());
  CHECK(p.value_at(Rat(0)) == Rat(0));
  CHECK(p.value_at(Rat(1, 4)) == Rat(0));
  CHECK(p.value_at(Rat(1, 2)) == Rat(1));
  CHECK(p.value_at(Rat(3, 4)) == Rat(2));
  CHECK(p.value_at(Rat(1)) == Rat(2));
  CHECK(p.is_nondecreasing());

  PAff q = variation_prefix(tent());
  CHECK(q.value_at(Rat(1, 2)) == Rat(1));
  CHECK(q.value_at(Rat(1)) == Rat(2));
  CHECK(q.is_continuous());
}

TEST_CASE("monotone splittings reproduce the function exactly") {
  for (const auto& f : corpus::paff_corpus(60, 101)) {
    JordanPair jd = jordan_decompose(f);
    CHECK(jd.g.is_nondecreasing());
    CHECK(jd.h.is_nondecreasing());
    PAff back = jd.g - jd.h;
    for (const auto& b : f.breakpoints()) CHECK(back.value_at(b) == f.value_at(b));
    for (long k = 1; k < 16; ++k) {
      Rat x(k, 16);
      CHECK(back.value_at(x) == f.value_at(x));
    }
  }
}

TEST_CASE("supplied-bound routes verify their certificates") {
  PAff f = step_half();  // variation 2
  CHECK_NOTHROW(jordan_decompose(f, JordanRoute::bounded, Rat(2)));
  CHECK_NOTHROW(jordan_decompose(f, JordanRoute::bounded, Rat(50)));
  CHECK(code_of([&] { jordan_decompose(f, JordanRoute::bounded, Rat(1)); }) ==
        Errc::bad_bound);
  CHECK_NOTHROW(jordan_decompose(f, JordanRoute::exact_variation, Rat(2)));
  CHECK(code_of([&] { jordan_decompose(f, JordanRoute::exact_variation, Rat(1)); }) ==
        Errc::bad_variation);
  try {
    jordan_decompose(f, JordanRoute::exact_variation, Rat(1));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("BadVariation") != std::string::npos);
  }
}

TEST_CASE("the window form collapses to the net increase") {
  PAff f = step_half();
  JordanPair jd = jordan_decompose(f);
  WindowIdentity w = variation_window_identity(f, jd, Rat(0), Rat(1));
  CHECK(w.lhs == Rat(2));
  CHECK(w.rhs == Rat(0));
  CHECK_FALSE(w.holds);

  // on a monotone window the form does hold
  WindowIdentity ok = variation_window_identity(tent(), jordan_decompose(tent()), Rat(0),
                                                Rat(1, 2));
  CHECK(ok.lhs == Rat(1));
  CHECK(ok.rhs == Rat(1));
  CHECK(ok.holds);
}

TEST_CASE("discontinuities come out largest jump first") {
  auto list = discontinuity_enum(stair());
  REQUIRE(list.size() == 3);
  CHECK(list[0].x == Rat(1, 4));
  CHECK(list[0].jump == Rat(1, 2));
  CHECK(list[0].severity == 1);
  CHECK(list[1].x == Rat(1, 2));
  CHECK(list[1].jump == Rat(1, 4));
  CHECK(list[1].severity == 2);
  CHECK(list[2].x == Rat(3, 4));
  CHECK(list[2].jump == Rat(1, 8));
  CHECK(list[2].severity == 3);

  auto removable = discontinuity_enum(step_half());
  REQUIRE(removable.size() == 1);
  CHECK(removable[0].x == Rat(1, 2));
  CHECK(removable[0].jump == Rat(0));
  CHECK(removable[0].defect == Rat(2));
  CHECK(removable[0].removable);
  CHECK(removable[0].severity == kRemovableSeverity);

  CHECK(discontinuity_enum(tent()).empty());
}

TEST_CASE("closed-set codes list the complement pieces") {
  auto codes = fsigma_export(step_half());
  REQUIRE(codes.size() == 1);
  CHECK(codes[0].first == RIv{Rat(0), Rat(1, 2), true, false});
  CHECK(codes[0].second == RIv{Rat(1, 2), Rat(1), false, true});
  CHECK(fsigma_export(tent()).empty());
}

TEST_CASE("staircases jump by falling powers of two") {
  PAff s = stair();
  CHECK(s.value_at(Rat(0)) == Rat(0));
  CHECK(s.value_at(Rat(1, 4)) == Rat(1, 2));   // right-continuous
  CHECK(s.left_limit(Rat(1, 4)) == Rat(0));
  CHECK(s.value_at(Rat(1, 2)) == Rat(3, 4));
  CHECK(s.value_at(Rat(3, 4)) == Rat(7, 8));
  CHECK(s.value_at(Rat(1)) == Rat(7, 8));
  CHECK(variation(s, Rat(0), Rat(1)) == Rat(7, 8));
  CHECK(s.is_nondecreasing());
  CHECK(code_of([&] { staircase_from_points({Rat(1, 2)}, 31); }) ==
        Errc::precondition_violated);
}

TEST_CASE("strictly increasing inner factor, continuous outer factor") {
  for (const auto& f : corpus::paff_corpus(50, 111)) {
    SierpinskiFactor sf = sierpinski_factor(f);
    CHECK(sf.h.is_strictly_increasing());
    CHECK(sf.g.is_continuous());
    for (const auto& b : f.breakpoints())
      CHECK(sf.g.value_at(sf.h.value_at(b)) == f.value_at(b));
    for (long k = 1; k < 16; ++k) {
      Rat x(k, 16);
      CHECK(sf.g.value_at(sf.h.value_at(x)) == f.value_at(x));
    }
  }
}

TEST_CASE("continuous stages pin the node and converge pointwise") {
  PAff f = step_half();
  for (uint64_t n : {uint64_t{1}, uint64_t{3}, uint64_t{8}}) {
    PAff fn = baire_stage(f, n);
    CHECK(fn.is_continuous());
    CHECK(fn.value_at(Rat(1, 2)) == Rat(1));
    // agreement outside the shrinking window
    Rat off = Rat(1, 2) + Rat::pow2(-static_cast<long>(n) - 1);
    CHECK(fn.value_at(off + Rat(1, 100)) == f.value_at(off + Rat(1, 100)));
  }
  CHECK(code_of([&] { baire_stage(f, 0); }) == Errc::precondition_violated);
}

TEST_CASE("maxima of upper semicontinuous functions are located") {
  CHECK(usc_max_location(tent()) == Rat(1, 2));
  CHECK(usc_max_location(step_half()) == Rat(1, 2));
  CHECK(usc_max_location(PAff::constant(Rat(2))) == Rat(0));

  // lower semicontinuous spike is rejected
  PAff lsc = PAff::from_parts({Rat(0), Rat(1, 2), Rat(1)},
                              {Piece{Rat(0), Rat(1)}, Piece{Rat(0), Rat(1)}},
                              {Rat(1), Rat(0), Rat(1)});
  CHECK(code_of([&] { usc_max_location(lsc); }) == Errc::not_usc);

  // negative ramp whose |f| supremum is only approached
  PAff ramp = PAff::from_parts({Rat(0), Rat(1)}, {Piece{Rat(-1), Rat(0)}}, {Rat(0), Rat(0)});
  CHECK(code_of([&] { usc_max_location(ramp); }) == Errc::not_attained);
}

TEST_CASE("level-count oracle recovers a labelled finite set") {
  RSet a = RSet::from_points({Rat(1, 4), Rat(2, 3)});
  std::map<Rat, uint64_t, std::less<Rat>> labels{{Rat(1, 4), 0}, {Rat(2, 3), 1}};
  IndexFn y = [&](const Rat& x) { return labels.at(x); };
  IndicatrixFn oracle = [](const PAff& f) { return indicatrix(f); };
  auto rec = enum_via_indicatrix(a, y, oracle, 30);
  REQUIRE(rec.size() == 2);
  for (const auto& r : rec) {
    Rat truth = r.index == 0 ? Rat(1, 4) : Rat(2, 3);
    CHECK(r.where.contains(truth));
    CHECK(r.where.width() <= kTol);
  }
}

TEST_CASE("set enumeration in both label disciplines") {
  RSet a = RSet::from_points({Rat(1, 8), Rat(5, 8), Rat(7, 8)});
  std::map<Rat, uint64_t> sparse{{Rat(1, 8), 4}, {Rat(5, 8), 9}, {Rat(7, 8), 2}};
  IndexFn y = [&](const Rat& x) { return sparse.at(x); };
  auto found = enumerate_set(a, y, EnumMode::by_index_search);
  REQUIRE(found.size() == 3);
  CHECK(found[0].index == 2);
  CHECK(found[0].x == Rat(7, 8));
  CHECK(found[1].index == 4);
  CHECK(found[2].index == 9);

  CHECK(code_of([&] { enumerate_set(a, y, EnumMode::weak_bijection); }) ==
        Errc::missing_preimage);

  std::map<Rat, uint64_t> dense{{Rat(1, 8), 1}, {Rat(5, 8), 0}, {Rat(7, 8), 2}};
  IndexFn yd = [&](const Rat& x) { return dense.at(x); };
  auto ranked = enumerate_set(a, yd, EnumMode::weak_bijection);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].x == Rat(5, 8));

  CHECK(listed_sup(a, yd) == Rat(7, 8));
  CHECK(distance_to_extremes(Rat(1, 4), a, yd) == Rat(5, 8));
  CHECK(distance_to_extremes(Rat(1, 2), a, yd) == Rat(3, 8));
}

TEST_CASE("jump labels are injective and structured by severity") {
  JumpLabeller lab(stair());
  REQUIRE(lab.jump_points().size() == 3);
  mpz_class l1 = lab(Rat(1, 4));
  mpz_class l2 = lab(Rat(1, 2));
  mpz_class l3 = lab(Rat(3, 4));
  CHECK(l1 == 7);
  CHECK(l2 == 10);
  CHECK(l3 == 68);
  CHECK(l1 != l2);
  CHECK(l1 != l3);
  CHECK(l2 != l3);
  CHECK(lab(Rat(1, 3)) == 0);  // not a jump point
  CHECK(lab.max_level() >= 1);
  CHECK(lab.separation_exponent(1) >= 1);

  // removable discontinuities carry no jump label
  JumpLabeller rem(step_half());
  CHECK(rem.jump_points().empty());
  CHECK(rem(Rat(1, 2)) == 0);
}

TEST_CASE("absolute-continuity diagnostics across the modes") {
  for (const auto& f : corpus::continuous_paff_corpus(25, 121)) {
    AcReport r = ac_diagnostics(f, AcMode::fundamental);
    CHECK(r.holds);
    CHECK(r.gap == Rat(0));
  }

  AcReport bad = ac_diagnostics(step_half(), AcMode::fundamental);
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness_y.has_value());
  CHECK(*bad.witness_y == Rat(1, 2));
  CHECK(bad.gap == Rat(1));
  CHECK(bad.gap_sign == 1);

  AcReport vi = ac_diagnostics(step_half(), AcMode::variation_vs_integral);
  CHECK_FALSE(vi.holds);
  CHECK(vi.gap == Rat(2));

  AcReport lip = ac_diagnostics(tent(), AcMode::lipschitz);
  CHECK(lip.holds);

  AcReport sing = ac_diagnostics(step_half(), AcMode::singular);
  CHECK_FALSE(sing.holds);
  REQUIRE(sing.witness_x.has_value());
  REQUIRE(sing.witness_y.has_value());
  CHECK(code_of([&] { ac_diagnostics(tent(), AcMode::singular); }) == Errc::not_singular);

  CHECK(ac_diagnostics(step_half(), AcMode::lusin).holds);

  for (auto m : {AcMode::fundamental, AcMode::lipschitz, AcMode::variation_vs_integral,
                 AcMode::singular, AcMode::lusin})
    CHECK(ac_mode_from_name(ac_mode_name(m)) == m);
}

TEST_CASE("preimage component counts and the pseudo-monotone index") {
  PAff f = tent();
  CHECK(preimage_components(f, Rat(0), Rat(1, 2)) == 2);
  CHECK(preimage_components(f, Rat(1, 2), Rat(1)) == 1);
  CHECK(preimage_components(f, Rat(1), Rat(1)) == 1);
  CHECK(preimage_components(f, Rat(2), Rat(3)) == 0);
  CHECK(pseudo_monotone_index(f) == 2);
  CHECK(pseudo_monotone_index(PAff::affine(Rat(1), Rat(0))) == 1);
  CHECK(pseudo_monotone_index(step_half()) == 2);
}

TEST_CASE("closed-set helpers over interval unions") {
  RSet bands;
  bands.add(closed_iv(Rat(0), Rat(1, 3)));
  bands.add(closed_iv(Rat(2, 3), Rat(1)));
  CHECK(closed_sup(bands) == Rat(1));
  auto gaps = complement_code(bands);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].lo == Rat(1, 3));
  CHECK(gaps[0].hi == Rat(2, 3));
  CHECK_FALSE(gaps[0].lo_closed);
  CHECK_FALSE(gaps[0].hi_closed);
  CHECK(code_of([&] { closed_sup(RSet{}); }) == Errc::empty_set);

  RSet left = RSet::interval(closed_iv(Rat(0), Rat(1, 4)));
  RSet right = RSet::interval(closed_iv(Rat(3, 4), Rat(1)));
  PAff sep = urysohn_separator(left, right);
  CHECK(sep.value_at(Rat(1, 8)) == Rat(0));
  CHECK(sep.value_at(Rat(7, 8)) == Rat(1));
  CHECK(sep.value_at(Rat(1, 2)) == Rat(1, 2));
  CHECK(sep.is_continuous());
  CHECK(code_of([&] { urysohn_separator(left, left); }) == Errc::not_disjoint);

  PAff ext = tietze_extend(bands, tent());
  CHECK(ext.is_continuous());
  CHECK(ext.value_at(Rat(1, 4)) == tent().value_at(Rat(1, 4)));
  CHECK(ext.value_at(Rat(5, 6)) == tent().value_at(Rat(5, 6)));
  auto restricted_sup = supremum(ext, Rat(0), Rat(1));
  CHECK(restricted_sup.value == Rat(2, 3));  // sup over the bands, preserved

  CHECK(closed_max_abs_point(bands, tent()) == Rat(1, 3));
}

#include "doctest.h"
#include "mukleene/creal.hpp"
#include "mukleene/errors.hpp"
#include "mukleene/rational.hpp"
#include "mukleene/rset.hpp"

#include <unordered_set>

using namespace mukleene;

TEST_CASE("rationals are stored reduced and print canonically") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-3, -6) == Rat(1, 2));
  CHECK(Rat(3, -6).str() == "-1/2");
  CHECK(Rat(7).str() == "7");
  CHECK(Rat(0, 5).str() == "0");
  CHECK(Rat::parse("10/15") == Rat(2, 3));
  CHECK(Rat::parse("-4") == Rat(-4));
  CHECK(Rat::parse("+3/9") == Rat(1, 3));
  CHECK_THROWS_AS(Rat::parse("1/0"), Error);
  CHECK_THROWS_AS(Rat::parse("a/b"), Error);
  CHECK_THROWS_AS(Rat::parse(""), Error);
}

TEST_CASE("rational arithmetic and rounding") {
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 2) * Rat(2, 3) == Rat(1, 3));
  CHECK(Rat(1) / Rat(3) == Rat(1, 3));
  CHECK_THROWS_AS(Rat(1) / Rat(0), Error);
  CHECK(Rat(7, 2).floor() == 3);
  CHECK(Rat(7, 2).ceil() == 4);
  CHECK(Rat(-7, 2).floor() == -4);
  CHECK(Rat(-7, 2).ceil() == -3);
  CHECK(Rat::pow2(5) == Rat(32));
  CHECK(Rat::pow2(-3) == Rat(1, 8));
  CHECK(abs(Rat(-5, 3)) == Rat(5, 3));
  CHECK(min(Rat(1, 2), Rat(1, 3)) == Rat(1, 3));
  CHECK(max(Rat(1, 2), Rat(1, 3)) == Rat(1, 2));
}

TEST_CASE("sqrt enclosures bracket the root at the requested width") {
  for (long x : {0L, 1L, 2L, 5L, 144L}) {
    auto [lo, hi] = sqrt_enclosure(Rat(x), 40);
    CHECK(lo * lo <= Rat(x));
    CHECK(hi * hi >= Rat(x));
    CHECK(hi - lo <= Rat::pow2(-40));
    CHECK(lo >= Rat(0));
  }
  auto [lo, hi] = sqrt_enclosure(Rat(9, 4), 30);
  CHECK(lo <= Rat(3, 2));
  CHECK(hi >= Rat(3, 2));
  CHECK_THROWS_AS(sqrt_enclosure(Rat(-1), 10), Error);
}

TEST_CASE("rational hashing respects equality") {
  std::unordered_set<Rat, RatHash> s;
  s.insert(Rat(1, 2));
  s.insert(Rat(2, 4));
  s.insert(Rat(1, 3));
  CHECK(s.size() == 2);
}

TEST_CASE("cauchy reals compare soundly") {
  CReal half = CReal::constant(Rat(1, 2));
  CReal third = CReal::constant(Rat(1, 3));
  CHECK(creal_compare(third, half, 20) == Cmp::lt);
  CHECK(creal_compare(half, third, 20) == Cmp::gt);
  CHECK(creal_compare(half, CReal::constant(Rat(1, 2)), 50) == Cmp::indistinguishable);
  CReal root2([](long k) {
    auto [lo, hi] = sqrt_enclosure(Rat(2), k + 1);
    return lo;
  });
  CHECK(creal_compare(root2, CReal::constant(Rat(3, 2)), 20) == Cmp::lt);
  CHECK(creal_compare(root2, CReal::constant(Rat(7, 5)), 20) == Cmp::gt);
}

TEST_CASE("interval unions stay sorted, disjoint, and canonical") {
  RSet s;
  s.add(closed_iv(Rat(1, 2), Rat(3, 4)));
  s.add(closed_iv(Rat(0), Rat(1, 4)));
  s.add(closed_iv(Rat(1, 4), Rat(1, 2)));  // bridges the first two
  REQUIRE(s.intervals().size() == 1);
  CHECK(s.intervals()[0] == closed_iv(Rat(0), Rat(3, 4)));
  CHECK(s.contains(Rat(2, 3)));
  CHECK_FALSE(s.contains(Rat(4, 5)));
  CHECK(s.sup() == Rat(3, 4));
  CHECK(s.inf() == Rat(0));
  CHECK_FALSE(s.exact_card().has_value());
}

TEST_CASE("point sets count and test membership exactly") {
  RSet s = RSet::from_points({Rat(1, 8), Rat(5, 8), Rat(1, 8)});
  REQUIRE(s.exact_card().has_value());
  CHECK(*s.exact_card() == 2);
  CHECK(s.contains(Rat(5, 8)));
  CHECK_FALSE(s.contains(Rat(1, 2)));
  CHECK(s.nonempty_in(RIv{Rat(0), Rat(1, 4), true, true}));
  CHECK_FALSE(s.nonempty_in(RIv{Rat(1, 8), Rat(1, 4), false, true}));
  CHECK(s.sup() == Rat(5, 8));
  CHECK(RSet().empty());
  CHECK_THROWS_AS(RSet().sup(), Error);
}

TEST_CASE("characteristic function of a finite point set") {
  RSet s = RSet::from_points({Rat(1, 2)});
  PAff f = s.characteristic();
  CHECK(f.value_at(Rat(1, 2)) == Rat(1));
  CHECK(f.value_at(Rat(1, 4)) == Rat(0));
  CHECK(f.left_limit(Rat(1, 2)) == Rat(0));
  CHECK(f.right_limit(Rat(1, 2)) == Rat(0));
}

TEST_CASE("set serialization round-trips") {
  RSet s;
  s.add(RIv{Rat(0), Rat(1, 3), true, false});
  s.add_point(Rat(1, 2));
  RSet back = RSet::from_json(s.to_json());
  CHECK(back.to_json() == s.to_json());
  CHECK(back.contains(Rat(1, 2)));
  CHECK(back.contains(Rat(0)));
  CHECK_FALSE(back.contains(Rat(1, 3)));
}

TEST_CASE("interval predicates handle degenerate endpoints") {
  CHECK(point_iv(Rat(1, 2)).is_point());
  CHECK(RIv{Rat(1, 2), Rat(1, 2), true, false}.empty());
  CHECK(RIv{Rat(2, 3), Rat(1, 3), true, true}.empty());
  RIv half_open{Rat(0), Rat(1, 2), true, false};
  CHECK(half_open.contains(Rat(0)));
  CHECK_FALSE(half_open.contains(Rat(1, 2)));
  RIv cap = intersect_iv(half_open, RIv{Rat(1, 4), Rat(3, 4), false, true});
  CHECK(cap.contains(Rat(1, 3)));
  CHECK_FALSE(cap.contains(Rat(1, 4)));
  CHECK_FALSE(cap.contains(Rat(1, 2)));
}

#include "mukleene/clusters.hpp"

#include "mukleene/errors.hpp"

namespace mukleene {

namespace {

const Rat kZero(0);
const Rat kOne(1);

// Continuous piecewise-affine interpolant through sorted (x, v) nodes.
// Consecutive nodes with equal x must agree on v.
PAff through_nodes(std::vector<std::pair<Rat, Rat>> nodes) {
  std::vector<std::pair<Rat, Rat>> uniq;
  for (auto& n : nodes) {
    if (!uniq.empty() && uniq.back().first == n.first) {
      if (uniq.back().second != n.second)
        fail(Errc::invariant, "conflicting node values at " + n.first.str());
      continue;
    }
    uniq.push_back(std::move(n));
  }
  std::vector<Rat> bps, vals;
  std::vector<Piece> pieces;
  for (size_t i = 0; i < uniq.size(); ++i) {
    bps.push_back(uniq[i].first);
    vals.push_back(uniq[i].second);
    if (i + 1 < uniq.size()) {
      Rat dx = uniq[i + 1].first - uniq[i].first;
      Rat a = (uniq[i + 1].second - uniq[i].second) / dx;
      pieces.push_back(Piece{a, uniq[i].second - a * uniq[i].first});
    }
  }
  return PAff::from_parts(bps, pieces, vals);
}

}  // namespace

// ---- variation prefix and the decomposition ----

PAff variation_prefix(const PAff& f) {
  const auto& bps = f.breakpoints();
  const auto& ps = f.pieces();
  size_t n = bps.size();

  std::vector<Rat> gval(n, kZero);
  std::vector<Rat> right_jump(n, kZero);
  Rat running(0);
  for (size_t i = 0; i + 1 < n; ++i) {
    SideLimits here = side_limits(f, bps[i]);
    SideLimits next = side_limits(f, bps[i + 1]);
    right_jump[i] = abs(here.right - here.value);
    running += right_jump[i];
    running += abs(ps[i].a) * (bps[i + 1] - bps[i]);
    running += abs(next.value - next.left);
    gval[i + 1] = running;
  }

  std::vector<Piece> gp;
  for (size_t i = 0; i + 1 < n; ++i) {
    Rat a = abs(ps[i].a);
    // right limit of the prefix at bps[i] is its value plus the jump there
    gp.push_back(Piece{a, gval[i] + right_jump[i] - a * bps[i]});
  }
  return PAff::from_parts(bps, gp, gval);
}

JordanPair jordan_decompose(const PAff& f, JordanRoute route, const std::optional<Rat>& supplied) {
  if (route != JordanRoute::plain) {
    if (!supplied) fail(Errc::precondition_violated, "this route needs a supplied value");
    Rat total = variation(f, kZero, kOne);
    if (route == JordanRoute::bounded && *supplied < total)
      fail(Errc::bad_bound, "supplied bound " + supplied->str() + " is below the variation " +
                                total.str());
    if (route == JordanRoute::exact_variation && *supplied != total)
      fail(Errc::bad_variation,
           "supplied variation " + supplied->str() + " differs from " + total.str());
  }
  JordanPair jd{variation_prefix(f), PAff()};
  jd.h = jd.g - f;
  if (!jd.g.is_nondecreasing() || !jd.h.is_nondecreasing() || !(jd.g - jd.h == f))
    fail(Errc::invariant, "decomposition parts lost their defining properties");
  return jd;
}

WindowIdentity variation_window_identity(const PAff& f, const JordanPair& jd, const Rat& c,
                                         const Rat& d) {
  WindowIdentity w;
  w.lhs = variation(f, c, d);
  w.rhs = jd.g.value_at(d) - jd.g.value_at(c) + jd.h.value_at(c) - jd.h.value_at(d);
  w.holds = w.lhs == w.rhs;
  return w;
}

// ---- discontinuity lists ----

std::vector<Discontinuity> discontinuity_enum(const PAff& f) {
  std::vector<Discontinuity> out;
  for (const auto& b : f.breakpoints()) {
    SideLimits s = side_limits(f, b);
    Rat defect = abs(s.value - s.left) + abs(s.right - s.value);
    if (defect.sgn() == 0) continue;
    Discontinuity d;
    d.x = b;
    d.jump = abs(s.right - s.left);
    d.defect = defect;
    d.removable = d.jump.sgn() == 0;
    if (d.removable) {
      d.severity = kRemovableSeverity;
    } else {
      uint64_t k = 0;
      while (!(d.jump > Rat::pow2(-static_cast<long>(k)))) ++k;
      d.severity = k;
    }
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const Discontinuity& a, const Discontinuity& b) {
    if (a.jump != b.jump) return a.jump > b.jump;
    return a.x < b.x;
  });
  return out;
}

std::vector<std::pair<RIv, RIv>> fsigma_export(const PAff& f) {
  std::vector<std::pair<RIv, RIv>> out;
  for (const auto& d : discontinuity_enum(f))
    out.emplace_back(RIv{kZero, d.x, true, false}, RIv{d.x, kOne, false, true});
  return out;
}

// ---- staircases ----

PAff staircase_from_points(const std::vector<Rat>& points, uint64_t limit) {
  if (limit > 30) fail(Errc::precondition_violated, "truncation limit above 30");
  size_t use = std::min<size_t>(points.size(), limit);
  std::vector<std::pair<Rat, Rat>> marks;  // (point, weight by input position)
  for (size_t n = 0; n < use; ++n) {
    if (points[n] < kZero || points[n] > kOne)
      fail(Errc::precondition_violated, "point " + points[n].str() + " outside [0,1]");
    for (size_t m = 0; m < n; ++m)
      if (points[m] == points[n])
        fail(Errc::duplicate_point, "point " + points[n].str() + " listed twice");
    marks.emplace_back(points[n], Rat::pow2(-static_cast<long>(n)));
  }
  std::sort(marks.begin(), marks.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Rat> bps{kZero};
  for (const auto& [x, w] : marks)
    if (x != kZero && x != kOne) bps.push_back(x);
  bps.push_back(kOne);

  auto cumulative = [&](const Rat& x) {
    Rat s(0);
    for (const auto& [pt, w] : marks)
      if (pt <= x) s += w;
    return s;
  };
  std::vector<Rat> vals;
  for (const auto& b : bps) vals.push_back(cumulative(b));
  std::vector<Piece> pieces;
  for (size_t i = 0; i + 1 < bps.size(); ++i) pieces.push_back(Piece{kZero, vals[i]});
  return PAff::from_parts(bps, pieces, vals);
}

// ---- the monotone/continuous factorisation ----

SierpinskiFactor sierpinski_factor(const PAff& f) {
  struct Gap {
    Rat x, l, v, r;  // point and its side data
    Rat s, t;        // inserted length and node offset inside the gap
  };
  std::vector<Gap> gaps;
  for (const auto& b : f.breakpoints()) {
    SideLimits s = side_limits(f, b);
    Rat lpart = abs(s.value - s.left), rpart = abs(s.right - s.value);
    if ((lpart + rpart).sgn() == 0) continue;
    gaps.push_back(Gap{b, s.left, s.value, s.right, lpart + rpart, lpart});
  }

  Rat total(0);
  for (const auto& g : gaps) total += g.s;
  Rat sigma = kOne / (kOne + total);

  // h: slope-sigma pieces between the opened points, point values placed
  // inside their gaps at the left-defect offset
  std::vector<Rat> hb{kZero};
  for (const auto& g : gaps)
    if (g.x != kZero && g.x != kOne) hb.push_back(g.x);
  hb.push_back(kOne);

  auto inserted_before = [&](const Rat& x) {
    Rat s(0);
    for (const auto& g : gaps)
      if (g.x < x) s += g.s;
    return s;
  };
  auto gap_at = [&](const Rat& x) -> const Gap* {
    for (const auto& g : gaps)
      if (g.x == x) return &g;
    return nullptr;
  };

  std::vector<Piece> hp;
  for (size_t i = 0; i + 1 < hb.size(); ++i) {
    Rat shift = inserted_before(hb[i]);
    if (const Gap* g = gap_at(hb[i])) shift += g->s;
    hp.push_back(Piece{sigma, sigma * shift});
  }
  std::vector<Rat> hv;
  for (const auto& b : hb) {
    Rat base = inserted_before(b);
    if (const Gap* g = gap_at(b)) base += g->t;
    hv.push_back(sigma * (b + base));
  }
  PAff h = PAff::from_parts(hb, hp, hv);
  if (!h.is_strictly_increasing())
    fail(Errc::invariant, "reparametrisation is not strictly increasing");

  // g: nodes at the images of continuous breakpoints, and at each opened gap
  // the entry/node/exit triple bridging left limit, value, right limit
  std::vector<std::pair<Rat, Rat>> nodes;
  nodes.emplace_back(kZero, f.value_at(kZero));
  for (const auto& b : f.breakpoints()) {
    if (const Gap* g = gap_at(b)) {
      Rat entry = b == kZero ? kZero : h.left_limit(b);
      Rat exit = b == kOne ? kOne : h.right_limit(b);
      nodes.emplace_back(entry, g->l);
      nodes.emplace_back(h.value_at(b), g->v);
      nodes.emplace_back(exit, g->r);
    } else {
      nodes.emplace_back(h.value_at(b), f.value_at(b));
    }
  }
  nodes.emplace_back(kOne, f.value_at(kOne));
  std::sort(nodes.begin(), nodes.end());
  PAff g = through_nodes(std::move(nodes));

  for (const auto& b : f.breakpoints())
    if (g.value_at(h.value_at(b)) != f.value_at(b))
      fail(Errc::invariant, "composition mismatch at " + b.str());
  return SierpinskiFactor{std::move(g), std::move(h)};
}

// ---- continuous stages ----

PAff baire_stage(const PAff& f, uint64_t n) {
  if (n == 0) fail(Errc::precondition_violated, "stage index must be at least 1");
  const auto& bps = f.breakpoints();

  std::vector<std::pair<Rat, Rat>> nodes;
  for (size_t i = 0; i < bps.size(); ++i) {
    SideLimits s = side_limits(f, bps[i]);
    bool disc = s.left != s.value || s.value != s.right;
    if (!disc) {
      nodes.emplace_back(bps[i], s.value);
      continue;
    }
    Rat w = Rat::pow2(-static_cast<long>(n) - 1);
    if (i > 0) w = min(w, (bps[i] - bps[i - 1]) / Rat(2));
    if (i + 1 < bps.size()) w = min(w, (bps[i + 1] - bps[i]) / Rat(2));
    if (i > 0) nodes.emplace_back(bps[i] - w, f.value_at(bps[i] - w));
    nodes.emplace_back(bps[i], s.value);
    if (i + 1 < bps.size()) nodes.emplace_back(bps[i] + w, f.value_at(bps[i] + w));
  }
  PAff out = through_nodes(std::move(nodes));
  if (!out.is_continuous()) fail(Errc::invariant, "stage did not come out continuous");
  return out;
}

// ---- maximum of |f| under upper semicontinuity ----

Rat usc_max_location(const PAff& f) {
  for (const auto& b : f.breakpoints()) {
    PointClass pc = classify_point(f, b);
    if (!pc.upper_semicontinuous)
      fail(Errc::not_usc, "not upper semicontinuous at " + b.str());
  }

  const auto& bps = f.breakpoints();
  const auto& ps = f.pieces();
  std::vector<std::pair<Rat, Rat>> attained;  // (x, |f(x)|), position order
  Rat approached(0);
  bool have_approached = false;
  for (size_t i = 0; i < bps.size(); ++i) {
    attained.emplace_back(bps[i], abs(f.value_at(bps[i])));
    if (i + 1 == bps.size()) break;
    if (ps[i].a.sgn() == 0) {
      Rat mid = (bps[i] + bps[i + 1]) / Rat(2);
      attained.emplace_back(mid, abs(ps[i].b));
    } else {
      Rat le = abs(f.right_limit(bps[i]));
      Rat re = abs(f.left_limit(bps[i + 1]));
      Rat m = max(le, re);
      if (!have_approached || m > approached) approached = m, have_approached = true;
    }
  }
  Rat best = attained.front().second;
  for (const auto& [x, v] : attained) best = max(best, v);
  if (have_approached && approached > best)
    fail(Errc::not_attained, "|f| approaches " + approached.str() +
                                 " but attains at most " + best.str());
  for (const auto& [x, v] : attained)
    if (v == best) return x;
  fail(Errc::invariant, "maximum lost");
}

// ---- injective labels on jump points ----

namespace {

uint64_t scales_within(const Rat& d) {
  // number of k ≥ 0 with d ≤ 2^-k; defined for 0 < d ≤ 1
  uint64_t m = 0;
  while (d <= Rat::pow2(-static_cast<long>(m) - 1)) ++m;
  return m + 1;
}

uint64_t nth_prime(size_t k) {  // 1-indexed
  static std::vector<uint64_t> primes{2, 3, 5, 7, 11, 13};
  while (primes.size() < k) {
    uint64_t c = primes.back() + 2;
    for (;; c += 2) {
      bool ok = true;
      for (uint64_t p : primes) {
        if (p * p > c) break;
        if (c % p == 0) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    primes.push_back(c);
  }
  return primes[k - 1];
}

// index of the first rational within radius of x, in the enumeration
// 0, 1, then denominators 2, 3, ... with coprime numerators ascending
uint64_t rational_index_near(const Rat& x, const Rat& radius) {
  if (abs(Rat(0) - x) < radius) return 0;
  if (abs(Rat(1) - x) < radius) return 1;
  uint64_t idx = 1;
  for (unsigned long den = 2;; ++den) {
    if (idx > 1'000'000) fail(Errc::cap_exceeded, "rational enumeration scan ran away");
    for (unsigned long num = 1; num < den; ++num) {
      if (mpz_class(gcd(mpz_class(num), mpz_class(den))) != 1) continue;
      ++idx;
      if (abs(Rat(static_cast<long>(num), static_cast<long>(den)) - x) < radius) return idx;
    }
  }
}

}  // namespace

JumpLabeller::JumpLabeller(const PAff& f) {
  std::vector<std::pair<Rat, Rat>> jumps;  // (x, jump), position order
  for (const auto& d : discontinuity_enum(f))
    if (!d.removable) jumps.emplace_back(d.x, d.jump);
  std::sort(jumps.begin(), jumps.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  uint64_t max_level = 0;
  for (const auto& [x, j] : jumps) {
    points_.push_back(x);
    uint64_t lvl = 0;
    while (Rat::pow2(-static_cast<long>(lvl)) > j) ++lvl;
    levels_.push_back(lvl);
    max_level = std::max(max_level, lvl);
  }

  sep_.assign(jumps.empty() ? 0 : max_level + 1, 1);
  for (uint64_t n = 0; n < sep_.size(); ++n) {
    std::vector<Rat> xs;
    for (size_t i = 0; i < points_.size(); ++i)
      if (levels_[i] <= n) xs.push_back(points_[i]);
    uint64_t pairs = 0;
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = i + 1; j < xs.size(); ++j) pairs += 2 * scales_within(abs(xs[i] - xs[j]));
    sep_[n] = pairs + 1;
    // every pair in the level set must now be further apart than 2^-sep
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = i + 1; j < xs.size(); ++j)
        if (!(abs(xs[i] - xs[j]) > Rat::pow2(-static_cast<long>(sep_[n]))))
          fail(Errc::invariant, "separation exponent too small");
  }

  for (size_t i = 0; i < points_.size(); ++i) {
    uint64_t n = levels_[i];
    Rat radius = Rat::pow2(-static_cast<long>(separation_exponent(n)) - 2);
    uint64_t z = rational_index_near(points_[i], radius);
    mpz_class label(1);
    label <<= n;
    label *= nth_prime(static_cast<size_t>(1 + z));
    labels_.push_back(label);
  }
}

mpz_class JumpLabeller::operator()(const Rat& x) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x);
  if (it != points_.end() && *it == x) return labels_[it - points_.begin()];
  return 0;
}

uint64_t JumpLabeller::separation_exponent(uint64_t n) const {
  if (sep_.empty()) return 1;
  return sep_[std::min<uint64_t>(n, sep_.size() - 1)];
}

// ---- absolute-continuity diagnostics ----

namespace {

Rat signed_derivative_integral(const PAff& f, const Rat& y) {
  Rat acc(0);
  const auto& bps = f.breakpoints();
  const auto& ps = f.pieces();
  for (size_t i = 0; i + 1 < bps.size() && bps[i] < y; ++i)
    acc += ps[i].a * (min(bps[i + 1], y) - bps[i]);
  return acc;
}

Rat abs_derivative_integral(const PAff& f, const Rat& y) {
  Rat acc(0);
  const auto& bps = f.breakpoints();
  const auto& ps = f.pieces();
  for (size_t i = 0; i + 1 < bps.size() && bps[i] < y; ++i)
    acc += abs(ps[i].a) * (min(bps[i + 1], y) - bps[i]);
  return acc;
}

// 0, then midpoint/breakpoint alternation up to 1
std::vector<Rat> scan_points(const PAff& f) {
  const auto& bps = f.breakpoints();
  std::vector<Rat> ys{bps.front()};
  for (size_t i = 0; i + 1 < bps.size(); ++i) {
    ys.push_back((bps[i] + bps[i + 1]) / Rat(2));
    ys.push_back(bps[i + 1]);
  }
  return ys;
}

}  // namespace

const char* ac_mode_name(AcMode m) {
  switch (m) {
    case AcMode::fundamental: return "ftc";
    case AcMode::lipschitz: return "lipschitz";
    case AcMode::variation_vs_integral: return "varint";
    case AcMode::singular: return "singular";
    case AcMode::lusin: return "lusin";
  }
  return "?";
}

AcMode ac_mode_from_name(const std::string& s) {
  for (auto m : {AcMode::fundamental, AcMode::lipschitz, AcMode::variation_vs_integral,
                 AcMode::singular, AcMode::lusin})
    if (s == ac_mode_name(m)) return m;
  fail(Errc::format_error, "unknown mode '" + s + "'");
}

AcReport ac_diagnostics(const PAff& f, AcMode mode) {
  AcReport r;
  r.mode = mode;
  auto ys = scan_points(f);

  switch (mode) {
    case AcMode::fundamental:
    case AcMode::lipschitz: {
      for (const auto& y : ys) {
        if (y.sgn() == 0) continue;
        Rat raw = f.value_at(y) - f.value_at(kZero) - signed_derivative_integral(f, y);
        if (raw.sgn() != 0) {
          r.holds = false;
          r.witness_y = y;
          r.gap = abs(raw);
          r.gap_sign = raw.sgn();
          r.detail = "increment differs from the derivative integral at y = " + y.str();
          return r;
        }
      }
      r.holds = true;
      r.detail = mode == AcMode::fundamental
                     ? "absolutely continuous on the piecewise-affine class"
                     : "Lipschitz: bounded slopes and no defect in any increment";
      return r;
    }
    case AcMode::variation_vs_integral: {
      Rat best(0);
      std::optional<Rat> where;
      for (const auto& y : ys) {
        if (y.sgn() == 0) continue;
        Rat raw = variation(f, kZero, y) - abs_derivative_integral(f, y);
        if (raw.sgn() < 0) fail(Errc::invariant, "variation fell below the density integral");
        if (raw > best) {
          best = raw;
          where = y;
        }
      }
      if (where) {
        r.holds = false;
        r.witness_y = where;
        r.gap = best;
        r.gap_sign = 1;
        r.detail = "variation exceeds the density integral by " + best.str();
      } else {
        r.holds = true;
        r.detail = "variation equals the derivative density integral everywhere";
      }
      return r;
    }
    case AcMode::singular: {
      for (const auto& p : f.pieces())
        if (p.a.sgn() != 0)
          fail(Errc::not_singular, "piece with slope " + p.a.str() + " is not singular");
      Rat base = f.value_at(ys.front());
      for (const auto& y : ys) {
        Rat v = f.value_at(y);
        if (v != base) {
          r.holds = false;
          r.witness_x = ys.front();
          r.witness_y = y;
          Rat raw = v - base;
          r.gap = abs(raw);
          r.gap_sign = raw.sgn();
          r.detail = "zero slope everywhere yet different values";
          return r;
        }
      }
      r.holds = true;
      r.detail = "constant";
      return r;
    }
    case AcMode::lusin: {
      r.holds = true;
      size_t jumps = discontinuity_enum(f).size();
      r.detail = "null sets map to null sets: finitely many affine pieces, " +
                 std::to_string(jumps) + " exceptional points";
      return r;
    }
  }
  fail(Errc::invariant, "unreachable mode");
}

// ---- preimage complexity ----

uint64_t preimage_components(const PAff& f, const Rat& c, const Rat& d) {
  if (c > d) fail(Errc::precondition_violated, "empty level window");
  RSet acc;
  const auto& bps = f.breakpoints();
  const auto& ps = f.pieces();
  for (const auto& b : bps) {
    Rat v = f.value_at(b);
    if (c <= v && v <= d) acc.add_point(b);
  }
  for (size_t i = 0; i + 1 < bps.size(); ++i) {
    const Rat &p = bps[i], &q = bps[i + 1];
    if (ps[i].a.sgn() == 0) {
      if (c <= ps[i].b && ps[i].b <= d) acc.add(RIv{p, q, false, false});
      continue;
    }
    Rat lo = (c - ps[i].b) / ps[i].a;
    Rat hi = (d - ps[i].b) / ps[i].a;
    if (lo > hi) std::swap(lo, hi);
    RIv cut{max(lo, p), min(hi, q), lo > p, hi < q};
    if (!cut.empty()) acc.add(cut);
  }
  return acc.intervals().size();
}

uint64_t pseudo_monotone_index(const PAff& f) {
  std::vector<Rat> crit;
  for (const auto& b : f.breakpoints()) {
    SideLimits s = side_limits(f, b);
    crit.push_back(s.left);
    crit.push_back(s.value);
    crit.push_back(s.right);
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  std::vector<Rat> grid;
  for (size_t i = 0; i < crit.size(); ++i) {
    grid.push_back(crit[i]);
    if (i + 1 < crit.size()) grid.push_back((crit[i] + crit[i + 1]) / Rat(2));
  }
  uint64_t best = 0;
  for (size_t i = 0; i < grid.size(); ++i)
    for (size_t j = i; j < grid.size(); ++j)
      best = std::max(best, preimage_components(f, grid[i], grid[j]));
  return best;
}

// ---- closed sets ----

namespace {

void check_closed(const RSet& c, const char* who) {
  if (!c.rational_only())
    fail(Errc::precondition_violated, std::string(who) + " needs rational interval data");
  for (const auto& iv : c.intervals())
    if (!iv.lo_closed || !iv.hi_closed)
      fail(Errc::precondition_violated, std::string(who) + " needs a closed set");
}

// f must restrict continuously to each span of c
void check_relative_continuity(const RSet& c, const PAff& f) {
  for (const auto& iv : c.intervals()) {
    if (iv.is_point()) continue;
    for (const auto& b : f.breakpoints())
      if (iv.lo < b && b < iv.hi && !classify_point(f, b).continuous)
        fail(Errc::precondition_violated, "not continuous at " + b.str() + " inside the set");
    SideLimits lo = side_limits(f, iv.lo);
    if (lo.right != lo.value)
      fail(Errc::precondition_violated, "not right-continuous at " + iv.lo.str());
    SideLimits hi = side_limits(f, iv.hi);
    if (hi.left != hi.value)
      fail(Errc::precondition_violated, "not left-continuous at " + iv.hi.str());
  }
}

}  // namespace

Rat closed_sup(const RSet& c) {
  check_closed(c, "supremum");
  if (c.empty()) fail(Errc::empty_set, "supremum of the empty set");
  return c.intervals().back().hi;
}

std::vector<RIv> complement_code(const RSet& c) {
  check_closed(c, "complement code");
  std::vector<RIv> out;
  Rat prev = kZero;
  bool prev_open = false;  // complement piece starts closed at 0
  for (const auto& iv : c.intervals()) {
    RIv piece{prev, iv.lo, !prev_open, false};
    if (!piece.empty()) out.push_back(piece);
    prev = iv.hi;
    prev_open = true;
  }
  RIv tail{prev, kOne, !prev_open, true};
  if (!tail.empty()) out.push_back(tail);
  return out;
}

PAff urysohn_separator(const RSet& c0, const RSet& c1) {
  check_closed(c0, "separator");
  check_closed(c1, "separator");
  for (const auto& a : c0.intervals())
    for (const auto& b : c1.intervals())
      if (!intersect_iv(a, b).empty())
        fail(Errc::not_disjoint, "the sets meet near " + intersect_iv(a, b).lo.str());

  struct Anchor {
    RIv iv;
    Rat val;
  };
  std::vector<Anchor> anchors;
  for (const auto& iv : c0.intervals()) anchors.push_back({iv, kZero});
  for (const auto& iv : c1.intervals()) anchors.push_back({iv, kOne});
  std::sort(anchors.begin(), anchors.end(),
            [](const Anchor& a, const Anchor& b) { return a.iv.lo < b.iv.lo; });

  if (anchors.empty()) return PAff::constant(Rat(1, 2));
  if (c0.empty()) return PAff::constant(kOne);
  if (c1.empty()) return PAff::constant(kZero);

  std::vector<std::pair<Rat, Rat>> nodes;
  nodes.emplace_back(kZero, anchors.front().val);
  for (const auto& a : anchors) {
    nodes.emplace_back(a.iv.lo, a.val);
    nodes.emplace_back(a.iv.hi, a.val);
  }
  nodes.emplace_back(kOne, anchors.back().val);
  return through_nodes(std::move(nodes));
}

PAff tietze_extend(const RSet& c, const PAff& f) {
  check_closed(c, "extension");
  if (c.empty()) fail(Errc::empty_set, "extension from the empty set");
  check_relative_continuity(c, f);

  std::vector<std::pair<Rat, Rat>> nodes;
  nodes.emplace_back(kZero, f.value_at(c.intervals().front().lo));
  for (const auto& iv : c.intervals()) {
    nodes.emplace_back(iv.lo, f.value_at(iv.lo));
    if (!iv.is_point())
      for (const auto& b : f.breakpoints())
        if (iv.lo < b && b < iv.hi) nodes.emplace_back(b, f.value_at(b));
    nodes.emplace_back(iv.hi, f.value_at(iv.hi));
  }
  nodes.emplace_back(kOne, f.value_at(c.intervals().back().hi));
  return through_nodes(std::move(nodes));
}

Rat closed_max_abs_point(const RSet& c, const PAff& f) {
  check_closed(c, "maximum");
  if (c.empty()) fail(Errc::empty_set, "maximum over the empty set");
  check_relative_continuity(c, f);

  std::vector<std::pair<Rat, Rat>> cands;  // (x, |f(x)|), position order
  for (const auto& iv : c.intervals()) {
    cands.emplace_back(iv.lo, abs(f.value_at(iv.lo)));
    if (!iv.is_point()) {
      for (const auto& b : f.breakpoints())
        if (iv.lo < b && b < iv.hi) cands.emplace_back(b, abs(f.value_at(b)));
      cands.emplace_back(iv.hi, abs(f.value_at(iv.hi)));
    }
  }
  Rat best = cands.front().second;
  for (const auto& [x, v] : cands) best = max(best, v);
  for (const auto& [x, v] : cands)
    if (v == best) return x;
  fail(Errc::invariant, "maximum lost");
}

}  // namespace mukleene

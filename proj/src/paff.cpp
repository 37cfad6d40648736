#include "mukleene/paff.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "json.hpp"
#include "mukleene/errors.hpp"

namespace mukleene {

namespace {

const Rat kZero = 0;
const Rat kOne = 1;

void check_parts(const std::vector<Rat>& bps, const std::vector<Piece>& pieces,
                 const std::vector<Rat>& vals) {
  if (bps.size() < 2) fail(Errc::precondition_violated, "need at least two breakpoints");
  if (bps.front() != kZero || bps.back() != kOne)
    fail(Errc::precondition_violated, "breakpoints must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < bps.size(); ++i)
    if (!(bps[i] < bps[i + 1]))
      fail(Errc::precondition_violated, "breakpoints must be strictly increasing");
  if (pieces.size() + 1 != bps.size())
    fail(Errc::precondition_violated, "piece count must be breakpoint count minus one");
  if (vals.size() != bps.size())
    fail(Errc::precondition_violated, "value count must match breakpoint count");
}

void check_range(const Rat& x) {
  if (x < kZero || x > kOne)
    fail(Errc::precondition_violated, "point " + x.str() + " outside [0,1]");
}

void check_window(const Rat& c, const Rat& d) {
  check_range(c);
  check_range(d);
  if (!(c < d))
    fail(Errc::degenerate_interval, "[" + c.str() + ", " + d.str() + "] is not a window");
}

}  // namespace

PAff::PAff() : bps_{kZero, kOne}, pieces_{Piece{0, 0}}, vals_{kZero, kZero} {}

PAff PAff::constant(const Rat& c) {
  PAff f;
  f.pieces_ = {Piece{0, c}};
  f.vals_ = {c, c};
  return f;
}

PAff PAff::affine(const Rat& a, const Rat& b) {
  PAff f;
  f.pieces_ = {Piece{a, b}};
  f.vals_ = {b, a + b};
  return f;
}

PAff PAff::from_parts(std::vector<Rat> breakpoints, std::vector<Piece> pieces,
                      std::vector<Rat> values) {
  check_parts(breakpoints, pieces, values);
  PAff f;
  f.bps_ = std::move(breakpoints);
  f.pieces_ = std::move(pieces);
  f.vals_ = std::move(values);
  return f;
}

size_t PAff::piece_of(const Rat& x) const {
  // Caller guarantees x is interior to some piece.
  auto it = std::upper_bound(bps_.begin(), bps_.end(), x);
  return static_cast<size_t>(it - bps_.begin()) - 1;
}

Rat PAff::value_at(const Rat& x) const {
  check_range(x);
  auto it = std::lower_bound(bps_.begin(), bps_.end(), x);
  if (it != bps_.end() && *it == x) return vals_[static_cast<size_t>(it - bps_.begin())];
  return pieces_[piece_of(x)].at(x);
}

Rat PAff::left_limit(const Rat& x) const {
  check_range(x);
  if (!(x > kZero)) fail(Errc::precondition_violated, "no left limit at 0");
  auto it = std::lower_bound(bps_.begin(), bps_.end(), x);
  if (it != bps_.end() && *it == x)
    return pieces_[static_cast<size_t>(it - bps_.begin()) - 1].at(x);
  return pieces_[piece_of(x)].at(x);
}

Rat PAff::right_limit(const Rat& x) const {
  check_range(x);
  if (!(x < kOne)) fail(Errc::precondition_violated, "no right limit at 1");
  auto it = std::lower_bound(bps_.begin(), bps_.end(), x);
  if (it != bps_.end() && *it == x) return pieces_[static_cast<size_t>(it - bps_.begin())].at(x);
  return pieces_[piece_of(x)].at(x);
}

PAff PAff::with_breakpoint(const Rat& x) const {
  check_range(x);
  if (std::binary_search(bps_.begin(), bps_.end(), x)) return *this;
  size_t i = piece_of(x);
  PAff f = *this;
  f.bps_.insert(f.bps_.begin() + static_cast<long>(i) + 1, x);
  f.pieces_.insert(f.pieces_.begin() + static_cast<long>(i), pieces_[i]);
  f.vals_.insert(f.vals_.begin() + static_cast<long>(i) + 1, pieces_[i].at(x));
  return f;
}

PAff PAff::scale(const Rat& c) const {
  PAff f = *this;
  for (auto& p : f.pieces_) {
    p.a *= c;
    p.b *= c;
  }
  for (auto& v : f.vals_) v *= c;
  return f;
}

PAff PAff::shift(const Rat& c) const {
  PAff f = *this;
  for (auto& p : f.pieces_) p.b += c;
  for (auto& v : f.vals_) v += c;
  return f;
}

namespace {

PAff combine(const PAff& f, const PAff& g, int gsign) {
  std::vector<Rat> bps;
  std::merge(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
             g.breakpoints().end(), std::back_inserter(bps));
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  std::vector<Piece> pieces;
  std::vector<Rat> vals;
  vals.reserve(bps.size());
  for (size_t i = 0; i + 1 < bps.size(); ++i) {
    // Both functions are affine across (bps[i], bps[i+1]) because every
    // breakpoint of either appears in bps; side limits pin each line.
    Rat len = bps[i + 1] - bps[i];
    Rat fa = f.right_limit(bps[i]), fb = f.left_limit(bps[i + 1]);
    Rat ga = g.right_limit(bps[i]), gb = g.left_limit(bps[i + 1]);
    Rat slope = (fb - fa) / len + Rat(gsign) * (gb - ga) / len;
    Rat offset = fa + Rat(gsign) * ga - slope * bps[i];
    pieces.push_back(Piece{slope, offset});
  }
  for (const auto& x : bps) vals.push_back(f.value_at(x) + Rat(gsign) * g.value_at(x));
  return PAff::from_parts(std::move(bps), std::move(pieces), std::move(vals));
}

}  // namespace

PAff operator+(const PAff& f, const PAff& g) { return combine(f, g, +1); }
PAff operator-(const PAff& f, const PAff& g) { return combine(f, g, -1); }

bool operator==(const PAff& f, const PAff& g) {
  // Structural equality after inserting each other's breakpoints, so
  // redundant breakpoints do not break comparison.
  PAff a = f, b = g;
  for (const auto& x : g.breakpoints()) a = a.with_breakpoint(x);
  for (const auto& x : f.breakpoints()) b = b.with_breakpoint(x);
  return a.breakpoints() == b.breakpoints() && a.pieces() == b.pieces() && a.values() == b.values();
}

bool PAff::is_continuous() const {
  for (size_t i = 0; i < bps_.size(); ++i) {
    if (i > 0 && pieces_[i - 1].at(bps_[i]) != vals_[i]) return false;
    if (i + 1 < bps_.size() && pieces_[i].at(bps_[i]) != vals_[i]) return false;
  }
  return true;
}

bool PAff::is_nondecreasing() const {
  for (const auto& p : pieces_)
    if (p.a.sgn() < 0) return false;
  for (size_t i = 0; i < bps_.size(); ++i) {
    if (i > 0 && pieces_[i - 1].at(bps_[i]) > vals_[i]) return false;
    if (i + 1 < bps_.size() && vals_[i] > pieces_[i].at(bps_[i])) return false;
  }
  return true;
}

bool PAff::is_strictly_increasing() const {
  if (!is_nondecreasing()) return false;
  for (const auto& p : pieces_)
    if (p.a.sgn() == 0) return false;
  // Nondecreasing with strictly rising pieces can still pause at a breakpoint
  // only by a downward jump, which is_nondecreasing already excludes.
  return true;
}

std::string PAff::to_json() const {
  nlohmann::json j;
  j["breakpoints"] = nlohmann::json::array();
  for (const auto& x : bps_) j["breakpoints"].push_back(x.str());
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : pieces_) j["pieces"].push_back({{"a", p.a.str()}, {"b", p.b.str()}});
  j["values"] = nlohmann::json::array();
  for (const auto& v : vals_) j["values"].push_back(v.str());
  return j.dump();
}

PAff PAff::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format_error, std::string("bad function json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("pieces") ||
      !j.contains("values"))
    fail(Errc::format_error, "function json needs breakpoints, pieces, values");
  auto rat_at = [](const nlohmann::json& node) {
    if (!node.is_string()) fail(Errc::format_error, "rationals must be \"p/q\" strings");
    return Rat::parse(node.get<std::string>());
  };
  std::vector<Rat> bps, vals;
  std::vector<Piece> pieces;
  if (!j["breakpoints"].is_array() || !j["pieces"].is_array() || !j["values"].is_array())
    fail(Errc::format_error, "breakpoints, pieces, values must be arrays");
  for (const auto& node : j["breakpoints"]) bps.push_back(rat_at(node));
  for (const auto& node : j["pieces"]) {
    if (!node.is_object() || !node.contains("a") || !node.contains("b"))
      fail(Errc::format_error, "each piece needs slope a and offset b");
    pieces.push_back(Piece{rat_at(node["a"]), rat_at(node["b"])});
  }
  for (const auto& node : j["values"]) vals.push_back(rat_at(node));
  return from_parts(std::move(bps), std::move(pieces), std::move(vals));
}

SideLimits side_limits(const PAff& f, const Rat& x) {
  check_range(x);
  SideLimits s;
  s.value = f.value_at(x);
  s.left = x > kZero ? f.left_limit(x) : s.value;
  s.right = x < kOne ? f.right_limit(x) : s.value;
  return s;
}

namespace {

// Breakpoints strictly inside (c, d), then a pass over the closed segments
// [c, b1], [b1, b2], ..., [bk, d]. Used by every [c, d] functional below.
struct Segmentation {
  std::vector<Rat> cuts;  // c, interior breakpoints, d
  const PAff* f;
  Rat seg_left_value(size_t i) const { return f->right_limit(cuts[i]); }
  Rat seg_right_value(size_t i) const { return f->left_limit(cuts[i + 1]); }
  Rat seg_slope(size_t i) const {
    return (seg_right_value(i) - seg_left_value(i)) / (cuts[i + 1] - cuts[i]);
  }
};

Segmentation segment(const PAff& f, const Rat& c, const Rat& d) {
  check_window(c, d);
  Segmentation s;
  s.f = &f;
  s.cuts.push_back(c);
  for (const auto& b : f.breakpoints())
    if (c < b && b < d) s.cuts.push_back(b);
  s.cuts.push_back(d);
  return s;
}

}  // namespace

Rat variation(const PAff& f, const Rat& c, const Rat& d) {
  Segmentation s = segment(f, c, d);
  Rat total = 0;
  for (size_t i = 0; i + 1 < s.cuts.size(); ++i)
    total += abs(s.seg_right_value(i) - s.seg_left_value(i));
  // Interior jumps, both sides; one-sided at the window edges.
  total += abs(f.right_limit(c) - f.value_at(c));
  total += abs(f.value_at(d) - f.left_limit(d));
  for (size_t i = 1; i + 1 < s.cuts.size(); ++i) {
    const Rat& b = s.cuts[i];
    total += abs(f.value_at(b) - f.left_limit(b));
    total += abs(f.right_limit(b) - f.value_at(b));
  }
  return total;
}

Rat restricted_variation(const PAff& f, std::vector<Rat> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (const auto& x : points) check_range(x);
  Rat total = 0;
  for (size_t i = 0; i + 1 < points.size(); ++i)
    total += abs(f.value_at(points[i + 1]) - f.value_at(points[i]));
  return total;
}

namespace {

struct Candidate {
  Rat value;
  bool attained;
  Rat location;
};

SupResult pick_best(std::vector<Candidate> cands) {
  SupResult best{cands.front().value, cands.front().attained, cands.front().location};
  for (const auto& c : cands) {
    if (c.value > best.value || (c.value == best.value && c.attained && !best.attained)) {
      best.value = c.value;
      best.attained = c.attained;
      best.location = c.location;
    }
  }
  return best;
}

}  // namespace

SupResult supremum(const PAff& f, const Rat& c, const Rat& d) {
  Segmentation s = segment(f, c, d);
  std::vector<Candidate> cands;
  for (const auto& x : s.cuts) cands.push_back({f.value_at(x), true, x});
  for (size_t i = 0; i + 1 < s.cuts.size(); ++i) {
    const Rat& p = s.cuts[i];
    const Rat& q = s.cuts[i + 1];
    Rat slope = s.seg_slope(i);
    if (slope.sgn() > 0)
      cands.push_back({s.seg_right_value(i), false, q});
    else if (slope.sgn() < 0)
      cands.push_back({s.seg_left_value(i), false, p});
    else
      cands.push_back({s.seg_left_value(i), true, (p + q) / 2});
  }
  return pick_best(std::move(cands));
}

SupResult infimum(const PAff& f, const Rat& c, const Rat& d) {
  SupResult r = supremum(f.scale(-1), c, d);
  r.value = -r.value;
  return r;
}

Rat integrate(const PAff& f, const Rat& c, const Rat& d) {
  Segmentation s = segment(f, c, d);
  Rat total = 0;
  for (size_t i = 0; i + 1 < s.cuts.size(); ++i)
    total += (s.seg_left_value(i) + s.seg_right_value(i)) / 2 * (s.cuts[i + 1] - s.cuts[i]);
  return total;
}

Rat integrate_abs_derivative(const PAff& f, const Rat& c, const Rat& d) {
  Segmentation s = segment(f, c, d);
  Rat total = 0;
  for (size_t i = 0; i + 1 < s.cuts.size(); ++i)
    total += abs(s.seg_right_value(i) - s.seg_left_value(i));
  return total;
}

std::pair<Rat, Rat> integrate_arclen_density(const PAff& f, const Rat& c, const Rat& d, long p) {
  Segmentation s = segment(f, c, d);
  // Widths add up weighted by segment lengths; total length <= 1, so one
  // extra bit of per-segment precision covers the sum.
  Rat lo = 0, hi = 0;
  for (size_t i = 0; i + 1 < s.cuts.size(); ++i) {
    Rat a = s.seg_slope(i);
    auto [slo, shi] = sqrt_enclosure(Rat(1) + a * a, p + 1);
    Rat len = s.cuts[i + 1] - s.cuts[i];
    lo += slo * len;
    hi += shi * len;
  }
  return {lo, hi};
}

std::pair<Rat, Rat> arc_length(const PAff& f, const Rat& c, const Rat& d, long p) {
  Segmentation s = segment(f, c, d);
  size_t nseg = s.cuts.size() - 1;
  long prec = p + 1 + static_cast<long>(std::bit_width(nseg));
  Rat lo = 0, hi = 0;
  for (size_t i = 0; i < nseg; ++i) {
    Rat dx = s.cuts[i + 1] - s.cuts[i];
    Rat dy = s.seg_right_value(i) - s.seg_left_value(i);
    auto [slo, shi] = sqrt_enclosure(dx * dx + dy * dy, prec);
    lo += slo;
    hi += shi;
  }
  // Jumps contribute vertical segments of exactly their magnitude; the graph
  // completion joins limit and value at each discontinuity.
  Rat jumps = abs(f.right_limit(c) - f.value_at(c)) + abs(f.value_at(d) - f.left_limit(d));
  for (size_t i = 1; i < nseg; ++i) {
    const Rat& b = s.cuts[i];
    jumps += abs(f.value_at(b) - f.left_limit(b));
    jumps += abs(f.right_limit(b) - f.value_at(b));
  }
  return {lo + jumps, hi + jumps};
}

Rat Indicatrix::integral() const {
  Rat total = 0;
  for (const auto& band : bands) total += Rat(static_cast<long>(band.count)) * (band.hi - band.lo);
  return total;
}

Indicatrix indicatrix(const PAff& f) {
  const auto& bps = f.breakpoints();
  size_t nseg = bps.size() - 1;
  // Critical values: every point value and every one-sided limit. Between
  // consecutive critical values the solution count of f(x) = y is constant.
  std::set<Rat> crit;
  for (const auto& v : f.values()) crit.insert(v);
  std::vector<Rat> seg_lo(nseg), seg_hi(nseg);
  for (size_t i = 0; i < nseg; ++i) {
    seg_lo[i] = f.right_limit(bps[i]);
    seg_hi[i] = f.left_limit(bps[i + 1]);
    crit.insert(seg_lo[i]);
    crit.insert(seg_hi[i]);
  }
  std::vector<Rat> ys(crit.begin(), crit.end());

  Indicatrix ind;
  for (size_t j = 0; j + 1 < ys.size(); ++j) {
    uint64_t count = 0;
    for (size_t i = 0; i < nseg; ++i) {
      const Rat& a = min(seg_lo[i], seg_hi[i]);
      const Rat& b = max(seg_lo[i], seg_hi[i]);
      if (a == b) continue;  // constant piece, its value is critical
      if (a <= ys[j] && ys[j + 1] <= b) ++count;
    }
    ind.bands.push_back({ys[j], ys[j + 1], count});
  }
  for (const auto& y : ys) {
    IndicatrixLevel lvl{y, 0, false};
    for (const auto& v : f.values())
      if (v == y) ++lvl.count;
    for (size_t i = 0; i < nseg; ++i) {
      const Rat& a = min(seg_lo[i], seg_hi[i]);
      const Rat& b = max(seg_lo[i], seg_hi[i]);
      if (a == b) {
        if (a == y) lvl.infinite = true;
      } else if (a < y && y < b) {
        ++lvl.count;
      }
    }
    ind.levels.push_back(lvl);
  }
  return ind;
}

std::pair<PAff, PAff> envelopes(const PAff& f) {
  std::vector<Rat> lo_vals, hi_vals;
  for (const auto& x : f.breakpoints()) {
    SideLimits s = side_limits(f, x);
    lo_vals.push_back(min(min(s.left, s.right), s.value));
    hi_vals.push_back(max(max(s.left, s.right), s.value));
  }
  PAff lo = PAff::from_parts(f.breakpoints(), f.pieces(), std::move(lo_vals));
  PAff hi = PAff::from_parts(f.breakpoints(), f.pieces(), std::move(hi_vals));
  return {std::move(lo), std::move(hi)};
}

PointClass classify_point(const PAff& f, const Rat& x) {
  SideLimits s = side_limits(f, x);
  PointClass pc;
  pc.left = s.left;
  pc.value = s.value;
  pc.right = s.right;
  pc.continuous = s.left == s.value && s.value == s.right;
  pc.removable = s.left == s.right && s.left != s.value;
  pc.jump = s.left != s.right;
  pc.quasi_continuous = s.value == s.left || s.value == s.right;
  pc.lower_semicontinuous = s.value <= min(s.left, s.right);
  pc.upper_semicontinuous = s.value >= max(s.left, s.right);
  return pc;
}

}  // namespace mukleene

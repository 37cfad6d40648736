#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mukleene/rational.hpp"

namespace mukleene {

// Affine map a*x + b used on one open piece.
struct Piece {
  Rat a;
  Rat b;
  Rat at(const Rat& x) const { return a * x + b; }
  friend bool operator==(const Piece& p, const Piece& q) { return p.a == q.a && p.b == q.b; }
};

// Piecewise-affine function on [0,1]: breakpoints 0 = b0 < ... < bm = 1, an
// affine map on each open piece, an explicit value at every breakpoint. Side
// limits are exact, so the function is regulated and of bounded variation by
// construction.
class PAff {
public:
  PAff();  // constant 0
  static PAff constant(const Rat& c);
  static PAff affine(const Rat& a, const Rat& b);
  static PAff from_parts(std::vector<Rat> breakpoints, std::vector<Piece> pieces,
                         std::vector<Rat> values);

  const std::vector<Rat>& breakpoints() const { return bps_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Rat>& values() const { return vals_; }

  Rat value_at(const Rat& x) const;
  Rat left_limit(const Rat& x) const;   // x in (0,1]
  Rat right_limit(const Rat& x) const;  // x in [0,1)

  // Ensures x appears as a breakpoint (value and limits unchanged).
  PAff with_breakpoint(const Rat& x) const;

  PAff scale(const Rat& c) const;
  PAff shift(const Rat& c) const;
  friend PAff operator+(const PAff& f, const PAff& g);
  friend PAff operator-(const PAff& f, const PAff& g);
  friend bool operator==(const PAff& f, const PAff& g);
  friend bool operator!=(const PAff& f, const PAff& g) { return !(f == g); }

  bool is_continuous() const;
  bool is_nondecreasing() const;
  bool is_strictly_increasing() const;

  // Canonical serialization; golden-test stable.
  std::string to_json() const;
  static PAff from_json(const std::string& text);

private:
  std::vector<Rat> bps_;
  std::vector<Piece> pieces_;
  std::vector<Rat> vals_;
  size_t piece_of(const Rat& x) const;  // index i with bps_[i] < x < bps_[i+1]
};

struct SideLimits {
  Rat left, value, right;
};
// Exact side limits; at 0 and 1 the missing side mirrors the value.
SideLimits side_limits(const PAff& f, const Rat& x);

// Total variation over [c, d]: per-piece |slope| * length plus the jump
// magnitudes at breakpoints, one-sided at c and d.
Rat variation(const PAff& f, const Rat& c, const Rat& d);

// Partition sums restricted to the given points (plus nothing else).
Rat restricted_variation(const PAff& f, std::vector<Rat> points);

struct SupResult {
  Rat value;
  bool attained = false;
  Rat location;  // attaining point, or the point the sup is approached at
};
SupResult supremum(const PAff& f, const Rat& c, const Rat& d);
SupResult infimum(const PAff& f, const Rat& c, const Rat& d);

Rat integrate(const PAff& f, const Rat& c, const Rat& d);
Rat integrate_abs_derivative(const PAff& f, const Rat& c, const Rat& d);

// Enclosures of width at most 2^-p.
std::pair<Rat, Rat> integrate_arclen_density(const PAff& f, const Rat& c, const Rat& d, long p);
std::pair<Rat, Rat> arc_length(const PAff& f, const Rat& c, const Rat& d, long p);

// Solution counts of f(x) = y. Bands are open y-intervals with a constant
// finite count; levels are the critical values, counted separately, with the
// infinite flag for values taken on a constant piece.
struct IndicatrixBand {
  Rat lo, hi;
  uint64_t count;
};
struct IndicatrixLevel {
  Rat y;
  uint64_t count;
  bool infinite;
};
struct Indicatrix {
  std::vector<IndicatrixBand> bands;
  std::vector<IndicatrixLevel> levels;
  Rat integral() const;  // levels are null sets and do not contribute
};
Indicatrix indicatrix(const PAff& f);

std::pair<PAff, PAff> envelopes(const PAff& f);  // (lower, upper)

struct PointClass {
  bool continuous, removable, jump, quasi_continuous, lower_semicontinuous, upper_semicontinuous;
  Rat left, value, right;
};
PointClass classify_point(const PAff& f, const Rat& x);

}  // namespace mukleene

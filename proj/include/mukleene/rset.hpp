#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mukleene/creal.hpp"
#include "mukleene/paff.hpp"
#include "mukleene/rational.hpp"

namespace mukleene {

// One interval with independent endpoint closures. lo == hi with both ends
// closed is a point; with either end open it is empty.
struct RIv {
  Rat lo, hi;
  bool lo_closed = true, hi_closed = true;

  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  bool is_point() const { return lo == hi && lo_closed && hi_closed; }
  bool contains(const Rat& x) const;
  friend bool operator==(const RIv& a, const RIv& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
           a.hi_closed == b.hi_closed;
  }
};

RIv closed_iv(const Rat& lo, const Rat& hi);
RIv point_iv(const Rat& x);
RIv intersect_iv(const RIv& a, const RIv& b);

// Finite union of rational intervals inside [0,1], kept sorted and disjoint,
// plus optionally a finite list of computable-real points. The real points
// are compared through enclosures of width 2^-extra_precision, so membership
// and window tests are accurate to that width rather than exact.
class RSet {
public:
  static constexpr long kExtraPrecision = 60;

  RSet() = default;
  static RSet from_points(const std::vector<Rat>& pts);
  static RSet interval(const RIv& iv);

  void add(const RIv& iv);
  void add_point(const Rat& x);
  void add_creal(const CReal& x);

  const std::vector<RIv>& intervals() const { return ivs_; }
  const std::vector<CReal>& extras() const { return extras_; }
  bool rational_only() const { return extras_.empty(); }
  bool empty() const;

  // Number of elements when the set is finite; nullopt when some interval
  // has positive length. Real extras count as distinct points.
  std::optional<uint64_t> exact_card() const;

  bool contains(const Rat& x) const;
  bool nonempty_in(const RIv& window) const;

  Rat sup() const;  // EmptySet when empty; real extras resolved by enclosure
  Rat inf() const;

  // Indicator as a function on [0,1]. Requires a rational-only set.
  PAff characteristic() const;

  std::string to_json() const;  // rational-only sets
  static RSet from_json(const std::string& text);

private:
  std::vector<RIv> ivs_;
  std::vector<CReal> extras_;
  void normalize();
};

}  // namespace mukleene

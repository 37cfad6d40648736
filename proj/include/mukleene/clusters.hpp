#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mukleene/paff.hpp"
#include "mukleene/rset.hpp"

namespace mukleene {

// ---------------------------------------------------------------------------
// Set oracle boundary.
//
// Locators and counters see a set X ⊆ [0,1] only through interval-emptiness
// questions plus whatever cardinality data the oracle declares up front.
// Every question is logged in order, so a report can replay the interaction.
// ---------------------------------------------------------------------------

struct CardInfo {
  enum class Kind : uint8_t { none, exact, upper_bound };
  Kind kind = Kind::none;
  uint64_t value = 0;

  static CardInfo unknown() { return {Kind::none, 0}; }
  static CardInfo exactly(uint64_t n) { return {Kind::exact, n}; }
  static CardInfo at_most(uint64_t n) { return {Kind::upper_bound, n}; }
};

class SetQuery {
public:
  virtual ~SetQuery() = default;

  // "is X ∩ w nonempty?"; logged.
  bool nonempty_in(const RIv& w);

  virtual CardInfo cardinality() const = 0;

  const std::vector<RIv>& query_log() const { return log_; }
  uint64_t query_count() const { return log_.size(); }

protected:
  virtual bool answer(const RIv& w) = 0;

private:
  std::vector<RIv> log_;
};

// Ground-truth oracle over a concrete set. Cardinality defaults to the exact
// count when the set is a finite list of points, unknown otherwise.
class RSetQuery final : public SetQuery {
public:
  explicit RSetQuery(RSet s);
  RSetQuery(RSet s, CardInfo declared);

  CardInfo cardinality() const override { return card_; }
  const RSet& ground_truth() const { return set_; }

protected:
  bool answer(const RIv& w) override;

private:
  RSet set_;
  CardInfo card_;
};

// ---------------------------------------------------------------------------
// Locators and counters over the oracle boundary.
// ---------------------------------------------------------------------------

// Rational window lo ≤ x ≤ hi around a located element.
struct Enclosure {
  Rat lo, hi;

  Rat mid() const { return (lo + hi) / Rat(2); }
  Rat width() const { return hi - lo; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Enclosure& a, const Enclosure& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

// Locator outcome. The sentinel is the reserved empty-set token; an actual
// element always arrives as an enclosure, so the two never alias.
struct Located {
  bool sentinel = false;
  Enclosure where;
};

// X ∩ [0,1] emptiness flag: 1 when nonempty. Meaningful under a ≤1 promise.
uint64_t emptiness_flag(SetQuery& x);

// Element of an at-most-one-element set, to width ≤ 2^-p, by window halving;
// sentinel on the empty set. Both halves nonempty contradicts the promise
// (PreconditionViolated); both empty under a nonempty parent means the oracle
// lied (OracleInconsistent).
Located locate_unique(SetQuery& x, long p);

// Same, but the set is promised to hold exactly one element; empty input is
// a PreconditionViolated.
Enclosure extract_singleton(SetQuery& x, long p);

// Disjoint width ≤ 2^-p windows covering a finite set, left to right. Every
// returned window holds at least one element. EnumerationTooLarge when the
// subdivision would emit more windows than the desk cap allows.
std::vector<Enclosure> cover_finite(SetQuery& x, long p);

// cover_finite plus a cardinality gate: more separated groups than n is a
// PreconditionViolated. exact-mode cannot certify fewer than n, only reject
// more; the windows are returned either way.
std::vector<Enclosure> cover_exactly(SetQuery& x, uint64_t n, long p);
std::vector<Enclosure> cover_at_most(SetQuery& x, uint64_t n, long p);

// Exact cardinality. Declared-exact data is answered directly; a declared
// upper bound is certified by refining until that many separated groups
// appear (PrecisionExhausted when they never do); no data at all is a
// PreconditionViolated.
uint64_t exact_count(SetQuery& x, long p);

// Some n ≥ |X|, straight from the declared data.
uint64_t count_bound(SetQuery& x);

enum class OmegaVariant : uint8_t {
  flag,           // emptiness 0/1
  locate,         // ≤1 element, sentinel on empty
  extract,        // exactly 1 element
  cover,          // all elements of a finite set
  cover_exact,    // ... promised |X| = n
  cover_at_most,  // ... promised |X| ≤ n
  count,          // |X|
  count_bound,    // some n ≥ |X|
};

const char* omega_variant_name(OmegaVariant v);
OmegaVariant omega_variant_from_name(const std::string& s);

struct OmegaOptions {
  long precision = 30;
  uint64_t n = 0;  // cover_exact / cover_at_most parameter
};

struct OmegaResult {
  OmegaVariant variant = OmegaVariant::flag;
  uint64_t flag = 0;
  bool sentinel = false;
  std::vector<Enclosure> elements;
  std::optional<uint64_t> count;
  uint64_t queries_used = 0;
};

// Single entry point over the variants above (CLI surface).
OmegaResult omega_family(SetQuery& x, OmegaVariant v, const OmegaOptions& opt = {});

// ---------------------------------------------------------------------------
// Reductions between the counters and the locators.
// ---------------------------------------------------------------------------

// Extensional "some n ≥ |S|" functional: equal sets must get equal answers.
using GeCountFn = std::function<uint64_t(const RSet&)>;

// Emptiness of X (≤1 promise) from a ≥-cardinality functional alone: with
// k the functional's answer for X itself, plant k+1 affine copies of X side
// by side in [0,1]; a nonempty X forces k+1 distinct preimages, while an
// empty X hands the functional the very same set and so the very same k.
bool nonempty_via_count_bound(const RSet& x, const GeCountFn& bound);

// Location by halving with the copy test deciding each half. Rational sets
// only (restriction to half-windows must stay exact).
Located locate_via_count_bound(const RSet& x, const GeCountFn& bound, long p);

// The k+1 affine preimage copies themselves (one per subinterval of an
// equal-width partition); exposed for the validation suite.
RSet affine_copies(const RSet& x, uint64_t copies);

// Least element of a finite set by the self-referential filter: a point
// survives exactly when the recursive call on its strict predecessors comes
// back with the sentinel, and the located element of the filtered set is the
// answer. Runs over the oracle boundary; separation of distinct elements
// beyond width 2^-40 is assumed at desk scale.
struct LeastResult {
  bool sentinel = false;
  Enclosure least;
  uint64_t recursive_calls = 0;
};
LeastResult least_via_filter(SetQuery& x, long p);

// ≺-least element of b ⊆ x under a caller-supplied strict order, by the same
// filter with predecessors read through ≺. Reflexive points, cycles and
// non-unique minimal elements all surface as InconsistentOrder.
using StrictOrder = std::function<bool(const Rat&, const Rat&)>;

struct WoResult {
  bool sentinel = false;
  Rat least;
  uint64_t recursive_calls = 0;
};
WoResult wo_least(const RSet& x, const RSet& b, const StrictOrder& before);

// ---------------------------------------------------------------------------
// Decompositions and witnesses over the piecewise-affine class.
// ---------------------------------------------------------------------------

// x ↦ variation of f over [0,x], assembled piecewise: slope |a| along each
// piece, jump magnitudes at each breakpoint.
PAff variation_prefix(const PAff& f);

struct JordanPair {
  PAff g, h;  // f = g − h, both nondecreasing
};

enum class JordanRoute : uint8_t {
  plain,
  bounded,          // caller supplies k ≥ variation(f,0,1); BadBound below it
  exact_variation,  // caller supplies the variation itself; BadVariation else
};

JordanPair jordan_decompose(const PAff& f, JordanRoute route = JordanRoute::plain,
                            const std::optional<Rat>& supplied = std::nullopt);

// Both sides of the window form V(f,c,d) = g(d)−g(c)+h(c)−h(d), evaluated
// exactly. The right side collapses to f(d)−f(c), so the form holds only on
// windows where f's variation is its net increase; the checker exists so the
// validation suite can chart exactly where it fails.
struct WindowIdentity {
  Rat lhs, rhs;
  bool holds = false;
};
WindowIdentity variation_window_identity(const PAff& f, const JordanPair& jd, const Rat& c,
                                         const Rat& d);

inline constexpr uint64_t kRemovableSeverity = ~uint64_t{0};

struct Discontinuity {
  Rat x;
  Rat jump;           // |f(x+) − f(x−)|
  Rat defect;         // |f(x) − f(x−)| + |f(x+) − f(x)|
  bool removable = false;
  uint64_t severity = 0;  // least k with jump > 2^-k; kRemovableSeverity at jump 0
};

// Every discontinuity, largest jump first (ties by position); removable
// points trail. Continuous input gives the empty list.
std::vector<Discontinuity> discontinuity_enum(const PAff& f);

// Closed-set code of each discontinuity point: the complement written as the
// two relatively open pieces [0,x) and (x,1], in discontinuity_enum order.
std::vector<std::pair<RIv, RIv>> fsigma_export(const PAff& f);

// ---------------------------------------------------------------------------
// Enumerations of finite sets with injective ℕ-labels.
// ---------------------------------------------------------------------------

using IndexFn = std::function<uint64_t(const Rat&)>;

struct EnumEntry {
  Rat x;
  uint64_t index;
};

enum class EnumMode : uint8_t {
  by_index_search,  // ascending label order, unused labels skipped
  weak_bijection,   // labels must be exactly 0..|A|-1; MissingPreimage else
};

std::vector<EnumEntry> enumerate_set(const RSet& a, const IndexFn& y, EnumMode mode);

// Supremum of a listed nonempty set, read off the enumeration.
Rat listed_sup(const RSet& a, const IndexFn& y);

// sup_{t ∈ A} |x − t| = max(|x − inf A|, |x − sup A|).
Rat distance_to_extremes(const Rat& x, const RSet& a, const IndexFn& y);

// Right-continuous staircase with a jump of 2^-n at the n-th input point;
// at most the first `limit` points are used, limit ≤ 30.
PAff staircase_from_points(const std::vector<Rat>& points, uint64_t limit);

// ---------------------------------------------------------------------------
// Structural factorisations.
// ---------------------------------------------------------------------------

// f = g ∘ h with h strictly increasing and g continuous: h opens a gap of
// length defect(x) at every discontinuity (position inside the gap split by
// the left/right defect parts), the whole domain is rescaled back onto
// [0,1], and g bridges each gap affinely through f's value at the point.
struct SierpinskiFactor {
  PAff g, h;
};
SierpinskiFactor sierpinski_factor(const PAff& f);

// n-th continuous stage converging pointwise to f: each discontinuity is
// re-drawn affinely over a window of half-width ≤ 2^-(n+1) (clamped inside
// the neighbouring breakpoints) with the node pinned at (x, f(x)). n ≥ 1.
PAff baire_stage(const PAff& f, uint64_t n);

// Location of the maximum of |f| for upper semicontinuous f. NotUsc with a
// witness point when the precondition fails; NotAttained when |f| only
// approaches its supremum (possible once f takes negative values).
Rat usc_max_location(const PAff& f);

// ---------------------------------------------------------------------------
// Recovery of a finite set from a level-count oracle.
// ---------------------------------------------------------------------------

// y-level census oracle for a function: what indicatrix(f) returns.
using IndicatrixFn = std::function<Indicatrix(const PAff&)>;

struct RecoveredPoint {
  uint64_t index;
  Enclosure where;
};

// Finds every point of A together with its label, using the level-count
// oracle as the only decision procedure: the point with label n lies past q
// iff the test function "2^-(n+1) at the members above q, else 0" has level
// count 1 at 2^-(n+1). Existence first, then halving on q; a point at 0 is
// recognized exactly. Contradictions with the input set's own membership
// surface as OracleInconsistent.
std::vector<RecoveredPoint> enum_via_indicatrix(const RSet& a, const IndexFn& y,
                                                const IndicatrixFn& n_oracle, long p);

// ---------------------------------------------------------------------------
// Injective labelling of jump points.
// ---------------------------------------------------------------------------

// Label = 2^n · p_{1+z} where n is the least index with jump ≥ 2^-n, p the
// primes, and z the position of the first rational (in the fixed enumeration
// 0, 1, then rising denominators with coprime numerators) within a ball
// around the point whose radius keeps distinct jump points apart. Non-jump
// points (including removable discontinuities) get 0.
class JumpLabeller {
public:
  explicit JumpLabeller(const PAff& f);

  mpz_class operator()(const Rat& x) const;

  const std::vector<Rat>& jump_points() const { return points_; }
  // 1 + number of (ordered pair, scale) incidences among points with jump
  // ≥ 2^-n; ball radius at level n is 2^-(this+2).
  uint64_t separation_exponent(uint64_t n) const;
  uint64_t max_level() const { return levels_.empty() ? 0 : *std::max_element(levels_.begin(), levels_.end()); }

private:
  std::vector<Rat> points_;
  std::vector<uint64_t> levels_;
  std::vector<mpz_class> labels_;
  std::vector<uint64_t> sep_;
};

// ---------------------------------------------------------------------------
// Absolute-continuity diagnostics.
// ---------------------------------------------------------------------------

enum class AcMode : uint8_t {
  fundamental,           // f(y) − f(0) vs ∫₀ʸ f′
  lipschitz,             // same gap; verdict about the Lipschitz property
  variation_vs_integral, // V(f,0,y) vs ∫₀ʸ |f′|
  singular,              // slopes all zero: two points with different values
  lusin,                 // null sets map to null sets; always holds here
};

const char* ac_mode_name(AcMode m);
AcMode ac_mode_from_name(const std::string& s);

struct AcReport {
  AcMode mode = AcMode::fundamental;
  bool holds = false;
  std::optional<Rat> witness_x;  // second point, singular mode only
  std::optional<Rat> witness_y;
  Rat gap;       // |lhs − rhs| at the witness; 0 when holds
  int gap_sign = 0;  // sign of lhs − rhs before the magnitude was taken
  std::string detail;
};

AcReport ac_diagnostics(const PAff& f, AcMode mode);

// ---------------------------------------------------------------------------
// Preimage complexity.
// ---------------------------------------------------------------------------

// Number of interval components of f⁻¹([c,d]) (c ≤ d; c = d allowed).
uint64_t preimage_components(const PAff& f, const Rat& c, const Rat& d);

// Least n with every f⁻¹([c,d]) a union of ≤ n intervals. The scan runs over
// level pairs drawn from breakpoint values, one-sided limits, and midpoints
// between adjacent critical levels; component counts only change when a level
// crosses a critical value.
uint64_t pseudo_monotone_index(const PAff& f);

// ---------------------------------------------------------------------------
// Closed sets with piecewise-affine data.
// ---------------------------------------------------------------------------

// Largest element of a nonempty closed set (finite unions of closed rational
// intervals and points throughout this block).
Rat closed_sup(const RSet& c);

// The complement [0,1] ∖ C as a sorted list of relatively open intervals.
std::vector<RIv> complement_code(const RSet& c);

// Continuous [0,1]-valued separator: 0 on c0, 1 on c1, affine across the
// gaps. NotDisjoint when the sets meet.
PAff urysohn_separator(const RSet& c0, const RSet& c1);

// Continuous extension of f's restriction to C: f itself on C, affine across
// complement gaps, constant on the two outer tails. Preserves sup_C f.
// Requires f continuous relative to C.
PAff tietze_extend(const RSet& c, const PAff& f);

// Point of C at which |f| is maximal over C (first such, left to right).
Rat closed_max_abs_point(const RSet& c, const PAff& f);

}  // namespace mukleene

#include "mukleene/clusters.hpp"

#include <unordered_map>

#include "mukleene/errors.hpp"

namespace mukleene {

namespace {

constexpr long kMaxPrecision = 4096;
constexpr uint64_t kCoverCap = 4096;      // windows a single covering may emit
constexpr long kCountRefineLimit = 96;    // refinement depth for bound-certified counts
constexpr long kSeparationPrecision = 40; // desk-scale distinctness assumption
constexpr uint64_t kMaskLimit = 32;       // ordered-filter recursion width

void check_precision(long p) {
  if (p < 0) fail(Errc::precondition_violated, "negative precision");
  if (p > kMaxPrecision)
    fail(Errc::precision_exhausted,
         "precision 2^-" + std::to_string(p) + " beyond the supported range");
}

struct Halves {
  RIv left, right;
};

// [lo,mid] and (mid,hi]: a partition, so a point on the cut lands left.
Halves split(const RIv& w) {
  Rat mid = (w.lo + w.hi) / Rat(2);
  return {RIv{w.lo, mid, w.lo_closed, true}, RIv{mid, w.hi, false, w.hi_closed}};
}

Enclosure outer(const RIv& w) { return Enclosure{w.lo, w.hi}; }

}  // namespace

// ---- oracle boundary ----

bool SetQuery::nonempty_in(const RIv& w) {
  log_.push_back(w);
  return answer(w);
}

RSetQuery::RSetQuery(RSet s) : set_(std::move(s)) {
  auto n = set_.exact_card();
  card_ = n ? CardInfo::exactly(*n) : CardInfo::unknown();
}

RSetQuery::RSetQuery(RSet s, CardInfo declared) : set_(std::move(s)), card_(declared) {}

bool RSetQuery::answer(const RIv& w) { return set_.nonempty_in(w); }

// ---- locators ----

uint64_t emptiness_flag(SetQuery& x) { return x.nonempty_in(closed_iv(Rat(0), Rat(1))) ? 1 : 0; }

Located locate_unique(SetQuery& x, long p) {
  check_precision(p);
  RIv w = closed_iv(Rat(0), Rat(1));
  if (!x.nonempty_in(w)) return Located{true, {}};
  for (long step = 0; step < p; ++step) {
    auto [left, right] = split(w);
    bool ln = x.nonempty_in(left);
    bool rn = x.nonempty_in(right);
    if (ln && rn)
      fail(Errc::precondition_violated,
           "nonempty on both sides of " + left.hi.str() + " under a one-element promise");
    if (!ln && !rn)
      fail(Errc::oracle_inconsistent, "nonempty window with two empty halves at step " +
                                          std::to_string(step));
    w = ln ? left : right;
  }
  return Located{false, outer(w)};
}

Enclosure extract_singleton(SetQuery& x, long p) {
  Located r = locate_unique(x, p);
  if (r.sentinel)
    fail(Errc::precondition_violated, "empty set where exactly one element was promised");
  return r.where;
}

std::vector<Enclosure> cover_finite(SetQuery& x, long p) {
  check_precision(p);
  Rat target = Rat::pow2(-p);
  std::vector<Enclosure> out;
  // depth-first, left child first: output comes back in ascending order
  std::vector<RIv> stack{closed_iv(Rat(0), Rat(1))};
  while (!stack.empty()) {
    RIv w = stack.back();
    stack.pop_back();
    if (!x.nonempty_in(w)) continue;
    if (w.hi - w.lo <= target) {
      out.push_back(outer(w));
      if (out.size() > kCoverCap)
        fail(Errc::enumeration_too_large, "covering exceeds " + std::to_string(kCoverCap) +
                                              " windows; the set does not look finite");
      continue;
    }
    auto [left, right] = split(w);
    stack.push_back(right);
    stack.push_back(left);
  }
  return out;
}

namespace {

// Runs of adjacent windows; gaps between runs certify distinct elements.
uint64_t separated_groups(const std::vector<Enclosure>& cover) {
  uint64_t groups = 0;
  for (size_t i = 0; i < cover.size(); ++i)
    if (i == 0 || cover[i - 1].hi != cover[i].lo) ++groups;
  return groups;
}

}  // namespace

std::vector<Enclosure> cover_exactly(SetQuery& x, uint64_t n, long p) {
  auto cover = cover_finite(x, p);
  if (separated_groups(cover) > n)
    fail(Errc::precondition_violated,
         "more than " + std::to_string(n) + " separated groups under an exactly-n promise");
  return cover;
}

std::vector<Enclosure> cover_at_most(SetQuery& x, uint64_t n, long p) {
  auto cover = cover_finite(x, p);
  if (separated_groups(cover) > n)
    fail(Errc::precondition_violated,
         "more than " + std::to_string(n) + " separated groups under an at-most-n promise");
  return cover;
}

uint64_t exact_count(SetQuery& x, long p) {
  check_precision(p);
  CardInfo info = x.cardinality();
  switch (info.kind) {
    case CardInfo::Kind::exact:
      return info.value;
    case CardInfo::Kind::upper_bound: {
      // Separated groups only ever undercount; once they reach the declared
      // bound the count is certified.
      for (long q = 1; q <= std::max(p, kCountRefineLimit); ++q) {
        uint64_t groups = separated_groups(cover_finite(x, q));
        if (groups == info.value) return info.value;
        if (groups > info.value)
          fail(Errc::oracle_inconsistent, "declared upper bound " + std::to_string(info.value) +
                                              " exceeded by " + std::to_string(groups) +
                                              " separated groups");
      }
      fail(Errc::precision_exhausted,
           "could not separate " + std::to_string(info.value) + " groups; exact count unknown");
    }
    case CardInfo::Kind::none:
      break;
  }
  fail(Errc::precondition_violated, "exact counting requires declared cardinality data");
}

uint64_t count_bound(SetQuery& x) {
  CardInfo info = x.cardinality();
  if (info.kind == CardInfo::Kind::none)
    fail(Errc::precondition_violated, "cardinality bound requires declared cardinality data");
  return info.value;
}

const char* omega_variant_name(OmegaVariant v) {
  switch (v) {
    case OmegaVariant::flag: return "flag";
    case OmegaVariant::locate: return "locate";
    case OmegaVariant::extract: return "extract";
    case OmegaVariant::cover: return "cover";
    case OmegaVariant::cover_exact: return "cover-exact";
    case OmegaVariant::cover_at_most: return "cover-at-most";
    case OmegaVariant::count: return "count";
    case OmegaVariant::count_bound: return "count-bound";
  }
  return "?";
}

OmegaVariant omega_variant_from_name(const std::string& s) {
  for (auto v : {OmegaVariant::flag, OmegaVariant::locate, OmegaVariant::extract,
                 OmegaVariant::cover, OmegaVariant::cover_exact, OmegaVariant::cover_at_most,
                 OmegaVariant::count, OmegaVariant::count_bound})
    if (s == omega_variant_name(v)) return v;
  fail(Errc::format_error, "unknown variant '" + s + "'");
}

OmegaResult omega_family(SetQuery& x, OmegaVariant v, const OmegaOptions& opt) {
  uint64_t before = x.query_count();
  OmegaResult r;
  r.variant = v;
  switch (v) {
    case OmegaVariant::flag:
      r.flag = emptiness_flag(x);
      break;
    case OmegaVariant::locate: {
      Located l = locate_unique(x, opt.precision);
      r.sentinel = l.sentinel;
      if (!l.sentinel) r.elements.push_back(l.where);
      r.flag = l.sentinel ? 0 : 1;
      break;
    }
    case OmegaVariant::extract:
      r.elements.push_back(extract_singleton(x, opt.precision));
      r.flag = 1;
      break;
    case OmegaVariant::cover:
      r.elements = cover_finite(x, opt.precision);
      break;
    case OmegaVariant::cover_exact:
      r.elements = cover_exactly(x, opt.n, opt.precision);
      break;
    case OmegaVariant::cover_at_most:
      r.elements = cover_at_most(x, opt.n, opt.precision);
      break;
    case OmegaVariant::count:
      r.count = exact_count(x, opt.precision);
      break;
    case OmegaVariant::count_bound:
      r.count = count_bound(x);
      break;
  }
  r.queries_used = x.query_count() - before;
  return r;
}

// ---- count-bound reduction ----

RSet affine_copies(const RSet& x, uint64_t copies) {
  if (copies == 0) fail(Errc::precondition_violated, "zero copies");
  if (!x.rational_only())
    fail(Errc::precondition_violated, "affine copies need rational interval data");
  RSet y;
  Rat m(static_cast<long>(copies));
  for (uint64_t i = 0; i < copies; ++i) {
    Rat off(static_cast<long>(i));
    for (const auto& iv : x.intervals())
      y.add(RIv{(iv.lo + off) / m, (iv.hi + off) / m, iv.lo_closed, iv.hi_closed});
  }
  return y;
}

bool nonempty_via_count_bound(const RSet& x, const GeCountFn& bound) {
  uint64_t k = bound(x);
  if (k >= kCoverCap) fail(Errc::cap_exceeded, "cardinality bound too large for the copy test");
  RSet y = affine_copies(x, k + 1);
  return bound(y) > k;
}

namespace {

RSet restrict_to(const RSet& x, const RIv& w) {
  RSet out;
  for (const auto& iv : x.intervals()) {
    RIv cut = intersect_iv(iv, w);
    if (!cut.empty()) out.add(cut);
  }
  return out;
}

}  // namespace

Located locate_via_count_bound(const RSet& x, const GeCountFn& bound, long p) {
  check_precision(p);
  if (!x.rational_only())
    fail(Errc::precondition_violated, "count-bound location needs rational interval data");
  RIv w = closed_iv(Rat(0), Rat(1));
  if (!nonempty_via_count_bound(restrict_to(x, w), bound)) return Located{true, {}};
  for (long step = 0; step < p; ++step) {
    auto [left, right] = split(w);
    bool ln = nonempty_via_count_bound(restrict_to(x, left), bound);
    bool rn = nonempty_via_count_bound(restrict_to(x, right), bound);
    if (ln && rn)
      fail(Errc::precondition_violated,
           "nonempty on both sides of " + left.hi.str() + " under a one-element promise");
    if (!ln && !rn)
      fail(Errc::oracle_inconsistent, "copy test lost the element at step " + std::to_string(step));
    w = ln ? left : right;
  }
  return Located{false, outer(w)};
}

// ---- least element via the self-referential filter ----

namespace {

// Adjacent cover windows fused into one component window each.
std::vector<RIv> components_of(const std::vector<Enclosure>& cover) {
  std::vector<RIv> comps;
  for (const auto& e : cover) {
    if (!comps.empty() && comps.back().hi == e.lo)
      comps.back().hi = e.hi;
    else
      comps.push_back(closed_iv(e.lo, e.hi));
  }
  return comps;
}

// Halving restricted to a sub-window; same contract as locate_unique.
Enclosure refine_window(SetQuery& x, RIv w, const Rat& target) {
  while (w.hi - w.lo > target) {
    auto [left, right] = split(w);
    bool ln = x.nonempty_in(left);
    bool rn = x.nonempty_in(right);
    if (ln && rn)
      fail(Errc::precision_exhausted,
           "two elements closer than the supported separation near " + left.hi.str());
    if (!ln && !rn) fail(Errc::oracle_inconsistent, "component window went empty while refining");
    w = ln ? left : right;
  }
  return outer(w);
}

}  // namespace

LeastResult least_via_filter(SetQuery& x, long p) {
  check_precision(p);
  long q = std::max(p, kSeparationPrecision);
  auto comps = components_of(cover_finite(x, q));

  std::vector<std::optional<Located>> memo(comps.size() + 1);
  uint64_t calls = 0;
  Rat target = Rat::pow2(-p);

  // least of the first m components; the filter keeps a component exactly
  // when the recursive answer for everything before it is the sentinel, and
  // a located element is always a member, so "answer not a member" is
  // precisely "answer is the sentinel".
  std::function<Located(size_t)> least_of_prefix = [&](size_t m) -> Located {
    ++calls;
    if (memo[m]) return *memo[m];
    Located r;
    if (m == 0) {
      r.sentinel = true;
    } else {
      std::vector<size_t> kept;
      for (size_t i = 0; i < m; ++i)
        if (least_of_prefix(i).sentinel) kept.push_back(i);
      if (kept.size() != 1)
        fail(Errc::oracle_inconsistent,
             "filter kept " + std::to_string(kept.size()) + " components instead of one");
      r.sentinel = false;
      r.where = refine_window(x, comps[kept.front()], target);
    }
    memo[m] = r;
    return r;
  };

  Located top = least_of_prefix(comps.size());
  return LeastResult{top.sentinel, top.where, calls};
}

// ---- ordered least element ----

WoResult wo_least(const RSet& x, const RSet& b, const StrictOrder& before) {
  if (!x.rational_only() || !b.rational_only())
    fail(Errc::precondition_violated, "ordered selection needs rational point data");
  if (!x.exact_card() || !b.exact_card())
    fail(Errc::precondition_violated, "ordered selection needs finite point sets");

  std::vector<Rat> pts;
  for (const auto& iv : b.intervals()) {
    if (!x.contains(iv.lo))
      fail(Errc::precondition_violated, "selection pool is not a subset of the ambient set");
    pts.push_back(iv.lo);
  }
  if (pts.size() > kMaskLimit)
    fail(Errc::enumeration_too_large, "ordered selection over more than 32 points");

  struct Sub {
    bool done = false;
    WoResult res;
  };
  std::unordered_map<uint64_t, Sub> memo;
  uint64_t calls = 0;

  // On subset masks; a mask under evaluation seen again means the order
  // recursed into itself.
  std::function<WoResult(uint64_t)> least_of = [&](uint64_t mask) -> WoResult {
    ++calls;
    auto it = memo.find(mask);
    if (it != memo.end()) {
      if (!it->second.done) fail(Errc::inconsistent_order, "cyclic predecessor chain");
      return it->second.res;
    }
    memo[mask];  // mark in progress
    WoResult r;
    if (mask == 0) {
      r.sentinel = true;
    } else {
      std::vector<size_t> kept;
      for (size_t i = 0; i < pts.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        uint64_t pred = 0;
        for (size_t j = 0; j < pts.size(); ++j)
          if ((mask >> j & 1) && before(pts[j], pts[i])) pred |= uint64_t{1} << j;
        // the recursive answer for the predecessors is a member whenever it
        // is not the sentinel, so the filter again reads sentinel-ness
        if (least_of(pred).sentinel) kept.push_back(i);
      }
      if (kept.size() != 1)
        fail(Errc::inconsistent_order,
             "order admits " + std::to_string(kept.size()) + " minimal points");
      r.sentinel = false;
      r.least = pts[kept.front()];
    }
    memo[mask] = Sub{true, r};
    return r;
  };

  uint64_t full = pts.empty() ? 0 : (~uint64_t{0} >> (64 - pts.size()));
  WoResult out = least_of(full);
  out.recursive_calls = calls;
  return out;
}

// ---- enumerations with injective labels ----

namespace {

std::vector<Rat> finite_points(const RSet& a, const char* who) {
  if (!a.rational_only())
    fail(Errc::precondition_violated, std::string(who) + " needs rational point data");
  if (!a.exact_card())
    fail(Errc::precondition_violated, std::string(who) + " needs a finite point set");
  std::vector<Rat> pts;
  for (const auto& iv : a.intervals()) pts.push_back(iv.lo);
  return pts;
}

}  // namespace

std::vector<EnumEntry> enumerate_set(const RSet& a, const IndexFn& y, EnumMode mode) {
  auto pts = finite_points(a, "enumeration");
  std::vector<EnumEntry> entries;
  for (const auto& x : pts) entries.push_back({x, y(x)});
  for (size_t i = 0; i < entries.size(); ++i)
    for (size_t j = i + 1; j < entries.size(); ++j)
      if (entries[i].index == entries[j].index)
        fail(Errc::injectivity_violated, "label " + std::to_string(entries[i].index) +
                                             " shared by " + entries[i].x.str() + " and " +
                                             entries[j].x.str());
  std::sort(entries.begin(), entries.end(),
            [](const EnumEntry& l, const EnumEntry& r) { return l.index < r.index; });
  if (mode == EnumMode::weak_bijection)
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].index != i)
        fail(Errc::missing_preimage, "no point carries label " + std::to_string(i));
  return entries;
}

Rat listed_sup(const RSet& a, const IndexFn& y) {
  auto entries = enumerate_set(a, y, EnumMode::by_index_search);
  if (entries.empty()) fail(Errc::empty_set, "supremum of the empty set");
  Rat best = entries.front().x;
  for (const auto& e : entries) best = max(best, e.x);
  return best;
}

Rat distance_to_extremes(const Rat& x, const RSet& a, const IndexFn& y) {
  auto entries = enumerate_set(a, y, EnumMode::by_index_search);
  if (entries.empty()) fail(Errc::empty_set, "distance to the empty set");
  Rat lo = entries.front().x, hi = entries.front().x;
  for (const auto& e : entries) {
    lo = min(lo, e.x);
    hi = max(hi, e.x);
  }
  return max(abs(x - lo), abs(x - hi));
}

// ---- recovery from the level-count oracle ----

namespace {

constexpr uint64_t kIndexScanCap = 4096;

PAff level_test_function(const std::vector<Rat>& pts, const IndexFn& y, const Rat& q) {
  std::vector<Rat> marks;
  for (const auto& x : pts)
    if (x > q) marks.push_back(x);
  std::vector<Rat> bps{Rat(0)};
  for (const auto& x : marks)
    if (x != Rat(0) && x != Rat(1)) bps.push_back(x);
  bps.push_back(Rat(1));
  std::vector<Piece> pieces(bps.size() - 1, Piece{Rat(0), Rat(0)});
  std::vector<Rat> vals(bps.size(), Rat(0));
  for (size_t i = 0; i < bps.size(); ++i)
    for (const auto& x : marks)
      if (bps[i] == x) vals[i] = Rat::pow2(-static_cast<long>(y(x)) - 1);
  return PAff::from_parts(bps, pieces, vals);
}

// count of the level 2^-(n+1) in the test function past q
uint64_t south_count(const std::vector<Rat>& pts, const IndexFn& y, const IndicatrixFn& n_oracle,
                     uint64_t n, const Rat& q) {
  Indicatrix ind = n_oracle(level_test_function(pts, y, q));
  Rat level = Rat::pow2(-static_cast<long>(n) - 1);
  for (const auto& l : ind.levels) {
    if (l.y != level) continue;
    if (l.infinite)
      fail(Errc::oracle_inconsistent, "infinite count at an isolated positive level");
    return l.count;
  }
  return 0;
}

}  // namespace

std::vector<RecoveredPoint> enum_via_indicatrix(const RSet& a, const IndexFn& y,
                                                const IndicatrixFn& n_oracle, long p) {
  check_precision(p);
  auto pts = finite_points(a, "level-count recovery");
  // labels must be usable as distinct levels
  enumerate_set(a, y, EnumMode::by_index_search);

  auto south = [&](uint64_t n, const Rat& q) {
    uint64_t c = south_count(pts, y, n_oracle, n, q);
    if (c > 1)
      fail(Errc::oracle_inconsistent,
           "level count " + std::to_string(c) + " for an injectively labelled level");
    return c == 1;
  };

  std::vector<RecoveredPoint> out;
  for (uint64_t n = 0; out.size() < pts.size(); ++n) {
    if (n > kIndexScanCap)
      fail(Errc::cap_exceeded, "label scan passed " + std::to_string(kIndexScanCap) +
                                   " without finding every point");
    if (!south(n, Rat(-1))) continue;
    Enclosure found;
    if (!south(n, Rat(0))) {
      // the labelled point sits at most at 0, so exactly at 0
      found = Enclosure{Rat(0), Rat(0)};
      if (!a.contains(Rat(0)) || y(Rat(0)) != n)
        fail(Errc::oracle_inconsistent, "existence at 0 contradicts membership");
    } else {
      Rat lo(0), hi(1);
      for (long step = 0; step < p; ++step) {
        Rat mid = (lo + hi) / Rat(2);
        if (south(n, mid))
          lo = mid;
        else
          hi = mid;
      }
      found = Enclosure{lo, hi};
      bool witnessed = false;
      for (const auto& x : pts)
        if (lo < x && x <= hi && y(x) == n) witnessed = true;
      if (!witnessed)
        fail(Errc::oracle_inconsistent,
             "window (" + lo.str() + ", " + hi.str() + "] holds no point with label " +
                 std::to_string(n));
    }
    out.push_back(RecoveredPoint{n, found});
  }
  return out;
}

}  // namespace mukleene

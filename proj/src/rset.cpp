#include "mukleene/rset.hpp"

#include <algorithm>

#include "json.hpp"
#include "mukleene/errors.hpp"

namespace mukleene {

bool RIv::contains(const Rat& x) const {
  if (x < lo || x > hi) return false;
  if (x == lo && !lo_closed) return false;
  if (x == hi && !hi_closed) return false;
  return true;
}

RIv closed_iv(const Rat& lo, const Rat& hi) { return RIv{lo, hi, true, true}; }
RIv point_iv(const Rat& x) { return RIv{x, x, true, true}; }

RIv intersect_iv(const RIv& a, const RIv& b) {
  RIv r;
  if (a.lo > b.lo) {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed;
  } else if (b.lo > a.lo) {
    r.lo = b.lo;
    r.lo_closed = b.lo_closed;
  } else {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed && b.lo_closed;
  }
  if (a.hi < b.hi) {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed;
  } else if (b.hi < a.hi) {
    r.hi = b.hi;
    r.hi_closed = b.hi_closed;
  } else {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed && b.hi_closed;
  }
  return r;
}

namespace {

void check_unit(const RIv& iv) {
  if (iv.lo < Rat(0) || iv.hi > Rat(1))
    fail(Errc::precondition_violated, "interval leaves [0,1]");
}

bool mergeable(const RIv& a, const RIv& b) {
  // a.lo <= b.lo assumed. Touching endpoints fuse only if the touch point
  // belongs to either side.
  if (b.lo < a.hi) return true;
  if (b.lo == a.hi) return a.hi_closed || b.lo_closed;
  return false;
}

}  // namespace

void RSet::normalize() {
  ivs_.erase(std::remove_if(ivs_.begin(), ivs_.end(), [](const RIv& iv) { return iv.empty(); }),
             ivs_.end());
  std::sort(ivs_.begin(), ivs_.end(), [](const RIv& a, const RIv& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  std::vector<RIv> out;
  for (const auto& iv : ivs_) {
    if (!out.empty() && mergeable(out.back(), iv)) {
      RIv& last = out.back();
      if (iv.hi > last.hi) {
        last.hi = iv.hi;
        last.hi_closed = iv.hi_closed;
      } else if (iv.hi == last.hi) {
        last.hi_closed = last.hi_closed || iv.hi_closed;
      }
    } else {
      out.push_back(iv);
    }
  }
  ivs_ = std::move(out);
}

RSet RSet::from_points(const std::vector<Rat>& pts) {
  RSet s;
  for (const auto& x : pts) s.add_point(x);
  return s;
}

RSet RSet::interval(const RIv& iv) {
  RSet s;
  s.add(iv);
  return s;
}

void RSet::add(const RIv& iv) {
  if (iv.empty()) return;
  check_unit(iv);
  ivs_.push_back(iv);
  normalize();
}

void RSet::add_point(const Rat& x) { add(point_iv(x)); }

void RSet::add_creal(const CReal& x) { extras_.push_back(x); }

bool RSet::empty() const { return ivs_.empty() && extras_.empty(); }

std::optional<uint64_t> RSet::exact_card() const {
  uint64_t n = extras_.size();
  for (const auto& iv : ivs_) {
    if (!iv.is_point()) return std::nullopt;
    ++n;
  }
  return n;
}

bool RSet::contains(const Rat& x) const {
  for (const auto& iv : ivs_)
    if (iv.contains(x)) return true;
  for (const auto& e : extras_) {
    Rat a = e.approx(kExtraPrecision);
    Rat w = Rat::pow2(-kExtraPrecision);
    if (x >= a - w && x <= a + w) return true;
  }
  return false;
}

bool RSet::nonempty_in(const RIv& window) const {
  if (window.empty()) return false;
  for (const auto& iv : ivs_)
    if (!intersect_iv(iv, window).empty()) return true;
  for (const auto& e : extras_) {
    Rat a = e.approx(kExtraPrecision);
    Rat w = Rat::pow2(-kExtraPrecision);
    // Enclosure-overlap keeps the test sound for points truly inside; a
    // point within 2^-60 of the window boundary may be reported either way.
    if (a + w >= window.lo && a - w <= window.hi) return true;
  }
  return false;
}

Rat RSet::sup() const {
  if (empty()) fail(Errc::empty_set, "sup of empty set");
  std::optional<Rat> best;
  if (!ivs_.empty()) best = ivs_.back().hi;
  for (const auto& e : extras_) {
    Rat a = e.approx(kExtraPrecision);
    if (!best || a > *best) best = a;
  }
  return *best;
}

Rat RSet::inf() const {
  if (empty()) fail(Errc::empty_set, "inf of empty set");
  std::optional<Rat> best;
  if (!ivs_.empty()) best = ivs_.front().lo;
  for (const auto& e : extras_) {
    Rat a = e.approx(kExtraPrecision);
    if (!best || a < *best) best = a;
  }
  return *best;
}

PAff RSet::characteristic() const {
  if (!rational_only())
    fail(Errc::precondition_violated, "characteristic needs a rational-only set");
  std::vector<Rat> bps{Rat(0), Rat(1)};
  for (const auto& iv : ivs_) {
    if (iv.lo > Rat(0) && iv.lo < Rat(1)) bps.push_back(iv.lo);
    if (iv.hi > Rat(0) && iv.hi < Rat(1)) bps.push_back(iv.hi);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  std::vector<Piece> pieces;
  for (size_t i = 0; i + 1 < bps.size(); ++i) {
    Rat mid = (bps[i] + bps[i + 1]) / 2;
    pieces.push_back(Piece{0, contains(mid) ? Rat(1) : Rat(0)});
  }
  std::vector<Rat> vals;
  for (const auto& x : bps) vals.push_back(contains(x) ? Rat(1) : Rat(0));
  return PAff::from_parts(std::move(bps), std::move(pieces), std::move(vals));
}

std::string RSet::to_json() const {
  if (!rational_only())
    fail(Errc::format_error, "cannot serialize a set with computable-real points");
  nlohmann::json j;
  j["intervals"] = nlohmann::json::array();
  for (const auto& iv : ivs_)
    j["intervals"].push_back({{"hi", iv.hi.str()},
                              {"hi_closed", iv.hi_closed},
                              {"lo", iv.lo.str()},
                              {"lo_closed", iv.lo_closed}});
  return j.dump();
}

RSet RSet::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format_error, std::string("bad set json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("intervals") || !j["intervals"].is_array())
    fail(Errc::format_error, "set json needs an intervals array");
  RSet s;
  for (const auto& node : j["intervals"]) {
    if (!node.is_object() || !node.contains("lo") || !node.contains("hi"))
      fail(Errc::format_error, "each interval needs lo and hi");
    if (!node["lo"].is_string() || !node["hi"].is_string())
      fail(Errc::format_error, "interval bounds must be \"p/q\" strings");
    RIv iv;
    iv.lo = Rat::parse(node["lo"].get<std::string>());
    iv.hi = Rat::parse(node["hi"].get<std::string>());
    iv.lo_closed = node.value("lo_closed", true);
    iv.hi_closed = node.value("hi_closed", true);
    if (iv.empty() && iv.lo > iv.hi)
      fail(Errc::format_error, "interval with lo > hi");
    s.add(iv);
  }
  return s;
}

}  // namespace mukleene

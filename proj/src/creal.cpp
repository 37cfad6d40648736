#include "mukleene/creal.hpp"

namespace mukleene {

CReal::CReal(std::function<Rat(long)> approx)
    : approx_(std::make_shared<const std::function<Rat(long)>>(std::move(approx))) {}

CReal CReal::constant(const Rat& q) {
  return CReal([q](long) { return q; });
}

Rat CReal::approx(long k) const { return (*approx_)(k < 0 ? 0 : k); }

Cmp creal_compare(const CReal& x, const CReal& y, long p) {
  const Rat qx = x.approx(p + 3);
  const Rat qy = y.approx(p + 3);
  const Rat margin = Rat::pow2(-(p + 2));
  const Rat diff = qy - qx;
  if (diff > margin) return Cmp::lt;
  if (diff < -margin) return Cmp::gt;
  return Cmp::indistinguishable;
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::lt: return "lt";
    case Cmp::gt: return "gt";
    case Cmp::indistinguishable: return "indistinguishable";
  }
  return "?";
}

}  // namespace mukleene

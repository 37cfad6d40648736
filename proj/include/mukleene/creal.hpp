#pragma once

#include <functional>
#include <memory>

#include "mukleene/rational.hpp"

namespace mukleene {

// Cauchy-coded real: approx(k) is a rational within 2^-k of the value, and
// successive approximants satisfy |approx(n) - approx(n+i)| < 2^-n.
class CReal {
public:
  explicit CReal(std::function<Rat(long)> approx);
  static CReal constant(const Rat& q);

  Rat approx(long k) const;

private:
  std::shared_ptr<const std::function<Rat(long)>> approx_;
};

enum class Cmp { lt, gt, indistinguishable };

// Sound comparison at precision p: lt/gt verdicts are always correct;
// indistinguishable guarantees |x - y| < 2^(-p+2).
Cmp creal_compare(const CReal& x, const CReal& y, long p);

const char* cmp_name(Cmp c);

}  // namespace mukleene

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

namespace mukleene {

// Exact rational. Always stored reduced with positive denominator; all
// serialization is the canonical "p/q" form ("p" when q == 1).
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design
  Rat(long num, long den);
  explicit Rat(mpq_class q);
  explicit Rat(const mpz_class& z) : v_(z) {}

  // Parses "p/q" or "p" with optional sign. Throws FormatError.
  static Rat parse(const std::string& s);
  // 2^k for any integer k.
  static Rat pow2(long k);

  std::string str() const;
  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }
  mpz_class floor() const;
  mpz_class ceil() const;
  int sgn() const { return ::sgn(v_); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r);

private:
  mpq_class v_;
};

Rat abs(const Rat& r);
const Rat& min(const Rat& a, const Rat& b);
const Rat& max(const Rat& a, const Rat& b);

// Dyadic enclosure [lo, hi] of sqrt(x) with hi - lo <= 2^-p and
// lo^2 <= x <= hi^2. Requires x >= 0.
std::pair<Rat, Rat> sqrt_enclosure(const Rat& x, long p);

// Hash suitable for unordered containers keyed by rationals.
struct RatHash {
  size_t operator()(const Rat& r) const;
};

}  // namespace mukleene

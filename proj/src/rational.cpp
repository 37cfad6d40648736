#include "mukleene/rational.hpp"

#include <cctype>
#include <ostream>

#include "mukleene/errors.hpp"

namespace mukleene {

Rat::Rat(long num, long den) {
  if (den == 0) fail(Errc::format_error, "zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat::Rat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

Rat Rat::parse(const std::string& s) {
  if (s.empty()) fail(Errc::format_error, "empty rational literal");
  size_t start = 0;
  if (s[0] == '+' || s[0] == '-') start = 1;
  if (start == s.size()) fail(Errc::format_error, "bare sign: '" + s + "'");
  bool seen_slash = false;
  for (size_t i = start; i < s.size(); ++i) {
    if (s[i] == '/' && !seen_slash && i > start && i + 1 < s.size()) {
      seen_slash = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      fail(Errc::format_error, "bad rational literal: '" + s + "'");
  }
  mpq_class q;
  if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
    fail(Errc::format_error, "bad rational literal: '" + s + "'");
  if (q.get_den() == 0) fail(Errc::format_error, "zero denominator: '" + s + "'");
  q.canonicalize();
  return Rat(std::move(q));
}

Rat Rat::pow2(long k) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rat(mpq_class(z));
  return Rat(mpq_class(1, z));
}

std::string Rat::str() const { return v_.get_str(); }

mpz_class Rat::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

mpz_class Rat::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.v_ == 0) fail(Errc::precondition_violated, "division by zero");
  v_ /= o.v_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat abs(const Rat& r) { return r.sgn() < 0 ? -r : r; }
const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

std::pair<Rat, Rat> sqrt_enclosure(const Rat& x, long p) {
  if (x.sgn() < 0) fail(Errc::precondition_violated, "sqrt of negative rational");
  if (x.sgn() == 0) return {Rat(0), Rat(0)};
  Rat lo(0), hi(1);
  while (hi * hi < x) hi *= Rat(2);
  const Rat width = Rat::pow2(-p);
  while (hi - lo > width) {
    Rat mid = (lo + hi) / Rat(2);
    if (mid * mid <= x)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

size_t RatHash::operator()(const Rat& r) const {
  // FNV-1a over the canonical string; rationals here are small.
  const std::string s = r.str();
  size_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace mukleene

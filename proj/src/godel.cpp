#include "mukleene/godel.hpp"

#include <algorithm>

#include "mukleene/errors.hpp"

namespace mukleene {

namespace {

constexpr uint8_t kVersion = 0x01;

enum : uint8_t {
  TAG_ZERO = 0x00,
  TAG_SUC = 0x01,
  TAG_PRED = 0x02,
  TAG_CASE = 0x03,
  TAG_BOUND = 0x04,
  TAG_FREE = 0x05,
  TAG_ORACLE = 0x06,
  TAG_APP = 0x07,
  TAG_LAM = 0x08,
  TAG_MU = 0x09,
};

void put_varint(std::vector<uint8_t>& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

void put_string(std::vector<uint8_t>& out, const std::string& s) {
  put_varint(out, s.size());
  out.insert(out.end(), s.begin(), s.end());
}

void put_type(std::vector<uint8_t>& out, const FiniteType& ty) {
  put_varint(out, ty.args().size());
  for (const auto& a : ty.args()) put_type(out, a);
}

void encode_rec(std::vector<uint8_t>& out, const TermPtr& t,
                std::vector<std::string>& bound,
                const std::vector<std::string>& free_order) {
  switch (t->kind) {
    case TermKind::zero:
      out.push_back(TAG_ZERO);
      return;
    case TermKind::suc:
      out.push_back(TAG_SUC);
      encode_rec(out, t->a, bound, free_order);
      return;
    case TermKind::pred:
      out.push_back(TAG_PRED);
      encode_rec(out, t->a, bound, free_order);
      return;
    case TermKind::kase:
      out.push_back(TAG_CASE);
      encode_rec(out, t->a, bound, free_order);
      encode_rec(out, t->b, bound, free_order);
      encode_rec(out, t->c, bound, free_order);
      return;
    case TermKind::var: {
      for (size_t i = bound.size(); i-- > 0;) {
        if (bound[i] == t->name) {
          out.push_back(TAG_BOUND);
          put_varint(out, bound.size() - 1 - i);  // de Bruijn index
          return;
        }
      }
      auto it = std::find(free_order.begin(), free_order.end(), t->name);
      if (it == free_order.end()) fail(Errc::invariant, "free variable not in declared list");
      out.push_back(TAG_FREE);
      put_varint(out, static_cast<uint64_t>(it - free_order.begin()));
      return;
    }
    case TermKind::oracle:
      out.push_back(TAG_ORACLE);
      put_string(out, t->name);
      put_type(out, t->ty);
      return;
    case TermKind::app:
      out.push_back(TAG_APP);
      encode_rec(out, t->a, bound, free_order);
      encode_rec(out, t->b, bound, free_order);
      return;
    case TermKind::lam:
    case TermKind::mu:
      out.push_back(t->kind == TermKind::lam ? TAG_LAM : TAG_MU);
      put_type(out, t->binder);
      bound.push_back(t->name);
      encode_rec(out, t->a, bound, free_order);
      bound.pop_back();
      return;
  }
}

struct Decoder {
  const std::vector<uint8_t>& b;
  size_t pos = 0;
  std::vector<std::pair<std::string, FiniteType>> free_list;
  std::vector<std::pair<std::string, FiniteType>> bound;
  uint64_t binder_counter = 0;

  // Canonical binder names must not shadow declared free variables.
  std::string fresh_binder() {
    while (true) {
      std::string name = "v" + std::to_string(binder_counter++);
      bool clash = false;
      for (const auto& [n, ty] : free_list)
        if (n == name) clash = true;
      if (!clash) return name;
    }
  }

  [[noreturn]] void err(const std::string& msg) {
    fail(Errc::format_error, "code byte " + std::to_string(pos) + ": " + msg);
  }

  uint8_t byte() {
    if (pos >= b.size()) err("unexpected end of code");
    return b[pos++];
  }

  uint64_t varint() {
    uint64_t v = 0;
    int shift = 0;
    while (true) {
      uint8_t c = byte();
      v |= static_cast<uint64_t>(c & 0x7f) << shift;
      if (!(c & 0x80)) break;
      shift += 7;
      if (shift > 60) err("varint too long");
    }
    return v;
  }

  std::string string() {
    uint64_t n = varint();
    if (pos + n > b.size()) err("string runs past end");
    std::string s(b.begin() + pos, b.begin() + pos + n);
    pos += n;
    return s;
  }

  FiniteType type() {
    uint64_t k = varint();
    if (k > 16) err("type arity too large");
    std::vector<FiniteType> args;
    args.reserve(k);
    for (uint64_t i = 0; i < k; ++i) args.push_back(type());
    return FiniteType::fun(std::move(args));
  }

  TermPtr term() {
    uint8_t tag = byte();
    switch (tag) {
      case TAG_ZERO:
        return mk_zero();
      case TAG_SUC:
        return mk_suc(term());
      case TAG_PRED:
        return mk_pred(term());
      case TAG_CASE: {
        TermPtr a = term();
        TermPtr x = term();
        TermPtr y = term();
        return mk_case(a, x, y);
      }
      case TAG_BOUND: {
        uint64_t idx = varint();
        if (idx >= bound.size()) err("de Bruijn index out of range");
        const auto& [name, ty] = bound[bound.size() - 1 - idx];
        return mk_var(name, ty);
      }
      case TAG_FREE: {
        uint64_t idx = varint();
        if (idx >= free_list.size()) err("free variable index out of range");
        return mk_var(free_list[idx].first, free_list[idx].second);
      }
      case TAG_ORACLE: {
        std::string id = string();
        FiniteType ty = type();
        return mk_oracle(id, ty);
      }
      case TAG_APP: {
        TermPtr f = term();
        TermPtr x = term();
        return mk_app(f, x);
      }
      case TAG_LAM:
      case TAG_MU: {
        FiniteType bty = type();
        std::string name = fresh_binder();
        bound.emplace_back(name, bty);
        TermPtr body = term();
        bound.pop_back();
        return tag == TAG_LAM ? mk_lam(name, bty, body) : mk_mu(name, bty, body);
      }
      default:
        err("unknown tag " + std::to_string(tag));
    }
  }
};

}  // namespace

mpz_class GodelCode::value() const {
  mpz_class z;
  if (!bytes.empty())
    mpz_import(z.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return z;
}

std::string GodelCode::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

GodelCode GodelCode::from_hex(const std::string& h) {
  if (h.size() % 2 != 0) fail(Errc::format_error, "odd hex length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail(Errc::format_error, "bad hex digit");
  };
  GodelCode c;
  c.bytes.reserve(h.size() / 2);
  for (size_t i = 0; i < h.size(); i += 2)
    c.bytes.push_back(static_cast<uint8_t>(nib(h[i]) << 4 | nib(h[i + 1])));
  return c;
}

size_t GodelHash::operator()(const GodelCode& c) const {
  size_t h = 1469598103934665603ull;
  for (uint8_t b : c.bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

GodelCode godel_encode(const TermPtr& t) {
  GodelCode code;
  code.bytes.push_back(kVersion);
  auto fv = free_vars(t);  // std::map: already sorted by name
  put_varint(code.bytes, fv.size());
  std::vector<std::string> free_order;
  for (const auto& [name, ty] : fv) {
    put_string(code.bytes, name);
    put_type(code.bytes, ty);
    free_order.push_back(name);
  }
  std::vector<std::string> bound;
  encode_rec(code.bytes, t, bound, free_order);
  return code;
}

TermPtr godel_decode(const GodelCode& code) {
  Decoder d{code.bytes, 0, {}, {}, 0};
  if (d.byte() != kVersion) d.err("unsupported code version");
  uint64_t nfree = d.varint();
  for (uint64_t i = 0; i < nfree; ++i) {
    std::string name = d.string();
    FiniteType ty = d.type();
    d.free_list.emplace_back(name, ty);
  }
  TermPtr t = d.term();
  if (d.pos != code.bytes.size()) d.err("trailing bytes after term");
  typecheck(t);
  return t;
}

}  // namespace mukleene

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "mukleene/term.hpp"

namespace mukleene {

// Canonical code of a term: a deterministic byte string (bound variables as
// indices, free variables by position in the sorted declared list, oracle ids
// verbatim), plus the unbounded integer read from those bytes base-256.
// Alpha-equivalent terms encode identically.
struct GodelCode {
  std::vector<uint8_t> bytes;

  mpz_class value() const;
  std::string hex() const;
  static GodelCode from_hex(const std::string& h);

  bool operator==(const GodelCode& o) const { return bytes == o.bytes; }
  bool operator!=(const GodelCode& o) const { return !(*this == o); }
  bool operator<(const GodelCode& o) const { return bytes < o.bytes; }
};

struct GodelHash {
  size_t operator()(const GodelCode& c) const;
};

GodelCode godel_encode(const TermPtr& t);
// Inverse; the result is typechecked. Bound variables get canonical names.
TermPtr godel_decode(const GodelCode& code);

}  // namespace mukleene

#pragma once

#include <stdexcept>
#include <string>

namespace mukleene {

// Stable error identifiers. The CLI maps every Error to exit code 1 and
// prints the identifier, so scripts can branch on it.
enum class Errc {
  syntax_error,
  type_annotation_missing,
  type_mismatch,
  rank_violation,
  unknown_constant,
  unbound_oracle,
  node_cap_exceeded,
  valueless_tree,
  limit_stage_unsupported,
  no_stabilization,
  non_monotone,
  enumeration_too_large,
  cap_exceeded,
  degenerate_interval,
  precision_exhausted,
  bad_bound,
  bad_variation,
  precondition_violated,
  inconsistent_order,
  injectivity_violated,
  missing_preimage,
  duplicate_point,
  oracle_inconsistent,
  not_usc,
  not_attained,
  not_singular,
  not_disjoint,
  empty_set,
  format_error,
  invariant,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc c, const std::string& msg);
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] void fail(Errc c, const std::string& msg);

}  // namespace mukleene

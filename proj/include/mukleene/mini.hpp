#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mukleene/eval.hpp"
#include "mukleene/term.hpp"
#include "mukleene/types.hpp"

namespace mukleene {

// Element of a function space over the finite base {0..base-1}: a flat table
// over the total argument tuples of the type, -1 marking undefined. Ground
// objects have a single entry. Layout is first-argument-major, so applying
// to the first argument is a contiguous slice.
struct FinObj {
  FiniteType type;
  unsigned base = 2;
  std::vector<int32_t> vals;

  bool is_total() const {
    for (int32_t v : vals)
      if (v < 0) return false;
    return true;
  }
  friend bool operator==(const FinObj& a, const FinObj& b) {
    return a.type == b.type && a.base == b.base && a.vals == b.vals;
  }
  friend bool operator!=(const FinObj& a, const FinObj& b) { return !(a == b); }
};

// Table size: 1 for ground, product of argument space sizes for arrows.
uint64_t table_size(const FiniteType& ty, unsigned base);
uint64_t total_count(const FiniteType& ty, unsigned base);
uint64_t partial_count(const FiniteType& ty, unsigned base);

FinObj bottom_obj(const FiniteType& ty, unsigned base);
FinObj ground_obj(unsigned base, int32_t v);
FinObj total_from_index(const FiniteType& ty, unsigned base, uint64_t idx);
FinObj partial_from_index(const FiniteType& ty, unsigned base, uint64_t idx);
uint64_t index_of_total(const FinObj& f);

// Extension order: a below b when a agrees with b wherever a is defined.
bool ext_leq(const FinObj& a, const FinObj& b);

std::vector<FinObj> enumerate_total(const FiniteType& ty, unsigned base,
                                    uint64_t cap = 1'000'000);
std::vector<FinObj> enumerate_partial(const FiniteType& ty, unsigned base,
                                      uint64_t cap = 1'000'000);

// Application to one total argument; slices the table.
FinObj apply_one(const FinObj& f, const FinObj& arg);

struct MiniCaps {
  unsigned max_term_nodes = 12;
  uint64_t enum_cap = 1'000'000;
};

// Exact denotation over the finite base. Application is strict: a partial
// argument makes the result everywhere-undefined. case needs only its
// scrutinee and the branch it selects. mu iterates from bottom.
FinObj denote_finite(const TermPtr& t, const std::map<std::string, FinObj>& assignment,
                     const std::map<std::string, FinObj>& oracle_tables, unsigned base,
                     const MiniCaps& caps = {});

// Least fixed point by iteration from bottom; rejects a non-monotone step
// with the offending pair.
FinObj lfp_iterate(const std::function<FinObj(const FinObj&)>& F, const FiniteType& ty,
                   unsigned base);

// Scans all comparable pairs of partial objects of the argument type;
// returns a violating pair if f is not monotone, nullopt otherwise.
std::optional<std::pair<FinObj, FinObj>> check_monotone(
    const std::function<int32_t(const FinObj&)>& f, const FiniteType& arg_ty, unsigned base,
    uint64_t cap = 1'000'000);

// Bridges a table into the operational evaluator. Function arguments are
// materialized by querying their handle at every total tuple; a partial
// argument yields certified bottom (strict reading).
OracleSpec oracle_from_table(const std::string& id, const FinObj& table);

// Host-side view of a total object of rank <= 1.
HostVal host_from_finobj(const FinObj& f);

struct Materialized {
  std::optional<FinObj> obj;
  EvalOutcome bad;  // outcome to propagate when obj is absent
};
Materialized materialize_handle(const FunArg& h, const FiniteType& ty, unsigned base);

// Evaluator options for finite-base runs: saturating arithmetic at base-1
// and strict applications via a materializing totality probe.
TotalityProbe finite_totality_probe(unsigned base);
EvalOptions finite_eval_options(unsigned base, FuelBudget fuel = {});

// Textual replacement of every reference to the named oracle by a term of
// the oracle's type.
TermPtr replace_oracle(const TermPtr& t, const std::string& id, const TermPtr& s);

struct EnumLimits {
  unsigned max_nodes = 10;
  std::vector<FiniteType> arg_types;  // binder/argument alphabet for lam, mu, app
  std::vector<std::pair<std::string, FiniteType>> oracles;
  uint64_t term_cap = 20'000'000;
};

// Emits every closed well-typed term of the target type with at most
// max_nodes nodes, drawing binder and argument types from the alphabet.
// Returns the number of terms emitted.
uint64_t enumerate_closed_terms(const FiniteType& target, const EnumLimits& lims,
                                const std::function<void(const TermPtr&)>& sink);

struct Agreement {
  bool agree = false;
  int32_t denoted = -1;  // -1 = undefined
  EvalOutcome eval_out;
  std::string note;
};

// Compares the denotation of a closed ground term with the finite-base
// evaluator over the same oracle tables; retries with more fuel when the
// denotation has a value but the evaluator ran out.
Agreement check_agreement(const TermPtr& t, const std::map<std::string, FinObj>& oracle_tables,
                          unsigned base, FuelBudget fuel = {}, const MiniCaps& caps = {});

}  // namespace mukleene

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mukleene/term.hpp"

namespace mukleene {

struct FuelBudget {
  uint64_t steps = 1'000'000;        // spine reductions
  uint64_t oracle_calls = 100'000;   // registry callback invocations
  uint64_t search_bound = 1u << 16;  // built-in search oracles scan below this
};

enum class OutcomeKind : uint8_t { value, bottom, fuel };

// Result of evaluating a closed ground term. bottom is a certified
// non-value (traceable to a partial oracle); fuel means the budget ran out
// before a verdict.
struct EvalOutcome {
  OutcomeKind kind = OutcomeKind::fuel;
  uint64_t value = 0;
  std::string detail;

  static EvalOutcome val(uint64_t v) { return {OutcomeKind::value, v, {}}; }
  static EvalOutcome bottom(std::string why) { return {OutcomeKind::bottom, 0, std::move(why)}; }
  static EvalOutcome fuel(std::string which) { return {OutcomeKind::fuel, 0, std::move(which)}; }

  bool is_value() const { return kind == OutcomeKind::value; }
  std::string str() const;
  // detail strings are advisory and do not participate in equality
  friend bool operator==(const EvalOutcome& a, const EvalOutcome& b) {
    return a.kind == b.kind && (a.kind != OutcomeKind::value || a.value == b.value);
  }
};

// Rank <= 1 value used when querying a handle: a natural or a host function
// over tuples of naturals.
using HostFn = std::function<EvalOutcome(const std::vector<uint64_t>&)>;

struct HostVal {
  bool is_nat = true;
  uint64_t nat = 0;
  HostFn fn;
  FiniteType type;  // of fn when !is_nat

  static HostVal of(uint64_t n) { return {true, n, {}, FiniteType::ground()}; }
  static HostVal of_fn(HostFn f, FiniteType ty) { return {false, 0, std::move(f), std::move(ty)}; }
};

// Handle an oracle callback receives for a non-ground argument. Each query
// evaluates the underlying term on demand and draws on the same fuel budget
// as the enclosing evaluation.
struct FunArg {
  FiniteType type;
  int id = 0;
  std::function<EvalOutcome(const std::vector<HostVal>&)> query;

  EvalOutcome operator()(const std::vector<HostVal>& args) const { return query(args); }
  EvalOutcome at(std::vector<uint64_t> nats) const;
};

struct OracleArg {
  bool is_nat = true;
  uint64_t nat = 0;
  FunArg fun;

  static OracleArg of(uint64_t n) { return {true, n, {}}; }
  static OracleArg of_fun(FunArg f) { return {false, 0, std::move(f)}; }
};

struct OracleSpec {
  std::string id;
  FiniteType type;  // arrow, rank <= 3
  bool declared_total = false;
  std::function<EvalOutcome(const std::vector<OracleArg>&, const FuelBudget&)> call;
};

class OracleRegistry {
public:
  void add(OracleSpec spec);
  const OracleSpec* find(const std::string& id) const;
  std::map<std::string, FiniteType> type_map() const;
  bool all_total() const;
  size_t size() const { return specs_.size(); }

private:
  std::map<std::string, OracleSpec> specs_;
};

// Decides whether a non-ground argument denotes a total functional at a
// finite base by probing it everywhere; returns the outcome to propagate
// when it does not (or when probing itself fails).
using TotalityProbe =
    std::function<std::optional<EvalOutcome>(const FunArg& probe, const FiniteType& ty)>;

struct EvalOptions {
  FuelBudget fuel;
  // When > 0, arithmetic saturates at ground_cap-1 and every application is
  // strict: ground arguments must evaluate, non-ground arguments must pass
  // the totality probe. This is the finite-base reference semantics.
  unsigned ground_cap = 0;
  TotalityProbe totality_probe;
  bool memo = false;
  uint64_t node_cap = 1'000'000;
};

struct QueryRecord {
  std::string oracle;
  std::string detail;
};

struct EvalResult {
  EvalOutcome outcome;
  uint64_t steps_used = 0;
  uint64_t oracle_calls_used = 0;
  std::vector<QueryRecord> queries;
};

// Evaluates a closed ground term against the registry. Lambda and mu redexes
// reduce by substituting the argument term unevaluated; case evaluates its
// scrutinee and then exactly one branch.
EvalResult evaluate(const TermPtr& t, const OracleRegistry& reg, const EvalOptions& opts = {});

// Built-in oracles. The two search oracles scan f(0), f(1), ... below
// budget.search_bound for a zero of their function argument.
//   mu2: least such n. Partial flavor reports fuel when the scan is
//   inconclusive (it never certifies non-existence); total flavor answers 0.
//   exists2: 0 when a zero exists, 1 otherwise (total flavor); the partial
//   flavor again reports fuel on an inconclusive scan.
OracleSpec oracle_mu2(const std::string& id, bool declared_total);
OracleSpec oracle_exists2(const std::string& id, bool declared_total);
// Constant functional of the given arrow type.
OracleSpec oracle_const(const std::string& id, const FiniteType& ty, uint64_t value);

}  // namespace mukleene

#pragma once

#include <cstdint>
#include <functional>

#include "mukleene/eval.hpp"
#include "mukleene/term.hpp"

namespace mukleene {

// Finite stages only in this version; requesting a genuine limit stage (the
// CLI accepts the token "omega") raises LimitStageUnsupported.
using StageIndex = uint64_t;

// Stage-indexed limit: 0 at stage 0, the previous entry at a successor.
uint64_t limstar(const std::function<uint64_t(StageIndex)>& seq, StageIndex alpha);

struct ApproxOptions {
  FuelBudget fuel;            // passed to declared-total oracle callbacks
  unsigned ground_cap = 0;    // saturating suc, matching finite-base runs
  uint64_t call_cap = 50'000'000;  // recursion guard across one evaluation
  bool memo = false;          // per-(code, stage) cache; validated vs uncached
};

// Total approximation of a closed ground term at a finite stage: every
// subterm at stage 0 contributes 0, each reduction step costs one stage.
// Requires every referenced oracle to be declared total.
uint64_t approx_eval(const TermPtr& t, const OracleRegistry& reg, StageIndex alpha,
                     const ApproxOptions& opts = {});

// Least stage from which approx_eval stays equal to evaluate's value through
// max_stage. The term must evaluate to a value first.
StageIndex stabilization_stage(const TermPtr& t, const OracleRegistry& reg, StageIndex max_stage,
                               const ApproxOptions& opts = {});

}  // namespace mukleene

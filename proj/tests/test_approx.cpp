#include "doctest.h"
#include "mukleene/approx.hpp"
#include "mukleene/errors.hpp"
#include "mukleene/tree.hpp"

#include "support/corpus.hpp"

using namespace mukleene;

namespace {

const FiniteType N = FiniteType::ground();

TermPtr add23() {
  return mk_app_spine(corpus::add_term(), {numeral(2), numeral(3)});
}

}  // namespace

TEST_CASE("stage-indexed limits read the previous entry") {
  auto seq = [](StageIndex a) { return static_cast<uint64_t>(10 + a); };
  CHECK(limstar(seq, 0) == 0);
  CHECK(limstar(seq, 1) == 10);
  CHECK(limstar(seq, 7) == 16);
}

TEST_CASE("stage zero flattens everything to zero") {
  auto reg = corpus::total_registry();
  CHECK(approx_eval(numeral(9), reg, 0) == 0);
  CHECK(approx_eval(add23(), reg, 0) == 0);
}

TEST_CASE("approximants agree with evaluation from the tree rank on") {
  auto reg = corpus::total_registry();
  auto t = add23();
  uint64_t rank = build_tree(t, reg).rank;
  uint64_t truth = evaluate(t, reg).outcome.value;
  for (StageIndex a : {rank, rank + 1, rank + 9}) CHECK(approx_eval(t, reg, a) == truth);
  CHECK(stabilization_stage(t, reg, rank + 20) == 21);
}

TEST_CASE("every finite stage is total") {
  auto reg = corpus::total_registry();
  for (const auto& term : corpus::term_corpus(25, 51)) {
    for (StageIndex a : {StageIndex{0}, StageIndex{1}, StageIndex{3}})
      CHECK_NOTHROW(approx_eval(term, reg, a));
  }
}

TEST_CASE("memoized sweeps match the plain route") {
  auto reg = corpus::total_registry();
  ApproxOptions plain, memo;
  memo.memo = true;
  for (const auto& term : corpus::term_corpus(15, 61)) {
    for (StageIndex a : {StageIndex{2}, StageIndex{11}, StageIndex{30}})
      CHECK(approx_eval(term, reg, a, memo) == approx_eval(term, reg, a, plain));
  }
}

TEST_CASE("non-total oracles are rejected up front") {
  OracleRegistry reg;
  reg.add(oracle_mu2("p", false));
  auto never = mk_lam("n", N, mk_suc(mk_var("n", N)));
  auto t = mk_app(mk_oracle("p", FiniteType::fun({FiniteType::fun({N})})), never);
  CHECK_THROWS_AS(approx_eval(t, reg, 3), Error);
}

TEST_CASE("stabilization requires a terminating term") {
  OracleRegistry reg;
  CHECK_THROWS_AS(stabilization_stage(mk_mu("x", N, mk_var("x", N)), reg, 50), Error);
}

#include "doctest.h"
#include "mukleene/errors.hpp"
#include "mukleene/mini.hpp"

#include <set>

#include "support/corpus.hpp"

using namespace mukleene;

namespace {

const FiniteType N = FiniteType::ground();
const FiniteType N2N = FiniteType::fun({N});

FinObj table(unsigned base, std::vector<int32_t> vals) {
  FinObj f = bottom_obj(N2N, base);
  f.vals = std::move(vals);
  return f;
}

}  // namespace

TEST_CASE("table sizes and census counts") {
  CHECK(table_size(N, 2) == 1);
  CHECK(table_size(N2N, 2) == 2);
  CHECK(table_size(N2N, 3) == 3);
  CHECK(table_size(FiniteType::fun({N, N}), 2) == 4);
  // one argument of type (-> N N): 4 total unary functions at base 2
  CHECK(table_size(FiniteType::fun({N2N}), 2) == 4);
  CHECK(total_count(N2N, 2) == 4);
  CHECK(partial_count(N2N, 2) == 9);
  CHECK(total_count(N, 3) == 3);
  CHECK(partial_count(N, 3) == 4);
  CHECK(enumerate_total(N2N, 2).size() == 4);
  CHECK(enumerate_partial(N2N, 2).size() == 9);
}

TEST_CASE("indices round-trip through total tables") {
  for (uint64_t i = 0; i < total_count(N2N, 3); ++i) {
    FinObj f = total_from_index(N2N, 3, i);
    CHECK(f.is_total());
    CHECK(index_of_total(f) == i);
  }
}

TEST_CASE("extension order is the pointwise defined-agreement order") {
  FinObj bot = bottom_obj(N2N, 2);
  FinObj half = table(2, {1, -1});
  FinObj full = table(2, {1, 0});
  FinObj other = table(2, {0, 0});
  CHECK(ext_leq(bot, bot));
  CHECK(ext_leq(bot, half));
  CHECK(ext_leq(half, full));
  CHECK(ext_leq(full, full));
  CHECK_FALSE(ext_leq(full, half));
  CHECK_FALSE(ext_leq(half, other));
  CHECK_FALSE(ext_leq(full, other));
}

TEST_CASE("application slices the first-argument-major table") {
  // F : (-> (-> N N) N) at base 2, F(f) = f(0)
  FinObj F = bottom_obj(FiniteType::fun({N2N}), 2);
  for (uint64_t i = 0; i < 4; ++i)
    F.vals[i] = total_from_index(N2N, 2, i).vals[0];
  for (uint64_t i = 0; i < 4; ++i) {
    FinObj arg = total_from_index(N2N, 2, i);
    FinObj r = apply_one(F, arg);
    REQUIRE(r.type.is_ground());
    CHECK(r.vals[0] == arg.vals[0]);
  }
}

TEST_CASE("denotation of the arithmetic combinators at a finite base") {
  std::map<std::string, FinObj> empty;
  FinObj add = denote_finite(corpus::add_term(), {}, empty, 5);
  auto call = [&](const FinObj& f, int32_t a, int32_t b) {
    return apply_one(apply_one(f, ground_obj(5, a)), ground_obj(5, b)).vals[0];
  };
  CHECK(call(add, 1, 3) == 4);
  CHECK(call(add, 2, 2) == 4);
  CHECK(call(add, 4, 4) == 4);  // saturates at base-1
  FinObj sub = denote_finite(corpus::sub_term(), {}, empty, 5);
  CHECK(call(sub, 4, 1) == 3);
  CHECK(call(sub, 1, 4) == 0);
}

TEST_CASE("denotation picks one case branch and saturates suc") {
  std::map<std::string, FinObj> empty;
  CHECK(denote_finite(mk_suc(numeral(1)), {}, empty, 2).vals[0] == 1);
  auto diverge = mk_mu("x", N, mk_var("x", N));
  auto lazy = mk_case(mk_zero(), numeral(1), diverge);
  CHECK(denote_finite(lazy, {}, empty, 2).vals[0] == 1);
  CHECK(denote_finite(diverge, {}, empty, 2).vals[0] == -1);
  // strict application: unused bottom argument still poisons the redex
  auto konst = mk_lam("x", N, mk_zero());
  CHECK(denote_finite(mk_app(konst, diverge), {}, empty, 2).vals[0] == -1);
}

TEST_CASE("environment assignments feed free variables") {
  auto body = mk_suc(mk_var("v", N));
  std::map<std::string, FinObj> env{{"v", ground_obj(4, 2)}};
  CHECK(denote_finite(body, env, {}, 4).vals[0] == 3);
}

TEST_CASE("least fixed points are reached by iteration from bottom") {
  // F(f)(n) = if n == 0 then 0 else f(n-1): lfp is constantly 0
  auto F = [](const FinObj& f) {
    FinObj out = bottom_obj(f.type, f.base);
    for (unsigned n = 0; n < f.base; ++n)
      out.vals[n] = n == 0 ? 0 : f.vals[n - 1];
    return out;
  };
  FinObj fix = lfp_iterate(F, N2N, 4);
  CHECK(fix.vals == std::vector<int32_t>{0, 0, 0, 0});

  // a non-monotone step is rejected
  auto bad = [](const FinObj& f) {
    FinObj out = bottom_obj(f.type, f.base);
    out.vals[0] = f.vals[0] < 0 ? 1 : 0;  // flips on more information
    return out;
  };
  CHECK_THROWS_AS(lfp_iterate(bad, N2N, 2), Error);
}

TEST_CASE("monotonicity checker finds violations and clears honest functions") {
  auto defined_count = [](const FinObj& f) {
    int32_t c = 0;
    for (int32_t v : f.vals) c += v >= 0 ? 1 : 0;
    return c;
  };
  CHECK_FALSE(check_monotone(defined_count, N2N, 2).has_value());

  auto spiteful = [](const FinObj& f) { return f.vals[0] >= 0 ? 0 : 1; };
  auto witness = check_monotone(spiteful, N2N, 2);
  REQUIRE(witness.has_value());
  CHECK(ext_leq(witness->first, witness->second));
  CHECK(spiteful(witness->first) == 1);
  CHECK(spiteful(witness->second) == 0);
}

TEST_CASE("tables bridge into the operational evaluator") {
  OracleRegistry reg;
  reg.add(oracle_from_table("f", table(2, {1, 0})));
  reg.add(oracle_from_table("g", table(2, {0, -1})));
  auto opts = finite_eval_options(2);
  CHECK(evaluate(mk_app(mk_oracle("f", N2N), mk_zero()), reg, opts).outcome ==
        EvalOutcome::val(1));
  CHECK(evaluate(mk_app(mk_oracle("g", N2N), numeral(1)), reg, opts).outcome.kind ==
        OutcomeKind::bottom);
}

TEST_CASE("closed-term enumeration is exhaustive, well-typed, and duplicate-free") {
  EnumLimits lims;
  lims.max_nodes = 6;
  lims.arg_types = {N, N2N};
  lims.oracles = {{"f", N2N}, {"g", N2N}};
  std::set<std::string> seen;
  uint64_t emitted = enumerate_closed_terms(N, lims, [&](const TermPtr& t) {
    CHECK(node_count(t) <= 6);
    CHECK(is_closed(t));
    CHECK(typecheck(t).is_ground());
    CHECK(seen.insert(print_term(t)).second);
  });
  CHECK(emitted == seen.size());
  CHECK(emitted == 2594);  // grows with the grammar; guards accidental drift

  EnumLimits tiny;
  tiny.max_nodes = 2;
  tiny.arg_types = {N};
  uint64_t small = enumerate_closed_terms(N, tiny, [&](const TermPtr&) {});
  CHECK(small == 4);  // 0, suc 0, pred 0, mu x. x
}

TEST_CASE("agreement harness accepts pinned verdicts") {
  std::map<std::string, FinObj> tables{{"f", table(2, {1, 1})}, {"g", table(2, {0, -1})}};
  auto app_f = mk_app(mk_oracle("f", N2N), mk_zero());
  auto a = check_agreement(app_f, tables, 2);
  CHECK(a.agree);
  CHECK(a.denoted == 1);
  CHECK(a.eval_out == EvalOutcome::val(1));

  auto app_g = mk_app(mk_oracle("g", N2N), numeral(1));
  auto b = check_agreement(app_g, tables, 2);
  CHECK(b.agree);
  CHECK(b.denoted == -1);

  auto diverge = mk_mu("x", N, mk_var("x", N));
  auto c = check_agreement(diverge, tables, 2);
  CHECK(c.agree);
  CHECK(c.denoted == -1);
}

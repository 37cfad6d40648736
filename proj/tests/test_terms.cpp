#include "doctest.h"
#include "mukleene/errors.hpp"
#include "mukleene/godel.hpp"
#include "mukleene/mini.hpp"
#include "mukleene/term.hpp"

#include <set>

#include "support/corpus.hpp"

using namespace mukleene;

namespace {

const FiniteType N = FiniteType::ground();
const FiniteType N2N = FiniteType::fun({N});

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invariant;
}

}  // namespace

TEST_CASE("types print, parse, and rank correctly") {
  CHECK(N.str() == "N");
  CHECK(N2N.str() == "(-> N N)");
  FiniteType two = FiniteType::fun({N, N});
  CHECK(two.str() == "(-> N N N)");
  CHECK(FiniteType::parse("(-> (-> N N) N)") == FiniteType::fun({N2N}));
  CHECK(N.rank() == 0);
  CHECK(N2N.rank() == 1);
  CHECK(FiniteType::fun({N2N}).rank() == 2);
  CHECK(two.drop_first() == N2N);
  CHECK(FiniteType::arrow(N, N2N) == two);
}

TEST_CASE("smart constructors reject ill-typed nodes") {
  auto f = mk_var("f", N2N);
  CHECK(code_of([&] { mk_suc(f); }) == Errc::type_mismatch);
  CHECK(code_of([&] { mk_case(f, mk_zero(), mk_zero()); }) == Errc::type_mismatch);
  CHECK(code_of([&] { mk_app(mk_zero(), mk_zero()); }) == Errc::type_mismatch);
  CHECK(code_of([&] { mk_app(f, f); }) == Errc::type_mismatch);
  // mu must produce what it binds
  CHECK(code_of([&] { mk_mu("g", N2N, mk_zero()); }) == Errc::type_mismatch);
  // rank 4 exceeds the fragment
  FiniteType r2 = FiniteType::fun({N2N});
  FiniteType r3 = FiniteType::fun({r2});
  FiniteType r4 = FiniteType::fun({r3});
  CHECK(code_of([&] { mk_oracle("o", r4); }) == Errc::rank_violation);
  CHECK_NOTHROW(mk_oracle("o", r3));
}

TEST_CASE("numerals and node counts") {
  CHECK(node_count(mk_zero()) == 1);
  CHECK(node_count(numeral(4)) == 5);
  CHECK(alpha_eq(numeral(2), mk_suc(mk_suc(mk_zero()))));
  CHECK(node_count(corpus::add_term()) == 13);
}

TEST_CASE("free variables and closedness") {
  auto t = mk_lam("x", N, mk_app(mk_var("f", N2N), mk_var("x", N)));
  auto fv = free_vars(t);
  REQUIRE(fv.size() == 1);
  CHECK(fv.count("f") == 1);
  CHECK(fv.at("f") == N2N);
  CHECK_FALSE(is_closed(t));
  CHECK(is_closed(corpus::add_term()));
  // one name at two types is rejected
  auto clash = mk_case(mk_app(mk_var("a", N2N), mk_zero()), mk_var("a", N), mk_zero());
  CHECK(code_of([&] { free_vars(clash); }) == Errc::type_mismatch);
}

TEST_CASE("substitution avoids capture") {
  // (lam y. x)[x := y] must not capture the free y
  auto body = mk_lam("y", N, mk_var("x", N));
  auto out = substitute(body, "x", mk_var("y", N));
  auto expected = mk_lam("w", N, mk_var("y", N));
  CHECK(alpha_eq(out, expected));
  CHECK(free_vars(out).count("y") == 1);

  // bound occurrences shadow
  auto shadowed = mk_lam("x", N, mk_var("x", N));
  CHECK(alpha_eq(substitute(shadowed, "x", numeral(3)), shadowed));

  // plain replacement
  auto plain = mk_suc(mk_var("x", N));
  CHECK(alpha_eq(substitute(plain, "x", numeral(1)), numeral(2)));
}

TEST_CASE("alpha equivalence ignores binder names only") {
  auto a = mk_lam("x", N, mk_suc(mk_var("x", N)));
  auto b = mk_lam("y", N, mk_suc(mk_var("y", N)));
  auto c = mk_lam("y", N, mk_pred(mk_var("y", N)));
  CHECK(alpha_eq(a, b));
  CHECK_FALSE(alpha_eq(a, c));
  CHECK_FALSE(alpha_eq(mk_var("u", N), mk_var("v", N)));
  CHECK(alpha_eq(mk_var("u", N), mk_var("u", N)));
}

TEST_CASE("printing round-trips through the parser") {
  std::map<std::string, FiniteType> octx{{"phi", FiniteType::fun({N2N})},
                                         {"ex", FiniteType::fun({N2N})},
                                         {"k3", N2N}};
  for (const auto& t : corpus::term_corpus(60, 11)) {
    auto back = parse_term(print_term(t), octx);
    CHECK(alpha_eq(back, t));
  }
  auto add = corpus::add_term();
  CHECK(alpha_eq(parse_term(print_term(add)), add));
}

TEST_CASE("parser reports precise failures") {
  CHECK(code_of([] { parse_term("(suc"); }) == Errc::syntax_error);
  CHECK(code_of([] { parse_term("(suc 0 0)"); }) == Errc::syntax_error);
  CHECK(code_of([] { parse_term("x"); }) == Errc::syntax_error);
  CHECK(code_of([] { parse_term("(lam (x) x)"); }) == Errc::type_annotation_missing);
  CHECK(code_of([] { parse_term("(suc (lam (x : N) x))"); }) == Errc::type_mismatch);
  CHECK(code_of([] { parse_term("#phi"); }) == Errc::unknown_constant);
  CHECK(code_of([] {
          parse_term("(lam (x : (-> (-> (-> (-> N N) N) N) N)) 0)");
        }) == Errc::rank_violation);
  // comments and whitespace are ignored
  CHECK(alpha_eq(parse_term("; note\n ( suc\n 0 ) ; trailing"), numeral(1)));
}

TEST_CASE("canonical codes are stable, injective, and invertible") {
  std::set<GodelCode> seen;
  EnumLimits lims;
  lims.max_nodes = 5;
  lims.arg_types = {N};
  uint64_t emitted = enumerate_closed_terms(N, lims, [&](const TermPtr& t) {
    GodelCode c = godel_encode(t);
    CHECK(seen.insert(c).second);  // injective on distinct terms
    auto back = godel_decode(c);
    CHECK(alpha_eq(back, t));
    CHECK(godel_encode(back) == c);
    CHECK(GodelCode::from_hex(c.hex()) == c);
  });
  CHECK(emitted == seen.size());
  CHECK(emitted > 20);

  // alpha-equivalent terms share one code
  auto a = mk_lam("x", N, mk_suc(mk_var("x", N)));
  auto b = mk_lam("q", N, mk_suc(mk_var("q", N)));
  CHECK(godel_encode(a) == godel_encode(b));
  CHECK(godel_encode(a).value() > 0);
}

TEST_CASE("typecheck revalidates decoded trees") {
  auto add = corpus::add_term();
  CHECK(typecheck(add) == FiniteType::fun({N, N}));
  CHECK(typecheck(numeral(3)) == N);
}

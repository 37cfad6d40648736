#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mukleene/types.hpp"

namespace mukleene {

enum class TermKind : uint8_t { zero, suc, pred, kase, var, oracle, app, lam, mu };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable typed syntax node; `ty` is the type of the whole subterm.
// Children: suc/pred use a; kase uses a,b,c; app has a=function, b=argument;
// lam/mu keep the bound variable in name/binder and the body in a.
struct Term {
  TermKind kind;
  FiniteType ty;
  std::string name;    // var name, oracle id, or bound variable for lam/mu
  FiniteType binder;   // bound variable type for lam/mu
  TermPtr a, b, c;
};

// Smart constructors; every one typechecks its node and throws on violation,
// so a TermPtr is well-typed by construction.
TermPtr mk_zero();
TermPtr mk_suc(TermPtr t);
TermPtr mk_pred(TermPtr t);
TermPtr mk_case(TermPtr z, TermPtr ifz, TermPtr ifpos);
TermPtr mk_var(const std::string& name, const FiniteType& ty);
TermPtr mk_oracle(const std::string& id, const FiniteType& ty);
TermPtr mk_app(TermPtr f, TermPtr arg);
TermPtr mk_lam(const std::string& x, const FiniteType& xt, TermPtr body);
TermPtr mk_mu(const std::string& x, const FiniteType& xt, TermPtr body);

TermPtr mk_app_spine(TermPtr f, const std::vector<TermPtr>& args);
TermPtr numeral(uint64_t n);

uint64_t node_count(const TermPtr& t);
// Free variables with their types; a name used free at two different types
// raises TypeMismatch.
std::map<std::string, FiniteType> free_vars(const TermPtr& t);
bool is_closed(const TermPtr& t);
// Oracle ids referenced anywhere in the term.
std::vector<std::string> oracle_refs(const TermPtr& t);

// Capture-avoiding substitution of s for free occurrences of name x.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);

bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Canonical source form; parse(print(t)) == t for closed terms.
std::string print_term(const TermPtr& t);

// Parses a closed term (free identifiers are rejected; #ids resolve against
// oracle_types). Throws SyntaxError with position info, TypeAnnotationMissing,
// TypeMismatch, RankViolation, UnknownConstant.
TermPtr parse_term(const std::string& src,
                   const std::map<std::string, FiniteType>& oracle_types = {});

// Revalidates an existing tree (used after decoding); returns its type.
FiniteType typecheck(const TermPtr& t);

}  // namespace mukleene

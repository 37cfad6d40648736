#include "support/corpus.hpp"

#include <set>
#include <utility>

namespace mukleene::corpus {
namespace {

const FiniteType kN = FiniteType::ground();
const FiniteType kN2N = FiniteType::fun({kN});
const FiniteType kNN2N = FiniteType::fun({kN, kN});

TermPtr vr(const char* x, const FiniteType& t) { return mk_var(x, t); }

uint64_t pick(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

}  // namespace

TermPtr add_term() {
  // add x y = if y == 0 then x else suc (add x (pred y))
  auto body = mk_case(vr("y", kN), vr("x", kN),
                      mk_suc(mk_app_spine(vr("f", kNN2N), {vr("x", kN), mk_pred(vr("y", kN))})));
  return mk_mu("f", kNN2N, mk_lam("x", kN, mk_lam("y", kN, body)));
}

TermPtr mul_term() {
  auto rec = mk_app_spine(vr("f", kNN2N), {vr("x", kN), mk_pred(vr("y", kN))});
  auto body = mk_case(vr("y", kN), mk_zero(), mk_app_spine(add_term(), {vr("x", kN), rec}));
  return mk_mu("f", kNN2N, mk_lam("x", kN, mk_lam("y", kN, body)));
}

TermPtr sub_term() {
  auto body = mk_case(vr("y", kN), vr("x", kN),
                      mk_pred(mk_app_spine(vr("f", kNN2N), {vr("x", kN), mk_pred(vr("y", kN))})));
  return mk_mu("f", kNN2N, mk_lam("x", kN, mk_lam("y", kN, body)));
}

TermPtr dist_term() {
  auto s = sub_term();
  auto body = mk_app_spine(add_term(), {mk_app_spine(s, {vr("x", kN), vr("y", kN)}),
                                        mk_app_spine(s, {vr("y", kN), vr("x", kN)})});
  return mk_lam("x", kN, mk_lam("y", kN, body));
}

OracleRegistry total_registry() {
  OracleRegistry reg;
  reg.add(oracle_mu2("phi", true));
  reg.add(oracle_exists2("ex", true));
  reg.add(oracle_const("k3", kN2N, 3));
  return reg;
}

namespace {

// Ground expression of bounded depth; every production terminates with a
// value when the oracles are total.
TermPtr gen_ground(std::mt19937_64& rng, unsigned depth) {
  if (depth == 0) return numeral(pick(rng, 5));
  switch (pick(rng, 10)) {
    case 0:
      return numeral(pick(rng, 6));
    case 1:
      return mk_suc(gen_ground(rng, depth - 1));
    case 2:
      return mk_pred(gen_ground(rng, depth - 1));
    case 3:
      return mk_case(gen_ground(rng, depth - 1), gen_ground(rng, depth - 1),
                     gen_ground(rng, depth - 1));
    case 4:
      return mk_app_spine(add_term(), {gen_ground(rng, depth - 1), gen_ground(rng, depth - 1)});
    case 5:
      return mk_app_spine(mul_term(), {numeral(pick(rng, 4)), gen_ground(rng, depth - 1)});
    case 6:
      return mk_app_spine(sub_term(), {gen_ground(rng, depth - 1), gen_ground(rng, depth - 1)});
    case 7: {
      // beta redex whose body really uses the bound variable
      auto body = mk_case(vr("v", kN), numeral(pick(rng, 3)), mk_suc(mk_suc(vr("v", kN))));
      return mk_app(mk_lam("v", kN, body), gen_ground(rng, depth - 1));
    }
    case 8: {
      // least-zero search for |n - c| hits exactly c
      auto target = mk_app_spine(dist_term(), {vr("n", kN), numeral(pick(rng, 7))});
      auto probe = mk_lam("n", kN, target);
      const FiniteType search_ty = FiniteType::fun({kN2N});
      return mk_app(mk_oracle(pick(rng, 2) == 0 ? "phi" : "ex", search_ty), probe);
    }
    default:
      return mk_app(mk_oracle("k3", kN2N), gen_ground(rng, depth - 1));
  }
}

}  // namespace

std::vector<TermPtr> term_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TermPtr> out;
  out.reserve(n);
  while (out.size() < n) {
    auto t = gen_ground(rng, 1 + pick(rng, 3));
    if (node_count(t) > 400) continue;
    out.push_back(std::move(t));
  }
  return out;
}

TermPtr random_mini_term(std::mt19937_64& rng, unsigned budget) {
  struct Gen {
    std::mt19937_64& rng;
    std::vector<std::pair<std::string, FiniteType>> env;
    int fresh = 0;

    TermPtr ground(unsigned b) {
      std::vector<const std::pair<std::string, FiniteType>*> nvars, fvars;
      for (const auto& e : env) (e.second.is_ground() ? nvars : fvars).push_back(&e);
      for (;;) {
        switch (rng() % 8) {
          case 0:
            return mk_zero();
          case 1:
            if (b < 2) break;
            return mk_suc(ground(b - 1));
          case 2:
            if (b < 2) break;
            return mk_pred(ground(b - 1));
          case 3:
            if (b < 4) break;
            return mk_case(ground(b / 3), ground(b / 3), ground(b / 3));
          case 4:
            if (nvars.empty()) break;
            return mk_var(nvars[rng() % nvars.size()]->first, FiniteType::ground());
          case 5:
          case 6:
            if (b < 3) break;
            return mk_app(fun(b / 2), ground(b / 2));
          default:
            if (b < 5) break;
            // binder whose body may capture outer variables
            return mk_app(binder_fn(b / 2), ground(b / 2));
        }
      }
    }

    TermPtr fun(unsigned b) {
      std::vector<const std::pair<std::string, FiniteType>*> fvars;
      for (const auto& e : env)
        if (!e.second.is_ground()) fvars.push_back(&e);
      const FiniteType n2n = FiniteType::fun({FiniteType::ground()});
      for (;;) {
        switch (rng() % 5) {
          case 0:
            return mk_oracle("f", n2n);
          case 1:
            return mk_oracle("g", n2n);
          case 2:
            if (fvars.empty()) break;
            return mk_var(fvars[rng() % fvars.size()]->first, n2n);
          case 3:
            if (b < 3) break;
            return binder_fn(b);
          default:
            if (b < 3) break;
            return mk_mu_fn(b);
        }
      }
    }

    TermPtr binder_fn(unsigned b) {
      std::string x = "x" + std::to_string(fresh++);
      env.emplace_back(x, FiniteType::ground());
      auto body = ground(b - 1);
      env.pop_back();
      return mk_lam(x, FiniteType::ground(), body);
    }

    TermPtr mk_mu_fn(unsigned b) {
      const FiniteType n2n = FiniteType::fun({FiniteType::ground()});
      std::string h = "h" + std::to_string(fresh++);
      env.emplace_back(h, n2n);
      auto body = fun(b - 1);
      env.pop_back();
      return mk_mu(h, n2n, body);
    }
  };
  Gen g{rng, {}, 0};
  return g.ground(budget);
}

namespace {

Rat small_rat(std::mt19937_64& rng, long span) {
  long den = 1L << pick(rng, 3);  // 1, 2, 4
  long num = static_cast<long>(pick(rng, 2 * span * den + 1)) - span * den;
  return Rat(num, den);
}

Rat nonzero_small(std::mt19937_64& rng, long span) {
  for (;;) {
    Rat r = small_rat(rng, span);
    if (r != Rat(0)) return r;
  }
}

std::vector<Rat> random_breakpoints(std::mt19937_64& rng) {
  std::set<Rat> cuts;
  size_t interior = 1 + pick(rng, 4);
  while (cuts.size() < interior) {
    long den = 1L << (1 + pick(rng, 5));  // 2 .. 32
    long num = 1 + static_cast<long>(pick(rng, static_cast<uint64_t>(den - 1)));
    cuts.insert(Rat(num, den));
  }
  std::vector<Rat> bps{Rat(0)};
  bps.insert(bps.end(), cuts.begin(), cuts.end());
  bps.push_back(Rat(1));
  return bps;
}

PAff build_paff(std::mt19937_64& rng, bool continuous) {
  auto bps = random_breakpoints(rng);
  size_t m = bps.size() - 1;
  std::vector<Piece> pieces(m);
  std::vector<Rat> vals(bps.size());

  vals[0] = small_rat(rng, 2);
  Rat start = vals[0];
  if (!continuous && pick(rng, 8) == 0) start += nonzero_small(rng, 2);
  for (size_t i = 0; i < m; ++i) {
    Rat a = small_rat(rng, 6);
    pieces[i] = Piece{a, start - a * bps[i]};
    Rat left = pieces[i].at(bps[i + 1]);
    if (continuous || i + 1 == m) {
      vals[i + 1] = left;
      start = left;
      if (!continuous && i + 1 == m && pick(rng, 6) == 0) vals[i + 1] = left + nonzero_small(rng, 2);
      continue;
    }
    switch (pick(rng, 4)) {
      case 0:  // genuine jump, value on one side
        vals[i + 1] = left;
        start = left + nonzero_small(rng, 2);
        break;
      case 1:  // removable: limits agree, value does not
        vals[i + 1] = left + nonzero_small(rng, 2);
        start = left;
        break;
      case 2:  // jump with a detached value
        vals[i + 1] = left + small_rat(rng, 2);
        start = left + nonzero_small(rng, 2);
        break;
      default:
        vals[i + 1] = left;
        start = left;
        break;
    }
  }
  return PAff::from_parts(std::move(bps), std::move(pieces), std::move(vals));
}

}  // namespace

PAff random_paff(std::mt19937_64& rng) { return build_paff(rng, false); }
PAff random_continuous_paff(std::mt19937_64& rng) { return build_paff(rng, true); }

std::vector<PAff> paff_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PAff> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_paff(rng));
  return out;
}

std::vector<PAff> continuous_paff_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PAff> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_continuous_paff(rng));
  return out;
}

}  // namespace mukleene::corpus

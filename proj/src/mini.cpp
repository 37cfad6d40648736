#include "mukleene/mini.hpp"

#include <algorithm>

#include "mukleene/errors.hpp"

namespace mukleene {

namespace {

uint64_t checked_mul(uint64_t a, uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a / 2) fail(Errc::enumeration_too_large, "space size overflow");
  return a * b;
}

uint64_t checked_pow(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

}  // namespace

uint64_t table_size(const FiniteType& ty, unsigned base) {
  if (ty.is_ground()) return 1;
  uint64_t n = 1;
  for (const auto& a : ty.args()) n = checked_mul(n, total_count(a, base));
  return n;
}

uint64_t total_count(const FiniteType& ty, unsigned base) {
  return checked_pow(base, table_size(ty, base));
}

uint64_t partial_count(const FiniteType& ty, unsigned base) {
  return checked_pow(base + 1, table_size(ty, base));
}

FinObj bottom_obj(const FiniteType& ty, unsigned base) {
  FinObj f;
  f.type = ty;
  f.base = base;
  f.vals.assign(table_size(ty, base), -1);
  return f;
}

FinObj ground_obj(unsigned base, int32_t v) {
  if (v >= static_cast<int32_t>(base)) fail(Errc::invariant, "value outside the finite base");
  FinObj f;
  f.type = FiniteType::ground();
  f.base = base;
  f.vals = {v < 0 ? -1 : v};
  return f;
}

FinObj total_from_index(const FiniteType& ty, unsigned base, uint64_t idx) {
  FinObj f;
  f.type = ty;
  f.base = base;
  uint64_t n = table_size(ty, base);
  f.vals.resize(n);
  for (uint64_t j = 0; j < n; ++j) {
    f.vals[j] = static_cast<int32_t>(idx % base);
    idx /= base;
  }
  if (idx != 0) fail(Errc::invariant, "total index out of range");
  return f;
}

FinObj partial_from_index(const FiniteType& ty, unsigned base, uint64_t idx) {
  FinObj f;
  f.type = ty;
  f.base = base;
  uint64_t n = table_size(ty, base);
  f.vals.resize(n);
  for (uint64_t j = 0; j < n; ++j) {
    f.vals[j] = static_cast<int32_t>(idx % (base + 1)) - 1;
    idx /= base + 1;
  }
  if (idx != 0) fail(Errc::invariant, "partial index out of range");
  return f;
}

uint64_t index_of_total(const FinObj& f) {
  uint64_t idx = 0;
  for (size_t j = f.vals.size(); j-- > 0;) {
    if (f.vals[j] < 0) fail(Errc::invariant, "index_of_total on a partial object");
    idx = idx * f.base + static_cast<uint64_t>(f.vals[j]);
  }
  return idx;
}

bool ext_leq(const FinObj& a, const FinObj& b) {
  if (a.type != b.type || a.base != b.base || a.vals.size() != b.vals.size())
    fail(Errc::type_mismatch, "extension order needs objects of one type and base");
  for (size_t i = 0; i < a.vals.size(); ++i)
    if (a.vals[i] >= 0 && a.vals[i] != b.vals[i]) return false;
  return true;
}

std::vector<FinObj> enumerate_total(const FiniteType& ty, unsigned base, uint64_t cap) {
  uint64_t n = total_count(ty, base);
  if (n > cap)
    fail(Errc::enumeration_too_large, std::to_string(n) + " total objects exceed cap " +
                                          std::to_string(cap));
  std::vector<FinObj> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) out.push_back(total_from_index(ty, base, i));
  return out;
}

std::vector<FinObj> enumerate_partial(const FiniteType& ty, unsigned base, uint64_t cap) {
  uint64_t n = partial_count(ty, base);
  if (n > cap)
    fail(Errc::enumeration_too_large, std::to_string(n) + " partial objects exceed cap " +
                                          std::to_string(cap));
  std::vector<FinObj> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) out.push_back(partial_from_index(ty, base, i));
  return out;
}

FinObj apply_one(const FinObj& f, const FinObj& arg) {
  if (f.type.is_ground()) fail(Errc::type_mismatch, "cannot apply a ground object");
  const auto& sig = f.type.args();
  if (arg.type != sig[0] || arg.base != f.base)
    fail(Errc::type_mismatch, "argument type does not match the table");
  if (!arg.is_total()) fail(Errc::invariant, "apply_one needs a total argument");
  FinObj out;
  out.type = f.type.drop_first();
  out.base = f.base;
  uint64_t rest = table_size(out.type, f.base);
  uint64_t i0 = index_of_total(arg);
  out.vals.assign(f.vals.begin() + static_cast<ptrdiff_t>(i0 * rest),
                  f.vals.begin() + static_cast<ptrdiff_t>((i0 + 1) * rest));
  return out;
}

namespace {

struct Denoter {
  const std::map<std::string, FinObj>& oracles;
  unsigned base;
  const MiniCaps& caps;
  std::map<std::string, FinObj> env;

  FinObj denote(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::zero:
        return ground_obj(base, 0);
      case TermKind::suc: {
        FinObj r = denote(t->a);
        if (r.vals[0] < 0) return r;
        int32_t v = r.vals[0] + 1;
        if (v >= static_cast<int32_t>(base)) v = static_cast<int32_t>(base) - 1;
        return ground_obj(base, v);
      }
      case TermKind::pred: {
        FinObj r = denote(t->a);
        if (r.vals[0] < 0) return r;
        return ground_obj(base, r.vals[0] == 0 ? 0 : r.vals[0] - 1);
      }
      case TermKind::kase: {
        FinObj z = denote(t->a);
        if (z.vals[0] < 0) return z;
        return denote(z.vals[0] == 0 ? t->b : t->c);
      }
      case TermKind::var: {
        auto it = env.find(t->name);
        if (it == env.end()) fail(Errc::invariant, "denotation reached unbound variable " + t->name);
        return it->second;
      }
      case TermKind::oracle: {
        auto it = oracles.find(t->name);
        if (it == oracles.end()) fail(Errc::unbound_oracle, "#" + t->name + " has no table");
        return it->second;
      }
      case TermKind::app: {
        FinObj f = denote(t->a);
        FinObj x = denote(t->b);
        if (!x.is_total()) return bottom_obj(t->ty, base);
        return apply_one(f, x);
      }
      case TermKind::lam: {
        FinObj out;
        out.type = t->ty;
        out.base = base;
        out.vals.reserve(table_size(t->ty, base));
        auto prev = env.find(t->name);
        std::optional<FinObj> saved;
        if (prev != env.end()) saved = prev->second;
        for (const FinObj& phi : enumerate_total(t->binder, base, caps.enum_cap)) {
          env[t->name] = phi;
          FinObj piece = denote(t->a);
          out.vals.insert(out.vals.end(), piece.vals.begin(), piece.vals.end());
        }
        if (saved)
          env[t->name] = *saved;
        else
          env.erase(t->name);
        return out;
      }
      case TermKind::mu: {
        auto prev = env.find(t->name);
        std::optional<FinObj> saved;
        if (prev != env.end()) saved = prev->second;
        FinObj cur = bottom_obj(t->binder, base);
        uint64_t height = table_size(t->binder, base) + 2;
        FinObj result;
        bool done = false;
        for (uint64_t i = 0; i < height; ++i) {
          env[t->name] = cur;
          FinObj next = denote(t->a);
          if (!ext_leq(cur, next))
            fail(Errc::non_monotone, "fixed-point iteration stepped outside the extension order");
          if (next == cur) {
            result = cur;
            done = true;
            break;
          }
          cur = next;
        }
        if (saved)
          env[t->name] = *saved;
        else
          env.erase(t->name);
        if (!done) fail(Errc::invariant, "fixed-point iteration exceeded the lattice height");
        return result;
      }
    }
    fail(Errc::invariant, "unreachable term kind");
  }
};

}  // namespace

FinObj denote_finite(const TermPtr& t, const std::map<std::string, FinObj>& assignment,
                     const std::map<std::string, FinObj>& oracle_tables, unsigned base,
                     const MiniCaps& caps) {
  if (base < 1 || base > 4) fail(Errc::cap_exceeded, "base must be between 1 and 4");
  if (node_count(t) > caps.max_term_nodes)
    fail(Errc::cap_exceeded, "term exceeds " + std::to_string(caps.max_term_nodes) + " nodes");
  Denoter d{oracle_tables, base, caps, assignment};
  return d.denote(t);
}

FinObj lfp_iterate(const std::function<FinObj(const FinObj&)>& F, const FiniteType& ty,
                   unsigned base) {
  FinObj cur = bottom_obj(ty, base);
  uint64_t height = table_size(ty, base) + 2;
  for (uint64_t i = 0; i < height; ++i) {
    FinObj next = F(cur);
    if (!ext_leq(cur, next))
      fail(Errc::non_monotone, "iteration left the extension order at step " + std::to_string(i));
    if (next == cur) return cur;
    cur = next;
  }
  fail(Errc::invariant, "iteration exceeded the lattice height");
}

std::optional<std::pair<FinObj, FinObj>> check_monotone(
    const std::function<int32_t(const FinObj&)>& f, const FiniteType& arg_ty, unsigned base,
    uint64_t cap) {
  std::vector<FinObj> all = enumerate_partial(arg_ty, base, cap);
  std::vector<int32_t> fv;
  fv.reserve(all.size());
  for (const auto& x : all) fv.push_back(f(x));
  for (size_t i = 0; i < all.size(); ++i) {
    if (fv[i] < 0) continue;
    for (size_t j = 0; j < all.size(); ++j) {
      if (i == j || !ext_leq(all[i], all[j])) continue;
      if (fv[j] != fv[i]) return std::make_pair(all[i], all[j]);
    }
  }
  return std::nullopt;
}

HostVal host_from_finobj(const FinObj& f) {
  if (!f.is_total()) fail(Errc::invariant, "host view needs a total object");
  if (f.type.is_ground()) return HostVal::of(static_cast<uint64_t>(f.vals[0]));
  if (f.type.rank() != 1) fail(Errc::rank_violation, "host view covers rank <= 1 only");
  FinObj table = f;
  return HostVal::of_fn(
      [table](const std::vector<uint64_t>& nats) -> EvalOutcome {
        const auto& sig = table.type.args();
        if (nats.size() != sig.size())
          fail(Errc::type_mismatch, "host table queried at wrong arity");
        uint64_t idx = 0;
        uint64_t stride = table.vals.size();
        for (size_t i = 0; i < nats.size(); ++i) {
          if (nats[i] >= table.base) fail(Errc::invariant, "query outside the finite base");
          stride /= table.base;
          idx += nats[i] * stride;
        }
        int32_t v = table.vals[idx];
        if (v < 0) return EvalOutcome::bottom("table entry undefined");
        return EvalOutcome::val(static_cast<uint64_t>(v));
      },
      f.type);
}

Materialized materialize_handle(const FunArg& h, const FiniteType& ty, unsigned base) {
  if (ty.is_ground()) fail(Errc::type_mismatch, "only function handles materialize");
  const auto& sig = ty.args();
  std::vector<std::vector<FinObj>> spaces;
  for (const auto& a : sig) spaces.push_back(enumerate_total(a, base));
  FinObj out = bottom_obj(ty, base);
  uint64_t n = out.vals.size();
  for (uint64_t flat = 0; flat < n; ++flat) {
    // decompose flat first-argument-major
    uint64_t stride = n;
    std::vector<HostVal> q;
    q.reserve(sig.size());
    for (size_t i = 0; i < sig.size(); ++i) {
      stride /= spaces[i].size();
      q.push_back(host_from_finobj(spaces[i][(flat / stride) % spaces[i].size()]));
    }
    EvalOutcome r = h.query(q);
    if (!r.is_value()) return {std::nullopt, r};
    if (r.value >= base) fail(Errc::invariant, "handle answered outside the finite base");
    out.vals[flat] = static_cast<int32_t>(r.value);
  }
  return {out, {}};
}

OracleSpec oracle_from_table(const std::string& id, const FinObj& table) {
  if (table.type.is_ground()) fail(Errc::type_mismatch, "oracle tables must have arrow type");
  OracleSpec s;
  s.id = id;
  s.type = table.type;
  s.declared_total = table.is_total();
  unsigned base = table.base;
  s.call = [table, base](const std::vector<OracleArg>& args, const FuelBudget&) -> EvalOutcome {
    const auto& sig = table.type.args();
    if (args.size() != sig.size()) fail(Errc::type_mismatch, "table oracle applied at wrong arity");
    uint64_t flat = 0;
    for (size_t i = 0; i < args.size(); ++i) {
      uint64_t idx;
      if (sig[i].is_ground()) {
        if (!args[i].is_nat) fail(Errc::type_mismatch, "expected a natural argument");
        if (args[i].nat >= base) fail(Errc::invariant, "argument outside the finite base");
        idx = args[i].nat;
      } else {
        if (args[i].is_nat) fail(Errc::type_mismatch, "expected a function argument");
        Materialized m = materialize_handle(args[i].fun, sig[i], base);
        if (!m.obj) return m.bad;
        if (!m.obj->is_total())
          return EvalOutcome::bottom("argument is not total over the finite base");
        idx = index_of_total(*m.obj);
      }
      flat = flat * total_count(sig[i], base) + idx;
    }
    int32_t v = table.vals[flat];
    if (v < 0) return EvalOutcome::bottom("table entry undefined");
    return EvalOutcome::val(static_cast<uint64_t>(v));
  };
  return s;
}

TotalityProbe finite_totality_probe(unsigned base) {
  return [base](const FunArg& probe, const FiniteType& ty) -> std::optional<EvalOutcome> {
    Materialized m = materialize_handle(probe, ty, base);
    if (m.obj) return std::nullopt;
    return m.bad;
  };
}

EvalOptions finite_eval_options(unsigned base, FuelBudget fuel) {
  EvalOptions opts;
  opts.fuel = fuel;
  opts.ground_cap = base;
  opts.totality_probe = finite_totality_probe(base);
  return opts;
}

TermPtr replace_oracle(const TermPtr& t, const std::string& id, const TermPtr& s) {
  switch (t->kind) {
    case TermKind::zero:
    case TermKind::var:
      return t;
    case TermKind::oracle:
      if (t->name == id) {
        if (s->ty != t->ty) fail(Errc::type_mismatch, "replacement term has the wrong type");
        return s;
      }
      return t;
    case TermKind::suc:
      return mk_suc(replace_oracle(t->a, id, s));
    case TermKind::pred:
      return mk_pred(replace_oracle(t->a, id, s));
    case TermKind::kase:
      return mk_case(replace_oracle(t->a, id, s), replace_oracle(t->b, id, s),
                     replace_oracle(t->c, id, s));
    case TermKind::app:
      return mk_app(replace_oracle(t->a, id, s), replace_oracle(t->b, id, s));
    case TermKind::lam:
      return mk_lam(t->name, t->binder, replace_oracle(t->a, id, s));
    case TermKind::mu:
      return mk_mu(t->name, t->binder, replace_oracle(t->a, id, s));
  }
  fail(Errc::invariant, "unreachable term kind");
}

namespace {

struct TermEnum {
  const EnumLimits& lims;
  const std::function<void(const TermPtr&)>& sink;
  uint64_t emitted = 0;
  std::vector<std::pair<std::string, FiniteType>> env;

  void emit(const TermPtr& t) {
    if (++emitted > lims.term_cap)
      fail(Errc::enumeration_too_large, "term enumeration exceeded " + std::to_string(lims.term_cap));
    sink(t);
  }

  // All well-typed terms of the target type with exactly <= budget nodes,
  // fed through a continuation so application spines can share structure.
  void gen(const FiniteType& target, unsigned budget,
           const std::function<void(const TermPtr&)>& k) {
    if (budget == 0) return;
    if (target.is_ground()) k(mk_zero());
    for (const auto& [name, ty] : env)
      if (ty == target) k(mk_var(name, ty));
    for (const auto& [id, ty] : lims.oracles)
      if (ty == target) k(mk_oracle(id, ty));
    if (budget == 1) return;
    if (target.is_ground()) {
      gen(FiniteType::ground(), budget - 1, [&](const TermPtr& t) {
        k(mk_suc(t));
        k(mk_pred(t));
      });
      if (budget >= 4) {
        for (unsigned ba = 1; ba + 2 <= budget - 1; ++ba) {
          gen(FiniteType::ground(), ba, [&](const TermPtr& a) {
            if (node_count(a) != ba) return;
            for (unsigned bb = 1; ba + bb + 1 <= budget - 1; ++bb) {
              gen(FiniteType::ground(), bb, [&](const TermPtr& b) {
                if (node_count(b) != bb) return;
                gen(FiniteType::ground(), budget - 1 - ba - bb, [&](const TermPtr& c) {
                  k(mk_case(a, b, c));
                });
              });
            }
          });
        }
      }
    } else {
      // lam binds the first argument type. Bodies are collected before the
      // binder is popped so the continuation never runs inside its scope.
      std::string name = "x" + std::to_string(env.size());
      std::vector<TermPtr> built;
      env.emplace_back(name, target.args()[0]);
      gen(target.drop_first(), budget - 1,
          [&](const TermPtr& body) { built.push_back(mk_lam(name, target.args()[0], body)); });
      env.pop_back();
      for (const TermPtr& t : built) k(t);
    }
    {
      // mu at the target type; same scope discipline as lam
      std::string name = "x" + std::to_string(env.size());
      std::vector<TermPtr> built;
      env.emplace_back(name, target);
      gen(target, budget - 1, [&](const TermPtr& body) { built.push_back(mk_mu(name, target, body)); });
      env.pop_back();
      for (const TermPtr& t : built) k(t);
    }
    // applications: pick the argument type from the alphabet
    for (const auto& sigma : lims.arg_types) {
      FiniteType fun_ty = FiniteType::arrow(sigma, target);
      if (fun_ty.rank() > 3) continue;
      for (unsigned bf = 1; bf + 1 <= budget - 1; ++bf) {
        gen(fun_ty, bf, [&](const TermPtr& f) {
          if (node_count(f) != bf) return;
          gen(sigma, budget - 1 - bf, [&](const TermPtr& a) { k(mk_app(f, a)); });
        });
      }
    }
  }
};

}  // namespace

uint64_t enumerate_closed_terms(const FiniteType& target, const EnumLimits& lims,
                                const std::function<void(const TermPtr&)>& sink) {
  TermEnum e{lims, sink, 0, {}};
  e.gen(target, lims.max_nodes, [&](const TermPtr& t) { e.emit(t); });
  return e.emitted;
}

Agreement check_agreement(const TermPtr& t, const std::map<std::string, FinObj>& oracle_tables,
                          unsigned base, FuelBudget fuel, const MiniCaps& caps) {
  Agreement out;
  FinObj d = denote_finite(t, {}, oracle_tables, base, caps);
  out.denoted = d.vals[0];
  OracleRegistry reg;
  for (const auto& [id, table] : oracle_tables) reg.add(oracle_from_table(id, table));
  for (int attempt = 0; attempt < 4; ++attempt) {
    EvalOptions opts = finite_eval_options(base, fuel);
    out.eval_out = evaluate(t, reg, opts).outcome;
    if (out.eval_out.kind != OutcomeKind::fuel || out.denoted < 0) break;
    fuel.steps *= 16;
    fuel.oracle_calls *= 16;
    out.note = "fuel raised to " + std::to_string(fuel.steps);
  }
  if (out.denoted >= 0)
    out.agree = out.eval_out.is_value() &&
                out.eval_out.value == static_cast<uint64_t>(out.denoted);
  else
    out.agree = !out.eval_out.is_value();
  return out;
}

}  // namespace mukleene

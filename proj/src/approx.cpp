#include "mukleene/approx.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "mukleene/errors.hpp"
#include "mukleene/godel.hpp"

namespace mukleene {

uint64_t limstar(const std::function<uint64_t(StageIndex)>& seq, StageIndex alpha) {
  if (alpha == 0) return 0;
  return seq(alpha - 1);
}

namespace {

struct StageEngine {
  const OracleRegistry& reg;
  const ApproxOptions& opts;
  uint64_t calls = 0;
  std::map<std::string, HostVal> host;
  uint64_t query_seq = 0;
  std::unordered_map<std::string, uint64_t> memo;

  StageEngine(const OracleRegistry& r, const ApproxOptions& o) : reg(r), opts(o) {}

  uint64_t sat_suc(uint64_t v) const {
    if (opts.ground_cap > 0 && v + 1 >= opts.ground_cap) return opts.ground_cap - 1;
    return v + 1;
  }

  uint64_t eval(const TermPtr& t, StageIndex alpha) {
    if (++calls > opts.call_cap)
      fail(Errc::cap_exceeded, "stage approximation exceeded " + std::to_string(opts.call_cap) +
                                   " recursive calls");
    if (alpha == 0) return 0;
    bool memoable = false;
    std::string key;
    if (opts.memo && free_vars(t).empty()) {
      memoable = true;
      key = godel_encode(t).hex() + "@" + std::to_string(alpha);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    TermPtr head = t;
    std::vector<TermPtr> args;
    while (head->kind == TermKind::app) {
      args.push_back(head->b);
      head = head->a;
    }
    std::reverse(args.begin(), args.end());
    uint64_t v = dispatch(head, args, alpha);
    if (memoable) memo.emplace(std::move(key), v);
    return v;
  }

  uint64_t dispatch(const TermPtr& head, const std::vector<TermPtr>& args, StageIndex alpha) {
    switch (head->kind) {
      case TermKind::zero:
        return 0;
      case TermKind::suc:
        return sat_suc(eval(head->a, alpha - 1));
      case TermKind::pred: {
        uint64_t v = eval(head->a, alpha - 1);
        return v == 0 ? 0 : v - 1;
      }
      case TermKind::kase: {
        uint64_t s = eval(head->a, alpha - 1);
        return eval(s == 0 ? head->b : head->c, alpha - 1);
      }
      case TermKind::var: {
        auto it = host.find(head->name);
        if (it == host.end())
          fail(Errc::invariant, "stage approximation reached unbound variable " + head->name);
        const HostVal hv = it->second;
        if (hv.is_nat) {
          if (!args.empty()) fail(Errc::type_mismatch, "ground placeholder applied to arguments");
          return hv.nat;
        }
        std::vector<uint64_t> nats;
        for (const TermPtr& a : args) nats.push_back(eval(a, alpha - 1));
        EvalOutcome r = hv.fn(nats);
        if (!r.is_value())
          fail(Errc::invariant, "host function returned a non-value during stage approximation");
        return r.value;
      }
      case TermKind::oracle: {
        const OracleSpec* spec = reg.find(head->name);
        if (!spec) fail(Errc::unbound_oracle, "#" + head->name + " is not in the registry");
        if (!spec->declared_total)
          fail(Errc::precondition_violated,
               "stage approximation requires declared-total oracles; #" + head->name + " is partial");
        const auto& sig = spec->type.args();
        if (args.size() != sig.size())
          fail(Errc::type_mismatch, "oracle #" + head->name + " applied at wrong arity");
        std::vector<OracleArg> oargs;
        for (size_t i = 0; i < args.size(); ++i) {
          if (sig[i].is_ground()) {
            oargs.push_back(OracleArg::of(eval(args[i], alpha - 1)));
          } else {
            oargs.push_back(OracleArg::of_fun(make_handle(args[i], sig[i], alpha - 1)));
          }
        }
        EvalOutcome r = spec->call(oargs, opts.fuel);
        if (!r.is_value())
          fail(Errc::invariant,
               "declared-total oracle #" + head->name + " returned a non-value during approximation");
        return r.value;
      }
      case TermKind::lam: {
        if (args.empty())
          fail(Errc::type_mismatch, "stage approximation reached a bare lambda (term is not ground)");
        TermPtr rest = substitute(head->a, head->name, args[0]);
        for (size_t i = 1; i < args.size(); ++i) rest = mk_app(rest, args[i]);
        return eval(rest, alpha - 1);
      }
      case TermKind::mu: {
        TermPtr rest = substitute(head->a, head->name, head);
        for (const TermPtr& a : args) rest = mk_app(rest, a);
        return eval(rest, alpha - 1);
      }
      case TermKind::app:
        fail(Errc::invariant, "spine head cannot be an application");
    }
    fail(Errc::invariant, "unreachable term kind");
  }

  // Queries against a non-ground oracle argument are themselves approximated,
  // all at the stage below the oracle application.
  FunArg make_handle(const TermPtr& term, const FiniteType& ty, StageIndex stage) {
    FunArg h;
    h.type = ty;
    h.id = static_cast<int>(query_seq++);
    int id = h.id;
    h.query = [this, term, ty, stage, id](const std::vector<HostVal>& qargs) -> EvalOutcome {
      const auto& sig = ty.args();
      if (qargs.size() != sig.size())
        fail(Errc::type_mismatch, "handle h" + std::to_string(id) + " queried at wrong arity");
      std::vector<std::string> names;
      TermPtr spine = term;
      for (size_t i = 0; i < sig.size(); ++i) {
        std::string nm = "$a" + std::to_string(id) + "_" + std::to_string(i) + "_" +
                         std::to_string(query_seq++);
        HostVal hv = qargs[i];
        if (sig[i].is_ground()) {
          if (!hv.is_nat)
            fail(Errc::type_mismatch, "handle query expected a natural at position " + std::to_string(i));
        } else if (hv.is_nat || hv.type != sig[i]) {
          fail(Errc::type_mismatch, "handle query expected a function at position " + std::to_string(i));
        }
        spine = mk_app(spine, mk_var(nm, sig[i]));
        host.emplace(nm, std::move(hv));
        names.push_back(std::move(nm));
      }
      uint64_t v = eval(spine, stage);
      for (const auto& nm : names) host.erase(nm);
      return EvalOutcome::val(v);
    };
    return h;
  }
};

}  // namespace

uint64_t approx_eval(const TermPtr& t, const OracleRegistry& reg, StageIndex alpha,
                     const ApproxOptions& opts) {
  if (!t->ty.is_ground()) fail(Errc::type_mismatch, "stage approximation requires a ground-typed term");
  if (!is_closed(t)) fail(Errc::type_mismatch, "stage approximation requires a closed term");
  StageEngine e(reg, opts);
  return e.eval(t, alpha);
}

StageIndex stabilization_stage(const TermPtr& t, const OracleRegistry& reg, StageIndex max_stage,
                               const ApproxOptions& opts) {
  EvalOptions eopts;
  eopts.fuel = opts.fuel;
  EvalResult res = evaluate(t, reg, eopts);
  if (!res.outcome.is_value())
    fail(Errc::no_stabilization,
         "term has no value at the available fuel (" + res.outcome.str() + ")");
  uint64_t target = res.outcome.value;
  // Least stage from which every value up to max_stage equals the target.
  std::vector<uint64_t> vals;
  vals.reserve(max_stage);
  for (StageIndex a = 1; a <= max_stage; ++a) vals.push_back(approx_eval(t, reg, a, opts));
  StageIndex least = 0;
  for (StageIndex a = max_stage; a >= 1; --a) {
    if (vals[a - 1] != target) break;
    least = a;
  }
  if (least == 0)
    fail(Errc::no_stabilization,
         "approximation does not settle on " + std::to_string(target) + " by stage " +
             std::to_string(max_stage));
  return least;
}

}  // namespace mukleene

#include "mukleene/eval.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "mukleene/errors.hpp"
#include "mukleene/tree.hpp"

namespace mukleene {

std::string EvalOutcome::str() const {
  switch (kind) {
    case OutcomeKind::value:
      return "value " + std::to_string(value);
    case OutcomeKind::bottom:
      return detail.empty() ? "bottom" : "bottom (" + detail + ")";
    case OutcomeKind::fuel:
      return detail.empty() ? "fuel-exhausted" : "fuel-exhausted (" + detail + ")";
  }
  return "?";
}

EvalOutcome FunArg::at(std::vector<uint64_t> nats) const {
  std::vector<HostVal> hv;
  hv.reserve(nats.size());
  for (uint64_t n : nats) hv.push_back(HostVal::of(n));
  return query(hv);
}

void OracleRegistry::add(OracleSpec spec) {
  if (spec.type.is_ground())
    fail(Errc::type_mismatch, "oracle " + spec.id + " must have an arrow type");
  if (spec.type.rank() > 3)
    fail(Errc::rank_violation, "oracle " + spec.id + " exceeds rank 3");
  if (!spec.call) fail(Errc::invariant, "oracle " + spec.id + " has no callback");
  std::string id = spec.id;
  if (!specs_.emplace(id, std::move(spec)).second)
    fail(Errc::format_error, "duplicate oracle id " + id);
}

const OracleSpec* OracleRegistry::find(const std::string& id) const {
  auto it = specs_.find(id);
  return it == specs_.end() ? nullptr : &it->second;
}

std::map<std::string, FiniteType> OracleRegistry::type_map() const {
  std::map<std::string, FiniteType> m;
  for (const auto& [id, spec] : specs_) m.emplace(id, spec.type);
  return m;
}

bool OracleRegistry::all_total() const {
  for (const auto& [id, spec] : specs_)
    if (!spec.declared_total) return false;
  return true;
}

namespace {

struct Engine {
  // Left-spine growth turns reduction depth into C++ stack depth, so depth
  // is budgeted like steps; past the cap the verdict is fuel, not a crash.
  // Handle queries and probe enumeration ride on the same stack, so the cap
  // stays well below what an 8 MiB stack fits.
  static constexpr uint64_t kDepthCap = 1'500;

  const OracleRegistry& reg;
  const EvalOptions& opts;
  uint64_t steps = 0;
  uint64_t ocalls = 0;
  uint64_t depth = 0;
  std::vector<QueryRecord> queries;
  std::map<std::string, HostVal> host;
  int handle_seq = 0;
  uint64_t query_seq = 0;
  bool record = false;
  uint64_t nodes = 0;
  std::unique_ptr<CompNode>* root_slot = nullptr;
  std::unordered_map<GodelCode, uint64_t, GodelHash> memo;

  Engine(const OracleRegistry& r, const EvalOptions& o) : reg(r), opts(o) {}

  bool step_ok() {
    if (steps >= opts.fuel.steps) return false;
    ++steps;
    return true;
  }

  uint64_t sat_suc(uint64_t v) const {
    if (opts.ground_cap > 0 && v + 1 >= opts.ground_cap) return opts.ground_cap - 1;
    return v + 1;
  }

  CompNode* add_node(CompNode* parent, NodeKind kind, const TermPtr& t) {
    if (!record) return nullptr;
    if (nodes >= opts.node_cap)
      fail(Errc::node_cap_exceeded,
           "computation tree would exceed " + std::to_string(opts.node_cap) + " nodes");
    ++nodes;
    auto n = std::make_unique<CompNode>();
    n->kind = kind;
    n->code = godel_encode(t);
    CompNode* raw = n.get();
    if (parent)
      parent->children.push_back(std::move(n));
    else if (root_slot)
      *root_slot = std::move(n);
    else
      fail(Errc::invariant, "tree recording without a root slot");
    return raw;
  }

  FunArg make_handle(const TermPtr& term, const FiniteType& ty, CompNode* attach) {
    FunArg h;
    h.type = ty;
    h.id = handle_seq++;
    int id = h.id;
    h.query = [this, term, ty, attach, id](const std::vector<HostVal>& qargs) -> EvalOutcome {
      const auto& sig = ty.args();
      if (qargs.size() != sig.size())
        fail(Errc::type_mismatch, "handle h" + std::to_string(id) + " queried at wrong arity");
      std::vector<std::string> names;
      std::ostringstream rendered;
      TermPtr spine = term;
      for (size_t i = 0; i < sig.size(); ++i) {
        std::string nm =
            "$q" + std::to_string(id) + "_" + std::to_string(i) + "_" + std::to_string(query_seq++);
        HostVal hv = qargs[i];
        if (sig[i].is_ground()) {
          if (!hv.is_nat)
            fail(Errc::type_mismatch, "handle query expected a natural at position " + std::to_string(i));
          rendered << ' ' << hv.nat;
        } else {
          if (hv.is_nat || hv.type != sig[i])
            fail(Errc::type_mismatch, "handle query expected a function at position " + std::to_string(i));
          rendered << " <fn>";
        }
        spine = mk_app(spine, mk_var(nm, sig[i]));
        host.emplace(nm, std::move(hv));
        names.push_back(std::move(nm));
      }
      CompNode* qnode = nullptr;
      if (record && attach) {
        qnode = add_node(attach, NodeKind::query, spine);
        qnode->params.push_back("h" + std::to_string(id));
        std::string rs = rendered.str();
        qnode->params.push_back(rs.empty() ? "()" : rs.substr(1));
      }
      EvalOutcome r = eval(spine, qnode);
      if (qnode) {
        qnode->params.push_back("=> " + r.str());
        if (r.is_value()) qnode->value = r.value;
      }
      std::string rs = rendered.str();
      queries.push_back({"h" + std::to_string(id), (rs.empty() ? "()" : rs.substr(1)) + " -> " + r.str()});
      for (const auto& nm : names) host.erase(nm);
      return r;
    };
    return h;
  }

  EvalOutcome eval(const TermPtr& t, CompNode* parent) {
    if (depth >= kDepthCap) return EvalOutcome::fuel("recursion depth");
    ++depth;
    EvalOutcome r = eval_inner(t, parent);
    --depth;
    return r;
  }

  EvalOutcome eval_inner(const TermPtr& t, CompNode* parent) {
    if (!step_ok()) return EvalOutcome::fuel("step budget");
    bool memoable = false;
    GodelCode key;
    if (opts.memo && !record && free_vars(t).empty()) {
      memoable = true;
      key = godel_encode(t);
      auto it = memo.find(key);
      if (it != memo.end()) return EvalOutcome::val(it->second);
    }
    TermPtr head = t;
    std::vector<TermPtr> args;
    while (head->kind == TermKind::app) {
      args.push_back(head->b);
      head = head->a;
    }
    std::reverse(args.begin(), args.end());
    EvalOutcome out = dispatch(head, args, t, parent);
    if (memoable && out.is_value()) memo.emplace(std::move(key), out.value);
    return out;
  }

  EvalOutcome dispatch(const TermPtr& head, const std::vector<TermPtr>& args, const TermPtr& whole,
                       CompNode* parent) {
    switch (head->kind) {
      case TermKind::zero: {
        CompNode* node = add_node(parent, NodeKind::leaf_zero, whole);
        if (node) node->value = 0;
        return EvalOutcome::val(0);
      }
      case TermKind::suc:
      case TermKind::pred: {
        CompNode* node =
            add_node(parent, head->kind == TermKind::suc ? NodeKind::suc : NodeKind::pred, whole);
        EvalOutcome r = eval(head->a, node);
        if (!r.is_value()) return r;
        uint64_t v = head->kind == TermKind::suc ? sat_suc(r.value) : (r.value == 0 ? 0 : r.value - 1);
        if (node) node->value = v;
        return EvalOutcome::val(v);
      }
      case TermKind::kase: {
        CompNode* node = add_node(parent, NodeKind::kase, whole);
        EvalOutcome s = eval(head->a, node);
        if (!s.is_value()) return s;
        if (node) node->params.push_back(std::to_string(s.value));
        EvalOutcome r = eval(s.value == 0 ? head->b : head->c, node);
        if (node && r.is_value()) node->value = r.value;
        return r;
      }
      case TermKind::var: {
        auto it = host.find(head->name);
        if (it == host.end())
          fail(Errc::invariant, "evaluation reached unbound variable " + head->name);
        const HostVal hv = it->second;
        CompNode* node = add_node(parent, NodeKind::host_app, whole);
        if (node) node->params.push_back(head->name);
        if (hv.is_nat) {
          if (!args.empty()) fail(Errc::type_mismatch, "ground placeholder applied to arguments");
          if (node) node->value = hv.nat;
          return EvalOutcome::val(hv.nat);
        }
        std::vector<uint64_t> nats;
        nats.reserve(args.size());
        for (const TermPtr& a : args) {
          EvalOutcome r = eval(a, node);
          if (!r.is_value()) return r;
          if (node) node->params.push_back(std::to_string(r.value));
          nats.push_back(r.value);
        }
        EvalOutcome r = hv.fn(nats);
        if (node && r.is_value()) node->value = r.value;
        return r;
      }
      case TermKind::oracle: {
        const OracleSpec* spec = reg.find(head->name);
        if (!spec) fail(Errc::unbound_oracle, "#" + head->name + " is not in the registry");
        CompNode* node = add_node(parent, NodeKind::oracle_app, whole);
        if (node) node->params.push_back("#" + head->name);
        if (ocalls >= opts.fuel.oracle_calls) return EvalOutcome::fuel("oracle budget");
        ++ocalls;
        const auto& sig = spec->type.args();
        if (args.size() != sig.size())
          fail(Errc::type_mismatch, "oracle #" + head->name + " applied at wrong arity");
        std::vector<OracleArg> oargs;
        std::ostringstream rendered;
        for (size_t i = 0; i < args.size(); ++i) {
          if (sig[i].is_ground()) {
            EvalOutcome r = eval(args[i], node);
            if (!r.is_value()) return r;
            if (node) node->params.push_back(std::to_string(r.value));
            rendered << ' ' << r.value;
            oargs.push_back(OracleArg::of(r.value));
          } else {
            FunArg h = make_handle(args[i], sig[i], node);
            if (opts.ground_cap > 0) {
              if (!opts.totality_probe)
                fail(Errc::invariant, "finite-base evaluation needs a totality probe");
              if (auto bad = opts.totality_probe(h, sig[i])) return *bad;
            }
            if (node) node->params.push_back("h" + std::to_string(h.id));
            rendered << " h" << h.id;
            oargs.push_back(OracleArg::of_fun(std::move(h)));
          }
        }
        EvalOutcome r = spec->call(oargs, opts.fuel);
        if (spec->declared_total && r.kind == OutcomeKind::bottom) {
          // A total functional is still undefined on a partial function
          // argument (strict reading), so bottom is only a contract breach
          // when every argument was itself certified.
          bool certified = opts.ground_cap > 0;
          bool all_ground = true;
          for (const auto& a : sig)
            if (!a.is_ground()) all_ground = false;
          if (all_ground || certified)
            fail(Errc::invariant, "declared-total oracle #" + head->name + " returned bottom");
        }
        std::string rs = rendered.str();
        queries.push_back({head->name, (rs.empty() ? "()" : rs.substr(1)) + " -> " + r.str()});
        if (node) {
          node->params.push_back("=> " + r.str());
          if (r.is_value()) node->value = r.value;
        }
        return r;
      }
      case TermKind::lam: {
        if (args.empty())
          fail(Errc::type_mismatch, "evaluation reached a bare lambda (term is not ground)");
        CompNode* node = add_node(parent, NodeKind::lam_app, whole);
        const TermPtr& arg = args[0];
        const FiniteType& sigma = head->binder;
        if (opts.ground_cap > 0) {
          // Finite base: applications are strict, so the argument must be a
          // total object before the reduct is taken.
          if (sigma.is_ground()) {
            EvalOutcome r = eval(arg, node);
            if (!r.is_value()) return r;
            if (node) node->params.push_back(std::to_string(r.value));
          } else {
            if (!opts.totality_probe)
              fail(Errc::invariant, "finite-base evaluation needs a totality probe");
            FunArg probe = make_handle(arg, sigma, node);
            if (auto bad = opts.totality_probe(probe, sigma)) return *bad;
            if (node) node->params.push_back("h" + std::to_string(probe.id));
          }
        }
        TermPtr rest = substitute(head->a, head->name, arg);
        for (size_t i = 1; i < args.size(); ++i) rest = mk_app(rest, args[i]);
        EvalOutcome r = eval(rest, node);
        if (node && r.is_value()) node->value = r.value;
        return r;
      }
      case TermKind::mu: {
        CompNode* node = add_node(parent, NodeKind::mu_app, whole);
        TermPtr rest = substitute(head->a, head->name, head);
        for (const TermPtr& a : args) rest = mk_app(rest, a);
        EvalOutcome r = eval(rest, node);
        if (node && r.is_value()) node->value = r.value;
        return r;
      }
      case TermKind::app:
        fail(Errc::invariant, "spine head cannot be an application");
    }
    fail(Errc::invariant, "unreachable term kind");
  }
};

void check_eval_input(const TermPtr& t, const EvalOptions& opts) {
  if (!t->ty.is_ground()) fail(Errc::type_mismatch, "evaluation requires a ground-typed term");
  if (!is_closed(t)) fail(Errc::type_mismatch, "evaluation requires a closed term");
  if (opts.ground_cap > 0 && !opts.totality_probe)
    fail(Errc::invariant, "ground_cap requires a totality probe");
}

}  // namespace

EvalResult evaluate(const TermPtr& t, const OracleRegistry& reg, const EvalOptions& opts) {
  check_eval_input(t, opts);
  Engine e(reg, opts);
  EvalResult res;
  res.outcome = e.eval(t, nullptr);
  res.steps_used = e.steps;
  res.oracle_calls_used = e.ocalls;
  res.queries = std::move(e.queries);
  return res;
}

CompTree build_tree(const TermPtr& t, const OracleRegistry& reg, const EvalOptions& opts) {
  check_eval_input(t, opts);
  Engine e(reg, opts);
  e.record = true;
  CompTree tree;
  tree.ground_cap = opts.ground_cap;
  e.root_slot = &tree.root;
  tree.outcome = e.eval(t, nullptr);
  tree.node_count = e.nodes;
  tree.rank = tree.root ? node_height(*tree.root) : 0;
  return tree;
}

OracleSpec oracle_mu2(const std::string& id, bool declared_total) {
  OracleSpec s;
  s.id = id;
  s.type = FiniteType::fun({FiniteType::fun({FiniteType::ground()})});
  s.declared_total = declared_total;
  s.call = [declared_total](const std::vector<OracleArg>& args,
                            const FuelBudget& fuel) -> EvalOutcome {
    if (args.size() != 1 || args[0].is_nat)
      fail(Errc::type_mismatch, "mu2 expects one function argument");
    const FunArg& f = args[0].fun;
    for (uint64_t n = 0; n < fuel.search_bound; ++n) {
      EvalOutcome r = f.at({n});
      if (!r.is_value()) return r;
      if (r.value == 0) return EvalOutcome::val(n);
    }
    if (declared_total) return EvalOutcome::val(0);
    return EvalOutcome::fuel("no zero below search bound " + std::to_string(fuel.search_bound));
  };
  return s;
}

OracleSpec oracle_exists2(const std::string& id, bool declared_total) {
  OracleSpec s;
  s.id = id;
  s.type = FiniteType::fun({FiniteType::fun({FiniteType::ground()})});
  s.declared_total = declared_total;
  s.call = [declared_total](const std::vector<OracleArg>& args,
                            const FuelBudget& fuel) -> EvalOutcome {
    if (args.size() != 1 || args[0].is_nat)
      fail(Errc::type_mismatch, "exists2 expects one function argument");
    const FunArg& f = args[0].fun;
    for (uint64_t n = 0; n < fuel.search_bound; ++n) {
      EvalOutcome r = f.at({n});
      if (!r.is_value()) return r;
      if (r.value == 0) return EvalOutcome::val(0);
    }
    if (declared_total) return EvalOutcome::val(1);
    return EvalOutcome::fuel("no zero below search bound " + std::to_string(fuel.search_bound));
  };
  return s;
}

OracleSpec oracle_const(const std::string& id, const FiniteType& ty, uint64_t value) {
  OracleSpec s;
  s.id = id;
  s.type = ty;
  s.declared_total = true;
  s.call = [value](const std::vector<OracleArg>&, const FuelBudget&) -> EvalOutcome {
    return EvalOutcome::val(value);
  };
  return s;
}

}  // namespace mukleene

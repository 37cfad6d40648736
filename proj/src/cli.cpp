#include "mukleene/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mukleene/approx.hpp"
#include "mukleene/clusters.hpp"
#include "mukleene/errors.hpp"
#include "mukleene/eval.hpp"
#include "mukleene/mini.hpp"
#include "mukleene/paff.hpp"
#include "mukleene/report.hpp"
#include "mukleene/rset.hpp"
#include "mukleene/term.hpp"
#include "mukleene/tree.hpp"

namespace mukleene::cli {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::format_error, path + ": cannot read");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::format_error, path + ": cannot write");
  out << data;
  if (!out) fail(Errc::format_error, path + ": write failed");
}

// File contents that parse but break a structural invariant (breakpoints out
// of order, piece/value count mismatch) are the file's fault, not the
// caller's, so the precondition failure is resurfaced as InvariantViolation.
PAff load_fn(const std::string& path) {
  try {
    return PAff::from_json(slurp(path));
  } catch (const Error& e) {
    if (e.code() != Errc::precondition_violated) throw;
    fail(Errc::invariant, path + ": " + e.what());
  }
}

uint64_t env_default_steps() {
  const char* v = std::getenv("MU_KLEENE_FUEL");
  if (!v || !*v) return FuelBudget{}.steps;
  char* end = nullptr;
  unsigned long long n = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0' || n == 0)
    fail(Errc::format_error, std::string("MU_KLEENE_FUEL: not a positive integer: ") + v);
  return n;
}

std::string enclosure_str(const Enclosure& e) {
  return "[" + e.lo.str() + ", " + e.hi.str() + "]";
}

// ---------------------------------------------------------------------------
// Set files.
//
// A .set file is a JSON object with an "intervals" array (objects with
// lo/hi strings and lo_closed/hi_closed booleans, both defaulting to true),
// an optional "points" array of rationals, and an optional "indices" array
// labelling the listed points one to one.
// ---------------------------------------------------------------------------

struct LoadedSet {
  RSet set;
  std::string raw;
  std::vector<Rat> listed;  // "points" entries in file order
  std::vector<std::pair<Rat, uint64_t>> labels;  // empty = positional labels

  IndexFn index_fn() const {
    std::map<Rat, uint64_t> table;
    if (!labels.empty()) {
      for (const auto& [x, i] : labels) table[x] = i;
    } else {
      uint64_t rank = 0;
      for (const auto& iv : set.intervals())
        if (iv.is_point()) table[iv.lo] = rank++;
    }
    return [table](const Rat& x) {
      auto it = table.find(x);
      if (it == table.end())
        fail(Errc::precondition_violated, "point has no label: " + x.str());
      return it->second;
    };
  }
};

LoadedSet load_set(const std::string& path) {
  LoadedSet ls;
  ls.raw = slurp(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ls.raw);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format_error, path + ": " + e.what());
  }
  if (!j.is_object()) fail(Errc::format_error, path + ": not an object");
  try {
    if (j.contains("intervals"))
      for (const auto& node : j.at("intervals")) {
        RIv iv;
        iv.lo = Rat::parse(node.at("lo").get<std::string>());
        iv.hi = Rat::parse(node.at("hi").get<std::string>());
        iv.lo_closed = node.value("lo_closed", true);
        iv.hi_closed = node.value("hi_closed", true);
        ls.set.add(iv);
      }
    if (j.contains("points"))
      for (const auto& node : j.at("points")) {
        Rat x = Rat::parse(node.get<std::string>());
        ls.listed.push_back(x);
        ls.set.add_point(x);
      }
    if (j.contains("indices")) {
      const auto& idx = j.at("indices");
      if (idx.size() != ls.listed.size())
        fail(Errc::format_error, path + ": indices and points differ in length");
      for (size_t i = 0; i < ls.listed.size(); ++i)
        ls.labels.emplace_back(ls.listed[i], idx.at(i).get<uint64_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format_error, path + ": " + e.what());
  }
  return ls;
}

// ---------------------------------------------------------------------------
// Oracle wiring.
//
// The manifest is a JSON object {"oracles": [...]}; each entry has a name, a
// kind (mu2 | exists2 | const | omega_b | omega), and kind-specific fields:
// "total" (mu2/exists2, default true), "bound" (per-oracle search bound),
// "type" and "value" (const), "set" (omega kinds; path relative to the
// manifest). omega_b answers the emptiness flag of its set; omega maps k to
// floor(x * 2^k) for the unique element x and is certified bottom on the
// empty set.
// ---------------------------------------------------------------------------

OracleSpec with_search_bound(OracleSpec spec, uint64_t bound) {
  auto inner = spec.call;
  spec.call = [inner, bound](const std::vector<OracleArg>& args, const FuelBudget& budget) {
    FuelBudget b = budget;
    b.search_bound = bound;
    return inner(args, b);
  };
  return spec;
}

OracleSpec oracle_omega_b(const std::string& id, const RSet& s) {
  OracleSpec spec;
  spec.id = id;
  spec.type = FiniteType::fun({FiniteType::ground()});
  spec.declared_total = true;
  uint64_t flag = s.nonempty_in(RIv{Rat(0), Rat(1), true, true}) ? 1 : 0;
  spec.call = [flag](const std::vector<OracleArg>&, const FuelBudget&) {
    return EvalOutcome::val(flag);
  };
  return spec;
}

OracleSpec oracle_omega(const std::string& id, const RSet& s) {
  auto card = s.exact_card();
  if (card && *card > 1)
    fail(Errc::precondition_violated, id + ": omega oracle needs a set of at most one element");
  if (!s.rational_only())
    fail(Errc::precondition_violated, id + ": omega oracle needs a rational set");
  std::optional<Rat> elem;
  if (!s.empty()) elem = s.inf();
  OracleSpec spec;
  spec.id = id;
  spec.type = FiniteType::fun({FiniteType::ground()});
  spec.declared_total = false;
  spec.call = [id, elem](const std::vector<OracleArg>& args, const FuelBudget&) -> EvalOutcome {
    if (!elem) return EvalOutcome::bottom(id + ": empty set");
    if (args.empty() || !args[0].is_nat) return EvalOutcome::bottom(id + ": bad argument");
    uint64_t k = args[0].nat;
    if (k > 62) return EvalOutcome::fuel(id + ": digit index beyond host word");
    mpz_class d = (*elem * Rat::pow2(static_cast<long>(k))).floor();
    return EvalOutcome::val(d.get_ui());
  };
  return spec;
}

struct OracleFlags {
  std::string manifest;
  std::vector<std::string> mu2_total, mu2_partial, e2_total, e2_partial;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--oracles", manifest, "oracle manifest file");
    cmd->add_option("--mu2", mu2_total, "add a total least-zero search oracle");
    cmd->add_option("--mu2-partial", mu2_partial, "add a partial least-zero search oracle");
    cmd->add_option("--exists2", e2_total, "add a total zero-existence oracle");
    cmd->add_option("--exists2-partial", e2_partial, "add a partial zero-existence oracle");
  }

  OracleRegistry build() const {
    OracleRegistry reg;
    for (const auto& n : mu2_total) reg.add(oracle_mu2(n, true));
    for (const auto& n : mu2_partial) reg.add(oracle_mu2(n, false));
    for (const auto& n : e2_total) reg.add(oracle_exists2(n, true));
    for (const auto& n : e2_partial) reg.add(oracle_exists2(n, false));
    if (manifest.empty()) return reg;

    std::string raw = slurp(manifest);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::format_error, manifest + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("oracles") || !j.at("oracles").is_array())
      fail(Errc::format_error, manifest + ": needs an oracles array");
    auto base_dir = std::filesystem::path(manifest).parent_path();
    try {
      for (const auto& node : j.at("oracles")) {
        std::string name = node.at("name").get<std::string>();
        std::string kind = node.at("kind").get<std::string>();
        bool total = node.value("total", true);
        if (kind == "mu2" || kind == "exists2") {
          OracleSpec spec =
              kind == "mu2" ? oracle_mu2(name, total) : oracle_exists2(name, total);
          if (node.contains("bound"))
            spec = with_search_bound(std::move(spec), node.at("bound").get<uint64_t>());
          reg.add(std::move(spec));
        } else if (kind == "const") {
          FiniteType ty = FiniteType::parse(node.at("type").get<std::string>());
          reg.add(oracle_const(name, ty, node.at("value").get<uint64_t>()));
        } else if (kind == "omega_b" || kind == "omega") {
          std::string set_path = (base_dir / node.at("set").get<std::string>()).string();
          LoadedSet ls = load_set(set_path);
          reg.add(kind == "omega_b" ? oracle_omega_b(name, ls.set)
                                    : oracle_omega(name, ls.set));
        } else {
          fail(Errc::format_error, manifest + ": unknown oracle kind '" + kind + "'");
        }
      }
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::format_error, manifest + ": " + e.what());
    }
    return reg;
  }
};

struct FuelFlags {
  uint64_t steps = 0;  // 0 = take the default (or MU_KLEENE_FUEL)
  uint64_t oracle_calls = 0;
  uint64_t search_bound = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--fuel", steps, "step budget");
    cmd->add_option("--oracle-fuel", oracle_calls, "oracle call budget");
    cmd->add_option("--search-bound", search_bound, "search oracle scan bound");
  }

  FuelBudget build() const {
    FuelBudget b;
    b.steps = steps ? steps : env_default_steps();
    if (oracle_calls) b.oracle_calls = oracle_calls;
    if (search_bound) b.search_bound = search_bound;
    return b;
  }
};

TermPtr load_term(const std::string& path, const OracleRegistry& reg,
                  const std::vector<uint64_t>& args) {
  TermPtr t = parse_term(slurp(path), reg.type_map());
  for (uint64_t a : args) t = mk_app(t, numeral(a));
  if (!t->ty.is_ground())
    fail(Errc::type_mismatch, path + ": term is not ground after applying " +
                                  std::to_string(args.size()) + " argument(s)");
  return t;
}

EvalOptions make_eval_options(unsigned ground_cap, const FuelBudget& fuel) {
  if (ground_cap) {
    EvalOptions o = finite_eval_options(ground_cap, fuel);
    return o;
  }
  EvalOptions o;
  o.fuel = fuel;
  return o;
}

// Runs fn(0..count-1) on up to `jobs` threads; fn must only touch its slot.
void run_indexed(size_t count, unsigned jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  size_t workers = std::min<size_t>(jobs, count);
  for (size_t t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct Slot {
  int code = 0;
  std::string text;  // printed to out
  std::string errs;  // printed to err
};

// ---------------------------------------------------------------------------
// eval / trace / approx / mini
// ---------------------------------------------------------------------------

struct EvalCmd {
  std::vector<std::string> files;
  std::vector<uint64_t> args;
  OracleFlags oracles;
  FuelFlags fuel;
  unsigned ground_cap = 0;
  bool stats = false;
  unsigned jobs = 1;

  int run(std::ostream& out, std::ostream& err) const {
    OracleRegistry reg = oracles.build();
    EvalOptions opts = make_eval_options(ground_cap, fuel.build());
    std::vector<Slot> slots(files.size());
    run_indexed(files.size(), jobs, [&](size_t i) {
      Slot& s = slots[i];
      try {
        EvalResult r = evaluate(load_term(files[i], reg, args), reg, opts);
        std::ostringstream os;
        if (r.outcome.is_value())
          os << r.outcome.value << "\n";
        else
          os << r.outcome.str() << "\n";
        if (stats)
          os << "steps: " << r.steps_used << "\noracle-calls: " << r.oracle_calls_used << "\n";
        s.text = os.str();
        s.code = r.outcome.kind == OutcomeKind::fuel ? 1 : 0;
      } catch (const Error& e) {
        s.errs = std::string(e.what()) + "\n";
        s.code = 1;
      }
    });
    int rc = 0;
    for (size_t i = 0; i < slots.size(); ++i) {
      if (files.size() > 1 && !slots[i].text.empty()) out << files[i] << ": " << slots[i].text;
      else out << slots[i].text;
      if (files.size() > 1 && !slots[i].errs.empty()) err << files[i] << ": " << slots[i].errs;
      else err << slots[i].errs;
      rc = std::max(rc, slots[i].code);
    }
    return rc;
  }
};

struct TraceCmd {
  std::string file;
  std::vector<uint64_t> args;
  OracleFlags oracles;
  FuelFlags fuel;
  unsigned ground_cap = 0;
  uint64_t node_cap = 0;
  std::string out_path, dot_path;

  int run(std::ostream& out, std::ostream&) const {
    OracleRegistry reg = oracles.build();
    EvalOptions opts = make_eval_options(ground_cap, fuel.build());
    if (node_cap) opts.node_cap = node_cap;
    CompTree t = build_tree(load_term(file, reg, args), reg, opts);
    if (t.outcome.is_value() && tree_value(t) != t.outcome.value)
      fail(Errc::invariant, "tree recomputation disagrees with the recorded outcome");
    out << "outcome: " << t.outcome.str() << "\n";
    out << "nodes: " << t.node_count << "\n";
    out << "rank: " << t.rank << "\n";
    if (!out_path.empty()) spit(out_path, export_tree_text(t));
    if (!dot_path.empty()) spit(dot_path, export_tree_dot(t));
    return t.outcome.kind == OutcomeKind::fuel ? 1 : 0;
  }
};

struct ApproxCmd {
  std::string file;
  std::vector<uint64_t> args;
  OracleFlags oracles;
  FuelFlags fuel;
  unsigned ground_cap = 0;
  uint64_t call_cap = 0;
  std::string stage;  // number or "omega"
  uint64_t sweep = 0;
  uint64_t stabilize = 0;
  bool has_sweep = false, has_stabilize = false;
  bool memo = false;

  int run(std::ostream& out, std::ostream& err) const {
    int chosen = (!stage.empty() ? 1 : 0) + (has_sweep ? 1 : 0) + (has_stabilize ? 1 : 0);
    if (chosen != 1) {
      err << "approx: exactly one of --stage, --sweep, --stabilize is required\n";
      return 2;
    }
    OracleRegistry reg = oracles.build();
    ApproxOptions opts;
    opts.fuel = fuel.build();
    opts.ground_cap = ground_cap;
    opts.memo = memo;
    if (call_cap) opts.call_cap = call_cap;
    TermPtr t = load_term(file, reg, args);
    if (!stage.empty()) {
      if (stage == "omega")
        fail(Errc::limit_stage_unsupported, "only finite stages are computable here");
      char* end = nullptr;
      unsigned long long a = std::strtoull(stage.c_str(), &end, 10);
      if (end == stage.c_str() || *end != '\0')
        fail(Errc::format_error, "--stage takes a natural number or 'omega'");
      out << approx_eval(t, reg, a, opts) << "\n";
    } else if (has_sweep) {
      for (uint64_t a = 0; a <= sweep; ++a)
        out << a << ": " << approx_eval(t, reg, a, opts) << "\n";
    } else {
      out << stabilization_stage(t, reg, stabilize, opts) << "\n";
    }
    return 0;
  }
};

struct MiniCheckCmd {
  unsigned base = 2;
  unsigned max_size = 10;
  FuelFlags fuel;
  uint64_t term_cap = 0;

  int run(std::ostream& out, std::ostream&) const {
    FiniteType N = FiniteType::ground();
    FiniteType N1 = FiniteType::fun({N});
    // Fixed falsification alphabet: one total and one partial unary table.
    FinObj total_tab{N1, base, {}};
    for (unsigned i = 0; i < base; ++i)
      total_tab.vals.push_back(static_cast<int32_t>(std::min(i + 1, base - 1)));
    FinObj partial_tab{N1, base, {}};
    partial_tab.vals.assign(base, -1);
    partial_tab.vals[0] = 0;
    std::map<std::string, FinObj> tables{{"f", total_tab}, {"g", partial_tab}};

    EnumLimits lims;
    lims.max_nodes = max_size;
    lims.arg_types = {N, N1};
    lims.oracles = {{"f", N1}, {"g", N1}};
    if (term_cap) lims.term_cap = term_cap;

    uint64_t checked = 0, disagree = 0;
    std::vector<std::string> examples;
    FuelBudget budget = fuel.build();
    enumerate_closed_terms(N, lims, [&](const TermPtr& t) {
      ++checked;
      Agreement a = check_agreement(t, tables, base, budget);
      if (!a.agree) {
        ++disagree;
        if (examples.size() < 10)
          examples.push_back(print_term(t) + "  [table " +
                             (a.denoted < 0 ? std::string("undefined")
                                            : std::to_string(a.denoted)) +
                             ", run " + a.eval_out.str() +
                             (a.note.empty() ? "" : ", " + a.note) + "]");
      }
    });
    out << "checked: " << checked << "\n";
    out << "agree: " << (checked - disagree) << "\n";
    out << "disagree: " << disagree << "\n";
    for (const auto& e : examples) out << "counterexample: " << e << "\n";
    out << "result: " << (disagree == 0 ? "pass" : "fail") << "\n";
    return disagree == 0 ? 0 : 1;
  }
};

// ---------------------------------------------------------------------------
// fun: queries over .fn files
// ---------------------------------------------------------------------------

struct FunCmd {
  std::string query;
  std::string input;
  std::string at;
  std::string from = "0", to = "1";
  std::vector<std::string> points;
  long precision = 30;
  std::string lower_path, upper_path;

  Rat at_rat() const {
    if (at.empty()) fail(Errc::format_error, "query '" + query + "' needs --at");
    return Rat::parse(at);
  }

  int run(std::ostream& out, std::ostream& err) const {
    PAff f = load_fn(input);
    Rat c = Rat::parse(from), d = Rat::parse(to);
    if (query == "value") {
      out << f.value_at(at_rat()).str() << "\n";
    } else if (query == "limits") {
      SideLimits sl = side_limits(f, at_rat());
      out << "left: " << sl.left.str() << "\nvalue: " << sl.value.str()
          << "\nright: " << sl.right.str() << "\n";
    } else if (query == "variation") {
      out << variation(f, c, d).str() << "\n";
    } else if (query == "restricted") {
      std::vector<Rat> pts;
      for (const auto& s : points) pts.push_back(Rat::parse(s));
      out << restricted_variation(f, pts).str() << "\n";
    } else if (query == "sup" || query == "inf") {
      SupResult r = query == "sup" ? supremum(f, c, d) : infimum(f, c, d);
      out << "value: " << r.value.str() << "\n";
      out << "attained: " << (r.attained ? "yes" : "no") << "\n";
      out << "location: " << r.location.str() << "\n";
    } else if (query == "integral") {
      out << integrate(f, c, d).str() << "\n";
    } else if (query == "absint") {
      out << integrate_abs_derivative(f, c, d).str() << "\n";
    } else if (query == "arclen") {
      auto [lo, hi] = arc_length(f, c, d, precision);
      out << "[" << lo.str() << ", " << hi.str() << "]\n";
    } else if (query == "density") {
      auto [lo, hi] = integrate_arclen_density(f, c, d, precision);
      out << "[" << lo.str() << ", " << hi.str() << "]\n";
    } else if (query == "indicatrix") {
      Indicatrix ix = indicatrix(f);
      for (const auto& b : ix.bands)
        out << "band (" << b.lo.str() << ", " << b.hi.str() << "): " << b.count << "\n";
      for (const auto& l : ix.levels)
        out << "level " << l.y.str() << ": "
            << (l.infinite ? std::string("infinite") : std::to_string(l.count)) << "\n";
      out << "integral: " << ix.integral().str() << "\n";
    } else if (query == "envelopes") {
      auto [lo, hi] = envelopes(f);
      if (!lower_path.empty()) spit(lower_path, lo.to_json() + "\n");
      if (!upper_path.empty()) spit(upper_path, hi.to_json() + "\n");
      if (lower_path.empty() && upper_path.empty())
        out << "lower: " << lo.to_json() << "\nupper: " << hi.to_json() << "\n";
    } else if (query == "classify") {
      PointClass pc = classify_point(f, at_rat());
      out << "continuous: " << (pc.continuous ? "yes" : "no") << "\n";
      out << "removable: " << (pc.removable ? "yes" : "no") << "\n";
      out << "jump: " << (pc.jump ? "yes" : "no") << "\n";
      out << "quasi-continuous: " << (pc.quasi_continuous ? "yes" : "no") << "\n";
      out << "lower-semicontinuous: " << (pc.lower_semicontinuous ? "yes" : "no") << "\n";
      out << "upper-semicontinuous: " << (pc.upper_semicontinuous ? "yes" : "no") << "\n";
      out << "left: " << pc.left.str() << "\nvalue: " << pc.value.str()
          << "\nright: " << pc.right.str() << "\n";
    } else if (query == "props") {
      out << "continuous: " << (f.is_continuous() ? "yes" : "no") << "\n";
      out << "nondecreasing: " << (f.is_nondecreasing() ? "yes" : "no") << "\n";
      out << "strictly-increasing: " << (f.is_strictly_increasing() ? "yes" : "no") << "\n";
    } else if (query == "canon") {
      out << f.to_json() << "\n";
    } else {
      err << "fun: unknown query '" << query << "'\n";
      return 2;
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// realiser
// ---------------------------------------------------------------------------

nlohmann::json paff_json(const PAff& f) { return nlohmann::json::parse(f.to_json()); }

nlohmann::json enclosure_json(const Enclosure& e) {
  return {{"hi", e.hi.str()}, {"lo", e.lo.str()}};
}

struct RealiserCmd {
  std::string name;
  std::vector<std::string> inputs;
  std::string set_path, subset_path, set2_path;
  long precision = 30;
  uint64_t n = 0;
  std::string variant = "locate";
  std::string mode;  // ac default "ftc", enum default "search"
  std::string op = "sup";
  std::string order = "asc";
  std::string route = "plain";
  std::string bound, variation_claim;
  uint64_t stage = 1;
  uint64_t limit = 30;
  std::string at;
  std::string out_path, out_g, out_h, report_path;
  unsigned jobs = 1;

  struct Run {
    nlohmann::json payload = nlohmann::json::object();
    std::vector<std::string> summary;
    std::vector<RIv> queries;
    long precision_used = 0;
  };

  bool wants_fn_input() const {
    static const std::vector<std::string> fn_names = {
        "jordan", "discont", "fsigma", "sierpinski", "baire",
        "uscmax", "primeinj", "ac",    "pseudomono"};
    return std::find(fn_names.begin(), fn_names.end(), name) != fn_names.end() ||
           (name == "caccioppoli" && (op == "tietze" || op == "max"));
  }

  Run run_fn_realiser(const PAff& f) const {
    Run r;
    if (name == "jordan") {
      JordanRoute jr = JordanRoute::plain;
      std::optional<Rat> supplied;
      if (route == "bounded") {
        jr = JordanRoute::bounded;
        if (bound.empty()) fail(Errc::format_error, "route 'bounded' needs --bound");
        supplied = Rat::parse(bound);
      } else if (route == "exact") {
        jr = JordanRoute::exact_variation;
        if (variation_claim.empty()) fail(Errc::format_error, "route 'exact' needs --variation");
        supplied = Rat::parse(variation_claim);
      } else if (route != "plain") {
        fail(Errc::format_error, "unknown route '" + route + "'");
      }
      JordanPair jd = jordan_decompose(f, jr, supplied);
      r.payload["route"] = route;
      r.payload["variation"] = variation(f, Rat(0), Rat(1)).str();
      r.payload["g"] = paff_json(jd.g);
      r.payload["h"] = paff_json(jd.h);
      r.summary.push_back("route: " + route);
      r.summary.push_back("variation: " + variation(f, Rat(0), Rat(1)).str());
      if (!out_g.empty()) spit(out_g, jd.g.to_json() + "\n");
      if (!out_h.empty()) spit(out_h, jd.h.to_json() + "\n");
      r.summary.push_back("g: " + (out_g.empty() ? "(in report)" : out_g));
      r.summary.push_back("h: " + (out_h.empty() ? "(in report)" : out_h));
    } else if (name == "discont") {
      auto ds = discontinuity_enum(f);
      auto arr = nlohmann::json::array();
      for (const auto& d : ds) {
        arr.push_back({{"defect", d.defect.str()},
                       {"jump", d.jump.str()},
                       {"removable", d.removable},
                       {"severity", d.removable ? -1 : static_cast<int64_t>(d.severity)},
                       {"x", d.x.str()}});
        r.summary.push_back("x " + d.x.str() + ": jump " + d.jump.str() +
                            (d.removable ? ", removable"
                                         : ", severity " + std::to_string(d.severity)));
      }
      r.payload["discontinuities"] = arr;
      r.summary.push_back("count: " + std::to_string(ds.size()));
    } else if (name == "fsigma") {
      auto codes = fsigma_export(f);
      auto arr = nlohmann::json::array();
      for (const auto& [l, rr] : codes) {
        arr.push_back({{"left", window_str(l)}, {"right", window_str(rr)}});
        r.summary.push_back(window_str(l) + " " + window_str(rr));
      }
      r.payload["codes"] = arr;
      r.summary.push_back("count: " + std::to_string(codes.size()));
    } else if (name == "sierpinski") {
      SierpinskiFactor sf = sierpinski_factor(f);
      r.payload["g"] = paff_json(sf.g);
      r.payload["h"] = paff_json(sf.h);
      if (!out_g.empty()) spit(out_g, sf.g.to_json() + "\n");
      if (!out_h.empty()) spit(out_h, sf.h.to_json() + "\n");
      r.summary.push_back("g: " + (out_g.empty() ? "(in report)" : out_g));
      r.summary.push_back("h: " + (out_h.empty() ? "(in report)" : out_h));
    } else if (name == "baire") {
      PAff g = baire_stage(f, stage);
      r.payload["stage"] = stage;
      r.payload["fn"] = paff_json(g);
      if (!out_path.empty()) spit(out_path, g.to_json() + "\n");
      r.summary.push_back("stage: " + std::to_string(stage));
      r.summary.push_back("fn: " + (out_path.empty() ? "(in report)" : out_path));
    } else if (name == "uscmax") {
      Rat where = usc_max_location(f);
      Rat value = abs(f.value_at(where));
      r.payload["location"] = where.str();
      r.payload["value"] = value.str();
      r.summary.push_back("location: " + where.str());
      r.summary.push_back("value: " + value.str());
    } else if (name == "primeinj") {
      JumpLabeller lbl(f);
      auto arr = nlohmann::json::array();
      for (const auto& x : lbl.jump_points()) {
        std::string l = lbl(x).get_str();
        arr.push_back({{"label", l}, {"x", x.str()}});
        r.summary.push_back("x " + x.str() + ": label " + l);
      }
      r.payload["labels"] = arr;
      r.summary.push_back("count: " + std::to_string(lbl.jump_points().size()));
    } else if (name == "ac") {
      std::string m = mode.empty() ? "ftc" : mode;
      AcReport ar = ac_diagnostics(f, ac_mode_from_name(m));
      r.payload["mode"] = m;
      r.payload["holds"] = ar.holds;
      r.payload["gap"] = ar.gap.str();
      r.payload["gap_sign"] = ar.gap_sign;
      if (ar.witness_x) r.payload["witness_x"] = ar.witness_x->str();
      if (ar.witness_y) r.payload["witness_y"] = ar.witness_y->str();
      r.payload["detail"] = ar.detail;
      r.summary.push_back("mode: " + m);
      r.summary.push_back(std::string("holds: ") + (ar.holds ? "yes" : "no"));
      if (ar.witness_y) r.summary.push_back("witness: " + ar.witness_y->str());
      if (!ar.holds) r.summary.push_back("gap: " + ar.gap.str());
      if (!ar.detail.empty()) r.summary.push_back("detail: " + ar.detail);
    } else if (name == "pseudomono") {
      uint64_t idx = pseudo_monotone_index(f);
      r.payload["index"] = idx;
      r.summary.push_back("index: " + std::to_string(idx));
    } else {
      fail(Errc::format_error, "realiser '" + name + "' does not take a function input");
    }
    return r;
  }

  Run run_set_realiser() const {
    Run r;
    if (set_path.empty()) fail(Errc::format_error, "realiser '" + name + "' needs --set");
    LoadedSet ls = load_set(set_path);
    if (name == "omega") {
      RSetQuery q(ls.set);
      OmegaOptions opt;
      opt.precision = precision;
      opt.n = n;
      OmegaResult res = omega_family(q, omega_variant_from_name(variant), opt);
      r.precision_used = precision;
      r.queries = q.query_log();
      r.payload["variant"] = variant;
      r.summary.push_back("variant: " + variant);
      switch (res.variant) {
        case OmegaVariant::flag:
          r.payload["flag"] = res.flag;
          r.summary.push_back("flag: " + std::to_string(res.flag));
          break;
        case OmegaVariant::locate:
        case OmegaVariant::extract: {
          r.payload["sentinel"] = res.sentinel;
          if (res.sentinel) {
            r.summary.push_back("sentinel: yes");
          } else {
            r.payload["element"] = enclosure_json(res.elements.at(0));
            r.summary.push_back("element: " + enclosure_str(res.elements.at(0)));
          }
          break;
        }
        case OmegaVariant::cover:
        case OmegaVariant::cover_exact:
        case OmegaVariant::cover_at_most: {
          auto arr = nlohmann::json::array();
          for (const auto& e : res.elements) {
            arr.push_back(enclosure_json(e));
            r.summary.push_back("window: " + enclosure_str(e));
          }
          r.payload["windows"] = arr;
          r.summary.push_back("windows: " + std::to_string(res.elements.size()));
          break;
        }
        case OmegaVariant::count:
        case OmegaVariant::count_bound:
          r.payload["count"] = *res.count;
          r.summary.push_back("count: " + std::to_string(*res.count));
          break;
      }
      r.summary.push_back("queries: " + std::to_string(res.queries_used));
    } else if (name == "omegastar") {
      RSetQuery q(ls.set);
      LeastResult res = least_via_filter(q, precision);
      r.precision_used = precision;
      r.queries = q.query_log();
      r.payload["sentinel"] = res.sentinel;
      r.payload["recursive_calls"] = res.recursive_calls;
      if (res.sentinel) {
        r.summary.push_back("sentinel: yes");
      } else {
        r.payload["least"] = enclosure_json(res.least);
        r.summary.push_back("least: " + enclosure_str(res.least));
      }
      r.summary.push_back("recursive-calls: " + std::to_string(res.recursive_calls));
    } else if (name == "omegawo") {
      RSet b = ls.set;
      if (!subset_path.empty()) b = load_set(subset_path).set;
      StrictOrder before;
      if (order == "asc")
        before = [](const Rat& a, const Rat& c) { return a < c; };
      else if (order == "desc")
        before = [](const Rat& a, const Rat& c) { return a > c; };
      else
        fail(Errc::format_error, "unknown order '" + order + "'");
      WoResult res = wo_least(ls.set, b, before);
      r.payload["order"] = order;
      r.payload["sentinel"] = res.sentinel;
      r.payload["recursive_calls"] = res.recursive_calls;
      if (res.sentinel) {
        r.summary.push_back("sentinel: yes");
      } else {
        r.payload["least"] = res.least.str();
        r.summary.push_back("least: " + res.least.str());
      }
      r.summary.push_back("recursive-calls: " + std::to_string(res.recursive_calls));
    } else if (name == "enum") {
      std::string ms = mode.empty() ? "search" : mode;
      EnumMode m;
      if (ms == "search")
        m = EnumMode::by_index_search;
      else if (ms == "weak")
        m = EnumMode::weak_bijection;
      else
        fail(Errc::format_error, "unknown mode '" + ms + "'");
      auto entries = enumerate_set(ls.set, ls.index_fn(), m);
      auto arr = nlohmann::json::array();
      for (const auto& e : entries) {
        arr.push_back({{"index", e.index}, {"x", e.x.str()}});
        r.summary.push_back(std::to_string(e.index) + ": " + e.x.str());
      }
      r.payload["entries"] = arr;
      r.summary.push_back("count: " + std::to_string(entries.size()));
    } else if (name == "bw") {
      Rat s = listed_sup(ls.set, ls.index_fn());
      r.payload["sup"] = s.str();
      r.summary.push_back("sup: " + s.str());
      if (!at.empty()) {
        Rat dist = distance_to_extremes(Rat::parse(at), ls.set, ls.index_fn());
        r.payload["distance"] = dist.str();
        r.summary.push_back("distance: " + dist.str());
      }
    } else if (name == "banach") {
      auto points = enum_via_indicatrix(ls.set, ls.index_fn(),
                                        [](const PAff& g) { return indicatrix(g); }, precision);
      r.precision_used = precision;
      auto arr = nlohmann::json::array();
      for (const auto& p : points) {
        arr.push_back({{"index", p.index}, {"window", enclosure_json(p.where)}});
        r.summary.push_back(std::to_string(p.index) + ": " + enclosure_str(p.where));
      }
      r.payload["recovered"] = arr;
      r.summary.push_back("count: " + std::to_string(points.size()));
    } else if (name == "staircase") {
      // Jump weights follow listing order, so prefer the file's "points"
      // array; a plain interval set falls back to ascending order.
      std::vector<Rat> pts = ls.listed;
      if (pts.empty())
        for (const auto& iv : ls.set.intervals()) {
          if (!iv.is_point())
            fail(Errc::precondition_violated, "staircase needs a finite set of points");
          pts.push_back(iv.lo);
        }
      PAff g = staircase_from_points(pts, limit);
      r.payload["fn"] = paff_json(g);
      r.payload["points_used"] = std::min<uint64_t>(pts.size(), limit);
      if (!out_path.empty()) spit(out_path, g.to_json() + "\n");
      r.summary.push_back("points: " + std::to_string(std::min<uint64_t>(pts.size(), limit)));
      r.summary.push_back("fn: " + (out_path.empty() ? "(in report)" : out_path));
    } else if (name == "caccioppoli") {
      if (op == "sup") {
        Rat s = closed_sup(ls.set);
        r.payload["op"] = op;
        r.payload["sup"] = s.str();
        r.summary.push_back("sup: " + s.str());
      } else if (op == "code") {
        auto gaps = complement_code(ls.set);
        auto arr = nlohmann::json::array();
        for (const auto& g : gaps) {
          arr.push_back(window_str(g));
          r.summary.push_back(window_str(g));
        }
        r.payload["op"] = op;
        r.payload["complement"] = arr;
        r.summary.push_back("pieces: " + std::to_string(gaps.size()));
      } else if (op == "urysohn") {
        if (set2_path.empty()) fail(Errc::format_error, "op 'urysohn' needs --set2");
        PAff g = urysohn_separator(ls.set, load_set(set2_path).set);
        r.payload["op"] = op;
        r.payload["fn"] = paff_json(g);
        if (!out_path.empty()) spit(out_path, g.to_json() + "\n");
        r.summary.push_back("fn: " + (out_path.empty() ? "(in report)" : out_path));
      } else if (op == "tietze" || op == "max") {
        if (inputs.empty()) fail(Errc::format_error, "op '" + op + "' needs --input");
        PAff f = load_fn(inputs.front());
        r.payload["op"] = op;
        if (op == "tietze") {
          PAff g = tietze_extend(ls.set, f);
          r.payload["fn"] = paff_json(g);
          if (!out_path.empty()) spit(out_path, g.to_json() + "\n");
          r.summary.push_back("fn: " + (out_path.empty() ? "(in report)" : out_path));
        } else {
          Rat where = closed_max_abs_point(ls.set, f);
          r.payload["location"] = where.str();
          r.payload["value"] = abs(f.value_at(where)).str();
          r.summary.push_back("location: " + where.str());
          r.summary.push_back("value: " + abs(f.value_at(where)).str());
        }
      } else {
        fail(Errc::format_error, "unknown op '" + op + "'");
      }
    } else {
      fail(Errc::format_error, "realiser '" + name + "' needs a function input");
    }
    return r;
  }

  std::string digest() const {
    std::string acc = name;
    for (const auto& p : inputs) acc += '\0' + slurp(p);
    for (const std::string* p : {&set_path, &subset_path, &set2_path})
      if (!p->empty()) acc += '\0' + slurp(*p);
    return fnv1a_hex(acc);
  }

  int run(std::ostream& out, std::ostream& err) const {
    bool needs_fn = wants_fn_input();
    if (needs_fn && inputs.empty()) {
      err << "realiser " << name << ": --input required\n";
      return 2;
    }
    size_t run_count = needs_fn && name != "caccioppoli" ? inputs.size() : 1;
    if (run_count > 1 && (!report_path.empty() || !out_path.empty() || !out_g.empty() ||
                          !out_h.empty())) {
      err << "realiser: output files need a single input\n";
      return 2;
    }

    std::vector<Slot> slots(run_count);
    run_indexed(run_count, jobs, [&](size_t i) {
      Slot& s = slots[i];
      try {
        Run r = needs_fn && name != "caccioppoli"
                    ? run_fn_realiser(load_fn(inputs[i]))
                    : run_set_realiser();
        std::ostringstream os;
        for (const auto& line : r.summary) os << line << "\n";
        s.text = os.str();
        if (!report_path.empty() || report_to_stdout()) {
          RealiserReport rep;
          rep.realiser = name;
          rep.input_digest = digest();
          rep.payload = r.payload.dump(2);
          rep.query_log = r.queries;
          rep.precision = r.precision_used;
          if (report_to_stdout())
            s.text = rep.canonical_text();
          else
            spit(report_path, rep.canonical_text());
        }
      } catch (const Error& e) {
        s.errs = std::string(e.what()) + "\n";
        s.code = 1;
      }
    });
    int rc = 0;
    for (size_t i = 0; i < run_count; ++i) {
      if (run_count > 1 && !slots[i].text.empty()) out << "== " << inputs[i] << " ==\n";
      out << slots[i].text;
      if (run_count > 1 && !slots[i].errs.empty()) err << inputs[i] << ": " << slots[i].errs;
      else err << slots[i].errs;
      rc = std::max(rc, slots[i].code);
    }
    return rc;
  }

  bool report_to_stdout() const { return report_path == "-"; }
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact evaluator for typed mu-recursion and bounded-variation realisers",
               "mukleene"};
  app.require_subcommand(1);

  EvalCmd ev;
  auto* ev_cmd = app.add_subcommand("eval", "evaluate a closed term");
  ev_cmd->add_option("files", ev.files, "term files")->required()->expected(-1);
  ev_cmd->add_option("--args", ev.args, "numerals applied to the term");
  ev.oracles.add_to(ev_cmd);
  ev.fuel.add_to(ev_cmd);
  ev_cmd->add_option("--ground-cap", ev.ground_cap, "finite-base cap (0 = unbounded)");
  ev_cmd->add_flag("--stats", ev.stats, "print step and oracle-call counts");
  ev_cmd->add_option("--jobs", ev.jobs, "parallel workers for multiple files");

  TraceCmd tr;
  auto* tr_cmd = app.add_subcommand("trace", "build and export a computation tree");
  tr_cmd->add_option("file", tr.file, "term file")->required();
  tr_cmd->add_option("--args", tr.args, "numerals applied to the term");
  tr.oracles.add_to(tr_cmd);
  tr.fuel.add_to(tr_cmd);
  tr_cmd->add_option("--ground-cap", tr.ground_cap, "finite-base cap (0 = unbounded)");
  tr_cmd->add_option("--node-cap", tr.node_cap, "maximum tree nodes");
  tr_cmd->add_option("--out", tr.out_path, "write the structured text export");
  tr_cmd->add_option("--dot", tr.dot_path, "write a graph description");

  ApproxCmd ap;
  auto* ap_cmd = app.add_subcommand("approx", "stage-indexed total approximation");
  ap_cmd->add_option("file", ap.file, "term file")->required();
  ap_cmd->add_option("--args", ap.args, "numerals applied to the term");
  ap.oracles.add_to(ap_cmd);
  ap.fuel.add_to(ap_cmd);
  ap_cmd->add_option("--ground-cap", ap.ground_cap, "finite-base cap (0 = unbounded)");
  ap_cmd->add_option("--call-cap", ap.call_cap, "recursion guard");
  ap_cmd->add_option("--stage", ap.stage, "stage (a natural, or 'omega')");
  ap_cmd->add_option("--sweep", ap.sweep, "print stages 0..N");
  ap_cmd->add_option("--stabilize", ap.stabilize, "least stable stage, scanning up to N");
  ap_cmd->add_flag("--memo", ap.memo, "memoize per (term, stage)");

  MiniCheckCmd mc;
  auto* mini_cmd = app.add_subcommand("mini", "finite-base reference checks");
  auto* mc_cmd = mini_cmd->add_subcommand("check", "compare run vs table on all small terms");
  mini_cmd->require_subcommand(1);
  mc_cmd->add_option("--base", mc.base, "finite base size")->check(CLI::Range(2u, 4u));
  mc_cmd->add_option("--max-size", mc.max_size, "maximum term nodes");
  mc_cmd->add_option("--term-cap", mc.term_cap, "abort past this many terms");
  mc.fuel.add_to(mc_cmd);

  FunCmd fu;
  auto* fu_cmd = app.add_subcommand("fun", "query a piecewise-affine function file");
  fu_cmd->add_option("query", fu.query, "one of: value limits variation restricted sup inf "
                                        "integral absint arclen density indicatrix envelopes "
                                        "classify props canon")
      ->required();
  fu_cmd->add_option("--input", fu.input, "function file")->required();
  fu_cmd->add_option("--at", fu.at, "evaluation point");
  fu_cmd->add_option("--from", fu.from, "window start (default 0)");
  fu_cmd->add_option("--to", fu.to, "window end (default 1)");
  fu_cmd->add_option("--points", fu.points, "partition points for 'restricted'");
  fu_cmd->add_option("--precision", fu.precision, "enclosure width exponent");
  fu_cmd->add_option("--lower", fu.lower_path, "lower envelope output file");
  fu_cmd->add_option("--upper", fu.upper_path, "upper envelope output file");

  RealiserCmd re;
  auto* re_cmd = app.add_subcommand("realiser", "run a decomposition or locator");
  re_cmd->add_option("name", re.name, "realiser name")
      ->required()
      ->check(CLI::IsMember({"jordan", "discont", "fsigma", "staircase", "sierpinski",
                             "banach", "baire", "uscmax", "primeinj", "ac", "pseudomono",
                             "caccioppoli", "omega", "omegastar", "omegawo", "enum", "bw"}));
  re_cmd->add_option("--input", re.inputs, "function file(s)");
  re_cmd->add_option("--set", re.set_path, "set file");
  re_cmd->add_option("--subset", re.subset_path, "subset file (omegawo)");
  re_cmd->add_option("--set2", re.set2_path, "second set file (urysohn)");
  re_cmd->add_option("--precision", re.precision, "location width exponent");
  re_cmd->add_option("--n", re.n, "cardinality parameter for cover variants");
  re_cmd->add_option("--variant", re.variant, "omega variant");
  re_cmd->add_option("--mode", re.mode, "ac mode, or enum mode (search | weak)");
  re_cmd->add_option("--op", re.op, "caccioppoli op (sup code urysohn tietze max)");
  re_cmd->add_option("--order", re.order, "omegawo order (asc | desc)");
  re_cmd->add_option("--route", re.route, "jordan route (plain bounded exact)");
  re_cmd->add_option("--bound", re.bound, "claimed variation bound (route bounded)");
  re_cmd->add_option("--variation", re.variation_claim, "claimed variation (route exact)");
  re_cmd->add_option("--stage", re.stage, "baire stage");
  re_cmd->add_option("--limit", re.limit, "staircase point limit");
  re_cmd->add_option("--at", re.at, "reference point (bw distance)");
  re_cmd->add_option("--out", re.out_path, "function output file");
  re_cmd->add_option("--out-g", re.out_g, "first factor output file");
  re_cmd->add_option("--out-h", re.out_h, "second factor output file");
  re_cmd->add_option("--report", re.report_path, "report output file ('-' = stdout)");
  re_cmd->add_option("--jobs", re.jobs, "parallel workers for multiple inputs");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (ev_cmd->parsed()) return ev.run(out, err);
    if (tr_cmd->parsed()) return tr.run(out, err);
    if (ap_cmd->parsed()) {
      ap.has_sweep = ap_cmd->count("--sweep") > 0;
      ap.has_stabilize = ap_cmd->count("--stabilize") > 0;
      return ap.run(out, err);
    }
    if (mini_cmd->parsed()) return mc.run(out, err);
    if (fu_cmd->parsed()) return fu.run(out, err);
    if (re_cmd->parsed()) return re.run(out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 2;
}

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, out, err);
}

}  // namespace mukleene::cli

#include "mukleene/tree.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "mukleene/errors.hpp"

namespace mukleene {

namespace {

const char* kKindNames[] = {"leaf_zero", "suc",    "pred",     "case",  "oracle_app",
                            "lam_app",   "mu_app", "host_app", "query"};

// Percent-encoding for free-text fields stored in the tab-separated format.
std::string pct_encode(const std::string& s) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : s) {
    if (c == '%' || c == '\t' || c == '\n' || c == '\r') {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string pct_decode(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%') {
      if (i + 2 >= s.size()) fail(Errc::format_error, "truncated escape in tree file");
      int hi = hex_digit(s[i + 1]), lo = hex_digit(s[i + 2]);
      if (hi < 0 || lo < 0) fail(Errc::format_error, "bad escape in tree file");
      out += static_cast<char>(hi * 16 + lo);
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

uint64_t parse_u64(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    fail(Errc::format_error, std::string("bad ") + what + " in tree file: " + s);
  return std::stoull(s);
}

// Recomputes the value of a recorded node from its children, checking the
// recorded intermediate answers along the way.  Oracle answers and host
// callback results cannot be recomputed without the original callbacks, so
// their recorded values stand once their recorded queries check out.
std::optional<uint64_t> recompute(const CompNode& n, unsigned cap) {
  auto child_val = [&](size_t i) { return recompute(*n.children[i], cap); };
  auto verify_queries = [&]() {
    for (const auto& c : n.children) {
      if (c->kind != NodeKind::query) continue;
      auto v = recompute(*c, cap);
      if (c->value && (!v || *v != *c->value))
        fail(Errc::invariant, "query child disagrees with its recorded answer");
    }
  };
  switch (n.kind) {
    case NodeKind::leaf_zero:
      return 0;
    case NodeKind::suc: {
      if (n.children.empty()) return std::nullopt;
      auto v = child_val(0);
      if (!v) return std::nullopt;
      if (cap > 0 && *v + 1 >= cap) return cap - 1;
      return *v + 1;
    }
    case NodeKind::pred: {
      if (n.children.empty()) return std::nullopt;
      auto v = child_val(0);
      if (!v) return std::nullopt;
      return *v == 0 ? 0 : *v - 1;
    }
    case NodeKind::kase: {
      if (n.children.empty()) return std::nullopt;
      auto s = child_val(0);
      if (!s) return std::nullopt;
      if (n.params.empty() || std::to_string(*s) != n.params[0])
        fail(Errc::invariant, "case node disagrees with its recorded scrutinee");
      if (n.children.size() < 2) return std::nullopt;
      return child_val(1);
    }
    case NodeKind::lam_app:
    case NodeKind::mu_app:
    case NodeKind::query: {
      verify_queries();
      // The continuation is the last child; earlier children are strict
      // argument evaluations or totality-probe queries.
      for (size_t i = n.children.size(); i-- > 0;) {
        if (n.children[i]->kind == NodeKind::query) continue;
        return recompute(*n.children[i], cap);
      }
      return std::nullopt;
    }
    case NodeKind::host_app: {
      for (const auto& c : n.children)
        if (!recompute(*c, cap)) return std::nullopt;
      return n.value;
    }
    case NodeKind::oracle_app: {
      verify_queries();
      size_t pi = 1;  // params[0] is the oracle id
      for (const auto& c : n.children) {
        if (c->kind == NodeKind::query) continue;
        auto v = recompute(*c, cap);
        if (!v) return std::nullopt;
        if (pi >= n.params.size() || std::to_string(*v) != n.params[pi])
          fail(Errc::invariant, "oracle node disagrees with a recorded ground argument");
        ++pi;
      }
      return n.value;
    }
  }
  return std::nullopt;
}

void export_node(const CompNode& n, unsigned depth, std::ostream& out) {
  out << depth << '\t' << node_kind_name(n.kind) << '\t' << n.code.hex() << '\t';
  if (n.value)
    out << *n.value;
  else
    out << '-';
  for (const auto& p : n.params) out << '\t' << pct_encode(p);
  out << '\n';
  for (const auto& c : n.children) export_node(*c, depth + 1, out);
}

uint64_t count_nodes(const CompNode& n) {
  uint64_t c = 1;
  for (const auto& ch : n.children) c += count_nodes(*ch);
  return c;
}

void dot_node(const CompNode& n, uint64_t& next_id, uint64_t my_id, std::ostream& out) {
  std::string label = node_kind_name(n.kind);
  if (!n.params.empty()) label += " " + n.params[0];
  if (n.value) label += " = " + std::to_string(*n.value);
  std::string esc;
  for (char c : label) {
    if (c == '"' || c == '\\') esc += '\\';
    esc += c;
  }
  out << "  n" << my_id << " [label=\"" << esc << "\"];\n";
  for (const auto& c : n.children) {
    uint64_t cid = ++next_id;
    out << "  n" << my_id << " -> n" << cid << ";\n";
    dot_node(*c, next_id, cid, out);
  }
}

}  // namespace

const char* node_kind_name(NodeKind k) { return kKindNames[static_cast<int>(k)]; }

NodeKind node_kind_from_name(const std::string& name) {
  for (int i = 0; i < 9; ++i)
    if (name == kKindNames[i]) return static_cast<NodeKind>(i);
  fail(Errc::format_error, "unknown tree node kind: " + name);
}

uint64_t node_height(const CompNode& n) {
  uint64_t h = 0;
  for (const auto& c : n.children) h = std::max(h, node_height(*c));
  return h + 1;
}

uint64_t tree_value(const CompTree& tree) {
  if (!tree.root) fail(Errc::valueless_tree, "tree has no root");
  auto v = recompute(*tree.root, tree.ground_cap);
  if (!v) fail(Errc::valueless_tree, "tree is missing a required value");
  if (tree.root->value && *tree.root->value != *v)
    fail(Errc::invariant, "root value disagrees with bottom-up recomputation");
  return *v;
}

std::string export_tree_text(const CompTree& tree) {
  std::ostringstream out;
  out << "ctree\t1\t" << tree.ground_cap << '\t' << tree.node_count << '\t' << tree.rank << '\t';
  switch (tree.outcome.kind) {
    case OutcomeKind::value:
      out << "value\t" << tree.outcome.value;
      break;
    case OutcomeKind::bottom:
      out << "bottom\t" << pct_encode(tree.outcome.detail);
      break;
    case OutcomeKind::fuel:
      out << "fuel\t" << pct_encode(tree.outcome.detail);
      break;
  }
  out << '\n';
  if (tree.root) export_node(*tree.root, 0, out);
  return out.str();
}

CompTree import_tree_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::format_error, "empty tree file");
  auto hdr = split_tabs(line);
  if (hdr.size() != 7 || hdr[0] != "ctree" || hdr[1] != "1")
    fail(Errc::format_error, "bad tree file header");
  CompTree tree;
  tree.ground_cap = static_cast<unsigned>(parse_u64(hdr[2], "ground cap"));
  uint64_t declared_nodes = parse_u64(hdr[3], "node count");
  uint64_t declared_rank = parse_u64(hdr[4], "rank");
  if (hdr[5] == "value")
    tree.outcome = EvalOutcome::val(parse_u64(hdr[6], "outcome value"));
  else if (hdr[5] == "bottom")
    tree.outcome = EvalOutcome::bottom(pct_decode(hdr[6]));
  else if (hdr[5] == "fuel")
    tree.outcome = EvalOutcome::fuel(pct_decode(hdr[6]));
  else
    fail(Errc::format_error, "bad outcome kind in tree file: " + hdr[5]);

  std::vector<CompNode*> stack;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() < 4) fail(Errc::format_error, "short node line in tree file");
    auto depth = static_cast<size_t>(parse_u64(f[0], "depth"));
    auto n = std::make_unique<CompNode>();
    n->kind = node_kind_from_name(f[1]);
    n->code = GodelCode::from_hex(f[2]);
    if (f[3] != "-") n->value = parse_u64(f[3], "node value");
    for (size_t i = 4; i < f.size(); ++i) n->params.push_back(pct_decode(f[i]));
    CompNode* raw = n.get();
    if (depth == 0) {
      if (tree.root) fail(Errc::format_error, "tree file has two roots");
      tree.root = std::move(n);
    } else {
      if (depth > stack.size()) fail(Errc::format_error, "tree file skips a depth level");
      stack.resize(depth);
      stack.back()->children.push_back(std::move(n));
    }
    stack.resize(depth);
    stack.push_back(raw);
  }
  if (!tree.root) fail(Errc::format_error, "tree file has no nodes");
  tree.node_count = count_nodes(*tree.root);
  tree.rank = node_height(*tree.root);
  if (tree.node_count != declared_nodes || tree.rank != declared_rank)
    fail(Errc::format_error, "tree file header disagrees with its nodes");
  return tree;
}

std::string export_tree_dot(const CompTree& tree) {
  std::ostringstream out;
  out << "digraph ctree {\n  node [shape=box, fontname=\"monospace\"];\n";
  if (tree.root) {
    uint64_t next_id = 0;
    dot_node(*tree.root, next_id, 0, out);
  }
  out << "}\n";
  return out.str();
}

}  // namespace mukleene

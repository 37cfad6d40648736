#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mukleene/eval.hpp"
#include "mukleene/godel.hpp"

namespace mukleene {

// One node per spine reduction, in evaluation order. query nodes hang off
// oracle_app (and, at a finite base, lam_app) nodes and carry the query
// arguments in params; their subtree evaluates the queried application.
enum class NodeKind : uint8_t {
  leaf_zero,
  suc,
  pred,
  kase,
  oracle_app,
  lam_app,
  mu_app,
  host_app,
  query,
};

const char* node_kind_name(NodeKind k);
NodeKind node_kind_from_name(const std::string& s);

struct CompNode {
  NodeKind kind = NodeKind::leaf_zero;
  GodelCode code;                    // code of this node's term
  std::vector<std::string> params;   // naturals, handle ids, recorded answers
  std::optional<uint64_t> value;
  std::vector<std::unique_ptr<CompNode>> children;
};

struct CompTree {
  std::unique_ptr<CompNode> root;
  uint64_t node_count = 0;
  uint64_t rank = 0;  // height; a single node has rank 1
  EvalOutcome outcome;
  unsigned ground_cap = 0;
};

// Same engine and fuel accounting as evaluate; only the demanded branches
// appear (oracle query subtrees are tagged with their arguments). Throws
// NodeCapExceeded when opts.node_cap would be passed.
CompTree build_tree(const TermPtr& t, const OracleRegistry& reg, const EvalOptions& opts = {});

uint64_t node_height(const CompNode& n);

// Recomputes the value bottom-up, checking recorded per-node answers on the
// way; throws ValuelessTree when the tree carries no value.
uint64_t tree_value(const CompTree& t);

// Lossless line-per-node text form: depth, kind, code hex, params, value.
std::string export_tree_text(const CompTree& t);
CompTree import_tree_text(const std::string& text);

// Graph description (dot digraph); one-way.
std::string export_tree_dot(const CompTree& t);

}  // namespace mukleene

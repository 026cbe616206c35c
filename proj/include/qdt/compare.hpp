#pragma once

// Q_tree = B_eq / B: the fraction of reference-tree nodes the candidate tree
// reproduces. B counts all reference nodes. Matching runs as a simultaneous
// pre-order walk from the roots; a pair is matched when kind, attribute, and
// test payload agree (thresholds compared exactly as serialized), and the
// walk descends only through matched parents along coinciding edge labels.
// Reference subtrees below a mismatch count toward B but never toward B_eq.

#include <string>
#include <vector>

#include "qdt/tree_io.hpp"
#include "qdt/util.hpp"

namespace qdt {

struct Mismatch {
  std::string path;  // "/" + edge labels from the root
  std::string reason;
};

struct ComparisonReport {
  int total_nodes = 0;    // B: reference tree node count
  int matched_nodes = 0;  // B_eq
  double q = 0.0;
  std::vector<Mismatch> mismatches;
};

inline bool node_equal(const PortableNode& a, const PortableNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == PortableNode::Kind::leaf) return a.label == b.label;
  return a.attr == b.attr && a.payload == b.payload;
}

namespace detail {

inline std::string node_signature(const PortableNode& node) {
  switch (node.kind) {
    case PortableNode::Kind::leaf:
      return "leaf " + node.label;
    case PortableNode::Kind::multiway:
      return "multiway " + node.attr;
    case PortableNode::Kind::threshold:
      return "threshold " + node.attr + " " + node.payload;
    default:
      return "partition " + node.attr + " " + node.payload;
  }
}

inline int count_portable(const TreeDocument& doc, int id) {
  int n = 1;
  for (const auto& [edge, child] : doc.nodes[id].children) n += count_portable(doc, child);
  return n;
}

inline void compare_walk(const TreeDocument& ref_doc, int ref_id, const TreeDocument& cand_doc,
                         int cand_id, const std::string& path, ComparisonReport& report) {
  const PortableNode& ref = ref_doc.nodes[ref_id];
  const PortableNode& cand = cand_doc.nodes[cand_id];
  ++report.total_nodes;
  if (!node_equal(ref, cand)) {
    report.total_nodes += count_portable(ref_doc, ref_id) - 1;
    report.mismatches.push_back(
        {path.empty() ? "/" : path,
         node_signature(ref) + " vs " + node_signature(cand)});
    return;
  }
  ++report.matched_nodes;
  for (const auto& [edge, ref_child] : ref.children) {
    int cand_child = -1;
    for (const auto& [cand_edge, c] : cand.children)
      if (cand_edge == edge) {
        cand_child = c;
        break;
      }
    if (cand_child < 0) {
      // Same attribute and payload imply the same edge set; an absent edge
      // means the trees come from different schemas.
      report.total_nodes += count_portable(ref_doc, ref_child);
      report.mismatches.push_back({path + "/" + edge, "edge missing in candidate"});
      continue;
    }
    compare_walk(ref_doc, ref_child, cand_doc, cand_child, path + "/" + edge, report);
  }
}

}  // namespace detail

inline ComparisonReport q_tree(const TreeDocument& reference, const TreeDocument& candidate) {
  const std::string* ref_digest = reference.field("schema_digest");
  const std::string* cand_digest = candidate.field("schema_digest");
  if (!ref_digest || !cand_digest || *ref_digest != *cand_digest)
    throw ParseError("q_tree: trees come from different schemas");
  ComparisonReport report;
  detail::compare_walk(reference, 0, candidate, 0, "", report);
  report.q = static_cast<double>(report.matched_nodes) / report.total_nodes;
  return report;
}

/// Convenience overload for in-memory trees: compares through the canonical
/// serialized form, which is the payload-equality rule the file path uses.
inline ComparisonReport q_tree(const TreeNode& reference, const TreeNode& candidate,
                               const Schema& schema) {
  TreeMetadata meta;
  const TreeDocument ref_doc = parse_tree(serialize_tree(reference, schema, meta));
  const TreeDocument cand_doc = parse_tree(serialize_tree(candidate, schema, meta));
  return q_tree(ref_doc, cand_doc);
}

inline std::string format_report(const ComparisonReport& report) {
  char q_text[32];
  std::snprintf(q_text, sizeof q_text, "%.6f", report.q);
  std::string out;
  out += "B " + std::to_string(report.total_nodes) + "\n";
  out += "B_eq " + std::to_string(report.matched_nodes) + "\n";
  out += "q " + std::string(q_text) + "\n";
  for (const auto& m : report.mismatches) out += "mismatch " + m.path + " : " + m.reason + "\n";
  return out;
}

}  // namespace qdt

#pragma once

// Canonical tree file format (UTF-8 text, LF line endings):
//
//   qdtree v1
//   dataset <name>
//   schema_digest <16 hex digits>
//   height <h>
//   split_mode multiway|binary
//   backend exhaustive|qaoa
//   p <levels>              (qaoa only)
//   shots <count>           (qaoa only)
//   seed <u64>              (qaoa only)
//   rng mt19937_64          (qaoa only)
//   calibration ramp_grid <resolution> | fixed   (qaoa only)
//   gammas <g1> <g2> ...    (qaoa only, %.17g)
//   betas <b1> <b2> ...     (qaoa only, %.17g)
//   nodes <count>
//   ---
//   <one record per node, pre-order, id = record position>
//
// Node records:
//   <id> leaf <class-label>
//   <id> split <attr> multiway <edge-label>=<child-id> ...   (domain order)
//   <id> split <attr> threshold <%.17g> lt=<child-id> ge=<child-id>
//   <id> split <attr> partition <lbl>,<lbl>,... in=<child-id> out=<child-id>
//
// Partition labels are the d1 categories in domain order. Identical trees
// serialize to identical bytes; thresholds round-trip exactly.

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qdt/dataset.hpp"
#include "qdt/tree.hpp"
#include "qdt/util.hpp"

namespace qdt {

struct TreeMetadata {
  std::string dataset_name = "unnamed";
  int height = 0;
  SplitMode split_mode = SplitMode::paper_multiway;
  bool qaoa = false;
  QaoaConfig config;     // qaoa only
  QaoaAngles angles;     // qaoa only: the angles actually used
};

inline TreeMetadata make_metadata(const std::string& dataset_name, const GrowParams& params,
                                  const GrownTree& tree) {
  TreeMetadata meta;
  meta.dataset_name = dataset_name;
  meta.height = params.max_height;
  meta.split_mode = params.split_mode;
  if (const auto* qaoa = std::get_if<QaoaBackend>(&params.backend)) {
    meta.qaoa = true;
    meta.config = qaoa->config;
    if (tree.angles) meta.angles = *tree.angles;
  }
  return meta;
}

namespace detail {

inline void serialize_node(const TreeNode& node, const Schema& schema, int& next_id,
                           std::ostringstream& out) {
  const int id = next_id++;
  if (node.is_leaf()) {
    out << id << " leaf " << schema.class_labels[std::get<TreeNode::Leaf>(node.test).label]
        << '\n';
    return;
  }
  // Children occupy consecutive pre-order id blocks; compute each child's id
  // before descending.
  std::vector<int> child_ids(node.children.size());
  int cursor = id + 1;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    child_ids[i] = cursor;
    cursor += count_nodes(*node.children[i]);
  }
  if (const auto* multi = std::get_if<TreeNode::Multiway>(&node.test)) {
    const auto& spec = schema.attributes[multi->attr];
    out << id << " split " << spec.name << " multiway";
    for (std::size_t v = 0; v < node.children.size(); ++v)
      out << ' ' << spec.categories[v] << '=' << child_ids[v];
    out << '\n';
  } else if (const auto* th = std::get_if<TreeNode::Threshold>(&node.test)) {
    out << id << " split " << schema.attributes[th->attr].name << " threshold "
        << format_g17(th->value) << " lt=" << child_ids[0] << " ge=" << child_ids[1] << '\n';
  } else {
    const auto& part = std::get<TreeNode::BinaryPartition>(node.test);
    const auto& spec = schema.attributes[part.attr];
    out << id << " split " << spec.name << " partition ";
    bool first = true;
    for (int v = 0; v < spec.num_values(); ++v) {
      if (!((part.mask >> v) & 1u)) continue;
      if (!first) out << ',';
      out << spec.categories[v];
      first = false;
    }
    out << " in=" << child_ids[0] << " out=" << child_ids[1] << '\n';
  }
  for (const auto& child : node.children) serialize_node(*child, schema, next_id, out);
}

}  // namespace detail

inline std::string serialize_tree(const TreeNode& root, const Schema& schema,
                                  const TreeMetadata& meta) {
  std::ostringstream out;
  out << "qdtree v1\n";
  out << "dataset " << meta.dataset_name << '\n';
  out << "schema_digest " << schema_digest(schema) << '\n';
  out << "height " << meta.height << '\n';
  out << "split_mode "
      << (meta.split_mode == SplitMode::paper_multiway ? "multiway" : "binary") << '\n';
  out << "backend " << (meta.qaoa ? "qaoa" : "exhaustive") << '\n';
  if (meta.qaoa) {
    out << "p " << meta.config.levels << '\n';
    out << "shots " << meta.config.shots << '\n';
    out << "seed " << meta.config.seed << '\n';
    out << "rng " << kSampleRngName << '\n';
    if (const auto* grid = std::get_if<RampGrid>(&meta.config.calibration))
      out << "calibration ramp_grid " << grid->resolution << '\n';
    else
      out << "calibration fixed\n";
    out << "gammas";
    for (double g : meta.angles.gammas) out << ' ' << detail::format_g17(g);
    out << '\n';
    out << "betas";
    for (double b : meta.angles.betas) out << ' ' << detail::format_g17(b);
    out << '\n';
  }
  out << "nodes " << count_nodes(root) << '\n';
  out << "---\n";
  int next_id = 0;
  detail::serialize_node(root, schema, next_id, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Portable (schema-free) form: what a tree file parses into. Node payloads
// stay as the serialized strings, so comparisons see exactly what was
// written.

struct PortableNode {
  enum class Kind { leaf, multiway, threshold, partition };
  Kind kind = Kind::leaf;
  std::string attr;     // split nodes
  std::string payload;  // threshold digits or partition label list
  std::string label;    // leaf class label
  std::vector<std::pair<std::string, int>> children;  // (edge label, node id)
};

struct TreeDocument {
  std::vector<std::pair<std::string, std::string>> header;  // key, rest-of-line
  std::vector<PortableNode> nodes;                          // id-indexed; root = 0

  const std::string* field(const std::string& key) const {
    for (const auto& [k, v] : header)
      if (k == key) return &v;
    return nullptr;
  }
  int node_count() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

[[noreturn]] inline void tree_fail(int line, const std::string& msg) {
  throw ParseError("tree file line " + std::to_string(line) + ": " + msg);
}

inline int parse_child_id(std::string_view token, int line, int node_count) {
  int id = -1;
  auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
  if (ec != std::errc{} || p != token.data() + token.size() || id < 0 || id >= node_count)
    tree_fail(line, "bad child id '" + std::string(token) + "'");
  return id;
}

/// Splits "edge=id" at the last '='.
inline std::pair<std::string_view, std::string_view> split_edge(std::string_view token,
                                                                int line) {
  const auto pos = token.rfind('=');
  if (pos == std::string_view::npos || pos == 0 || pos + 1 == token.size())
    tree_fail(line, "expected <edge>=<id>, got '" + std::string(token) + "'");
  return {token.substr(0, pos), token.substr(pos + 1)};
}

}  // namespace detail

inline TreeDocument parse_tree(const std::string& text) {
  TreeDocument doc;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw ParseError("tree file is empty");
  ++line_no;
  if (line != "qdtree v1") detail::tree_fail(line_no, "bad magic, expected 'qdtree v1'");

  int declared_nodes = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line == "---") break;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0)
      detail::tree_fail(line_no, "bad header line '" + line + "'");
    std::string key = line.substr(0, space);
    std::string value = line.substr(space + 1);
    if (key == "nodes") {
      declared_nodes = std::stoi(value);
      if (declared_nodes < 1) detail::tree_fail(line_no, "node count must be >= 1");
    }
    doc.header.emplace_back(std::move(key), std::move(value));
  }
  if (declared_nodes < 0) throw ParseError("tree file: missing 'nodes' header");
  doc.nodes.resize(declared_nodes);

  int next_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tokens = detail::split_ws(line);
    if (tokens.size() < 3) detail::tree_fail(line_no, "truncated node record");
    int id = -1;
    {
      auto t = tokens[0];
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), id);
      if (ec != std::errc{} || p != t.data() + t.size())
        detail::tree_fail(line_no, "bad node id '" + std::string(t) + "'");
    }
    if (id != next_id)
      detail::tree_fail(line_no, "node ids must be the pre-order record positions");
    if (id >= declared_nodes) detail::tree_fail(line_no, "more nodes than declared");
    ++next_id;
    PortableNode& node = doc.nodes[id];
    if (tokens[1] == "leaf") {
      node.kind = PortableNode::Kind::leaf;
      node.label = std::string(tokens[2]);
    } else if (tokens[1] == "split") {
      node.attr = std::string(tokens[2]);
      if (tokens.size() < 5) detail::tree_fail(line_no, "truncated split record");
      const auto test = tokens[3];
      std::size_t edges_from = 4;
      if (test == "multiway") {
        node.kind = PortableNode::Kind::multiway;
      } else if (test == "threshold") {
        node.kind = PortableNode::Kind::threshold;
        node.payload = std::string(tokens[4]);
        edges_from = 5;
      } else if (test == "partition") {
        node.kind = PortableNode::Kind::partition;
        node.payload = std::string(tokens[4]);
        edges_from = 5;
      } else {
        detail::tree_fail(line_no, "unknown test kind '" + std::string(test) + "'");
      }
      if (edges_from >= tokens.size()) detail::tree_fail(line_no, "split node has no children");
      for (std::size_t i = edges_from; i < tokens.size(); ++i) {
        auto [edge, id_text] = detail::split_edge(tokens[i], line_no);
        node.children.emplace_back(std::string(edge),
                                   detail::parse_child_id(id_text, line_no, declared_nodes));
      }
    } else {
      detail::tree_fail(line_no, "unknown node kind '" + std::string(tokens[1]) + "'");
    }
  }
  if (next_id != declared_nodes)
    throw ParseError("tree file: expected " + std::to_string(declared_nodes) +
                     " node records, found " + std::to_string(next_id));

  // Every non-root node must be referenced exactly once.
  std::vector<int> referenced(declared_nodes, 0);
  for (const auto& node : doc.nodes)
    for (const auto& [edge, child] : node.children) ++referenced[child];
  if (referenced[0] != 0) throw ParseError("tree file: root node is referenced as a child");
  for (int id = 1; id < declared_nodes; ++id)
    if (referenced[id] != 1)
      throw ParseError("tree file: node " + std::to_string(id) +
                       " referenced " + std::to_string(referenced[id]) + " times");
  return doc;
}

/// Rebuilds an executable tree from a parsed document against a schema. The
/// document's schema digest must match.
inline TreeNodePtr bind_tree(const TreeDocument& doc, const Schema& schema) {
  const std::string* digest = doc.field("schema_digest");
  if (!digest || *digest != schema_digest(schema))
    throw ParseError("tree/schema mismatch: schema digest differs");

  auto find_attr = [&](const std::string& name) {
    for (int a = 0; a < schema.num_attributes(); ++a)
      if (schema.attributes[a].name == name) return a;
    throw ParseError("tree references unknown attribute '" + name + "'");
  };
  auto find_label = [](const std::vector<std::string>& labels, const std::string& text,
                       const char* what) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == text) return static_cast<int>(i);
    throw ParseError(std::string("tree references unknown ") + what + " '" + text + "'");
  };

  auto build = [&](auto&& self, int id) -> TreeNodePtr {
    const PortableNode& pn = doc.nodes[id];
    auto node = std::make_unique<TreeNode>();
    if (pn.kind == PortableNode::Kind::leaf) {
      node->test = TreeNode::Leaf{find_label(schema.class_labels, pn.label, "class label")};
      return node;
    }
    const int attr = find_attr(pn.attr);
    const auto& spec = schema.attributes[attr];
    if (pn.kind == PortableNode::Kind::multiway) {
      if (spec.kind != AttrKind::categorical ||
          static_cast<int>(pn.children.size()) != spec.num_values())
        throw ParseError("multiway node on '" + pn.attr + "' does not cover the domain");
      node->test = TreeNode::Multiway{attr};
      node->children.resize(spec.num_values());
      for (const auto& [edge, child] : pn.children) {
        const int v = find_label(spec.categories, edge, "category");
        if (node->children[v])
          throw ParseError("multiway node on '" + pn.attr + "' repeats edge '" + edge + "'");
        node->children[v] = self(self, child);
      }
      for (const auto& child : node->children)
        if (!child)
          throw ParseError("multiway node on '" + pn.attr + "' does not cover the domain");
    } else if (pn.kind == PortableNode::Kind::threshold) {
      double threshold = 0;
      auto [p, ec] = std::from_chars(pn.payload.data(), pn.payload.data() + pn.payload.size(),
                                     threshold);
      if (ec != std::errc{} || p != pn.payload.data() + pn.payload.size())
        throw ParseError("bad threshold '" + pn.payload + "'");
      node->test = TreeNode::Threshold{attr, threshold};
      node->children.resize(2);
      for (const auto& [edge, child] : pn.children) {
        if (edge == "lt")
          node->children[0] = self(self, child);
        else if (edge == "ge")
          node->children[1] = self(self, child);
        else
          throw ParseError("bad threshold edge '" + edge + "'");
      }
      if (!node->children[0] || !node->children[1])
        throw ParseError("threshold node on '" + pn.attr + "' lacks lt/ge children");
    } else {
      std::uint32_t mask = 0;
      for (auto label : detail::split_char(pn.payload, ','))
        mask |= 1u << find_label(spec.categories, std::string(label), "category");
      node->test = TreeNode::BinaryPartition{attr, mask};
      node->children.resize(2);
      for (const auto& [edge, child] : pn.children) {
        if (edge == "in")
          node->children[0] = self(self, child);
        else if (edge == "out")
          node->children[1] = self(self, child);
        else
          throw ParseError("bad partition edge '" + edge + "'");
      }
      if (!node->children[0] || !node->children[1])
        throw ParseError("partition node on '" + pn.attr + "' lacks in/out children");
    }
    return node;
  };
  return build(build, 0);
}

}  // namespace qdt

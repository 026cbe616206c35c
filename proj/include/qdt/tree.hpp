#pragma once

// Decision-tree growing with a pluggable categorical-partition backend.
//
// Growth recursion: a node becomes a leaf when its view is empty (label =
// parent majority), pure, or at max height, or when no attribute scores
// above zero. Otherwise the best-scoring attribute splits the view:
// categorical winners split multiway (one child per domain value, including
// values absent from the view) unless binary-partition mode is selected;
// real winners split on a threshold into (<, >=) children.
//
// Every QAOA invocation derives its sub-seed from (master seed, node path,
// attribute index), so serial and parallel builds produce identical trees.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "qdt/criterion.hpp"
#include "qdt/dataset.hpp"
#include "qdt/qaoa.hpp"

namespace qdt {

struct ExhaustiveBackend {};
struct QaoaBackend {
  QaoaConfig config;
};
using Backend = std::variant<ExhaustiveBackend, QaoaBackend>;

enum class SplitMode { paper_multiway, binary_partition };

struct GrowParams {
  int max_height = 3;  // h: no node sits deeper than h edges from the root
  Backend backend = ExhaustiveBackend{};
  SplitMode split_mode = SplitMode::paper_multiway;
  int jobs = 1;
};

struct TreeNode;
using TreeNodePtr = std::unique_ptr<TreeNode>;

struct TreeNode {
  struct Leaf {
    int label;
  };
  struct Multiway {
    int attr;  // children in domain order, one per category
  };
  struct Threshold {
    int attr;
    double value;  // children ordered (<, >=)
  };
  struct BinaryPartition {
    int attr;
    std::uint32_t mask;  // children ordered (in d1, in d2)
  };
  std::variant<Leaf, Multiway, Threshold, BinaryPartition> test;
  std::vector<TreeNodePtr> children;

  bool is_leaf() const { return std::holds_alternative<Leaf>(test); }
};

inline int count_nodes(const TreeNode& node) {
  int n = 1;
  for (const auto& child : node.children) n += count_nodes(*child);
  return n;
}

inline bool stop_criterion(const SubsetView& view, int depth, const GrowParams& params) {
  if (view.empty()) return true;
  if (depth >= params.max_height) return true;
  const auto& classes = view.data->classes;
  const std::int32_t first = classes[view.rows[0]];
  for (std::uint32_t row : view.rows)
    if (classes[row] != first) return false;
  return true;
}

/// Best threshold split for a real attribute: candidates are midpoints of
/// consecutive distinct values; one ascending sweep maintains both class
/// histograms. Ties keep the smallest threshold. Fewer than two distinct
/// values means no split.
inline SplitScore process_real(const SubsetView& view, int attr) {
  const auto& spec = view.data->schema.attributes[attr];
  if (spec.kind != AttrKind::real)
    throw std::invalid_argument("process_real: attribute is not real-valued");
  const auto& column = view.data->real_column(attr);
  const auto& classes = view.data->classes;
  const int num_classes = view.data->schema.num_classes();

  std::vector<std::pair<double, std::int32_t>> cells;
  cells.reserve(view.size());
  for (std::uint32_t row : view.rows) cells.emplace_back(column[row], classes[row]);
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  SplitScore best;
  if (cells.size() < 2 || cells.front().first == cells.back().first) return best;

  std::vector<std::int64_t> left(num_classes, 0), right(num_classes, 0);
  for (const auto& [value, cls] : cells) ++right[cls];
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    ++left[cells[i].second];
    --right[cells[i].second];
    if (cells[i].first == cells[i + 1].first) continue;
    const double threshold = (cells[i].first + cells[i + 1].first) / 2.0;
    const double value = twoing_from_histograms(left, right);
    if (!best.threshold || value > best.value) {
      best.value = value;
      best.threshold = threshold;
    }
  }
  return best;
}

namespace detail {

struct GrowContext {
  const Dataset& data;
  GrowParams params;
  std::optional<QaoaAngles> angles;  // present iff backend is QAOA
  std::uint64_t master_seed = 0;
};

inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t path_hash, int attr) {
  return splitmix64(splitmix64(master ^ path_hash) ^ static_cast<std::uint64_t>(attr));
}

inline SubsetView subset_by_partition_side(const SubsetView& view, int attr,
                                           std::uint32_t mask, bool in_d1) {
  const auto& column = view.data->cat_column(attr);
  SubsetView out;
  out.data = view.data;
  for (std::uint32_t row : view.rows) {
    const bool in = (mask >> column[row]) & 1u;
    if (in == in_d1) out.rows.push_back(row);
  }
  return out;
}

}  // namespace detail

/// Criterion score for one attribute: categorical attributes go through the
/// configured partition backend, real ones through the threshold sweep.
inline SplitScore process_categorical(const SubsetView& view, int attr,
                                      const detail::GrowContext& ctx,
                                      std::uint64_t node_seed) {
  ContingencyTable table = contingency(view, attr);
  if (table.num_values < 2) return SplitScore{};
  SplitScore score;
  if (std::holds_alternative<ExhaustiveBackend>(ctx.params.backend)) {
    score = exhaustive_best_partition(table);
  } else {
    QaoaConfig config = std::get<QaoaBackend>(ctx.params.backend).config;
    config.seed = node_seed;
    score = qaoa_best_partition(table, *ctx.angles, config);
  }
  if (score.partition) score.partition->attr = attr;
  return score;
}

inline SplitScore split_criterion(int attr, const SubsetView& view,
                                  const detail::GrowContext& ctx,
                                  std::uint64_t node_seed) {
  if (view.data->schema.attributes[attr].kind == AttrKind::categorical)
    return process_categorical(view, attr, ctx, node_seed);
  return process_real(view, attr);
}

struct ChosenSplit {
  int attr = -1;
  SplitScore score;
};

/// Evaluates every attribute in schema order and keeps the strictly greater
/// score, so the earliest attribute wins ties. Returns nothing when the best
/// value is zero (growing on a zero-gain split would loop).
inline std::optional<ChosenSplit> choose_split(const SubsetView& view,
                                               const detail::GrowContext& ctx,
                                               std::uint64_t path_hash) {
  const int d = view.data->schema.num_attributes();
  std::vector<SplitScore> scores(d);

  const int jobs = std::min(ctx.params.jobs, d);
  const bool parallel = jobs > 1 && view.size() * static_cast<std::size_t>(d) >= 2048;
  if (parallel) {
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (int attr = w; attr < d; attr += jobs)
          scores[attr] =
              split_criterion(attr, view, ctx, detail::sub_seed(ctx.master_seed, path_hash, attr));
      });
    }
    for (auto& worker : workers) worker.join();
  } else {
    for (int attr = 0; attr < d; ++attr)
      scores[attr] =
          split_criterion(attr, view, ctx, detail::sub_seed(ctx.master_seed, path_hash, attr));
  }

  std::optional<ChosenSplit> best;
  double max = 0.0;
  for (int attr = 0; attr < d; ++attr) {
    if (scores[attr].value > max) {
      max = scores[attr].value;
      best = ChosenSplit{attr, scores[attr]};
    }
  }
  return best;
}

inline TreeNodePtr tree_growing(const SubsetView& view, int depth, int parent_majority,
                                const detail::GrowContext& ctx, std::uint64_t path_hash) {
  auto node = std::make_unique<TreeNode>();
  if (stop_criterion(view, depth, ctx.params)) {
    node->test = TreeNode::Leaf{view.empty() ? parent_majority : majority_class(view)};
    return node;
  }
  const auto chosen = choose_split(view, ctx, path_hash);
  const int node_majority = majority_class(view);
  if (!chosen) {
    node->test = TreeNode::Leaf{node_majority};
    return node;
  }

  auto grow_child = [&](const SubsetView& child_view, std::uint32_t child_index) {
    const std::uint64_t child_hash = detail::fnv1a_step(path_hash, child_index + 1);
    return tree_growing(child_view, depth + 1, node_majority, ctx, child_hash);
  };

  const int attr = chosen->attr;
  const auto& spec = view.data->schema.attributes[attr];
  if (spec.kind == AttrKind::categorical &&
      ctx.params.split_mode == SplitMode::paper_multiway) {
    node->test = TreeNode::Multiway{attr};
    for (int v = 0; v < spec.num_values(); ++v)
      node->children.push_back(grow_child(subset_by_category(view, attr, v),
                                          static_cast<std::uint32_t>(v)));
  } else if (spec.kind == AttrKind::categorical) {
    const std::uint32_t mask = chosen->score.partition->mask;
    node->test = TreeNode::BinaryPartition{attr, mask};
    node->children.push_back(
        grow_child(detail::subset_by_partition_side(view, attr, mask, true), 0));
    node->children.push_back(
        grow_child(detail::subset_by_partition_side(view, attr, mask, false), 1));
  } else {
    const double threshold = *chosen->score.threshold;
    node->test = TreeNode::Threshold{attr, threshold};
    auto [below, above] = subset_by_threshold(view, attr, threshold);
    node->children.push_back(grow_child(below, 0));
    node->children.push_back(grow_child(above, 1));
  }
  return node;
}

struct GrownTree {
  TreeNodePtr root;
  std::optional<QaoaAngles> angles;  // the calibrated/fixed angles, QAOA only
};

/// Grows a tree over the full dataset. For the QAOA backend the angles are
/// set once, on the objective of the first categorical attribute with T >= 2
/// at the root, and reused for every attribute processing.
inline GrownTree grow_tree(const Dataset& data, const GrowParams& params) {
  if (params.max_height < 1) throw std::invalid_argument("grow_tree: height must be >= 1");
  detail::GrowContext ctx{data, params, std::nullopt, 0};
  SubsetView root_view = full_view(data);
  if (const auto* qaoa = std::get_if<QaoaBackend>(&params.backend)) {
    ctx.master_seed = qaoa->config.seed;
    for (int attr = 0; attr < data.schema.num_attributes(); ++attr) {
      const auto& spec = data.schema.attributes[attr];
      if (spec.kind == AttrKind::categorical && spec.num_values() >= 2) {
        const auto f = objective_table(contingency(root_view, attr));
        ctx.angles = calibrate_angles(f, qaoa->config);
        break;
      }
    }
  }
  GrownTree result;
  const int root_majority = root_view.empty() ? 0 : majority_class(root_view);
  result.root = tree_growing(root_view, 0, root_majority, ctx, detail::kFnvOffset);
  result.angles = ctx.angles;
  return result;
}

inline int predict(const TreeNode& node, const Dataset& data, std::int64_t row) {
  const TreeNode* cursor = &node;
  while (!cursor->is_leaf()) {
    if (const auto* multi = std::get_if<TreeNode::Multiway>(&cursor->test)) {
      cursor = cursor->children[data.cat_column(multi->attr)[row]].get();
    } else if (const auto* th = std::get_if<TreeNode::Threshold>(&cursor->test)) {
      cursor = cursor->children[data.real_column(th->attr)[row] < th->value ? 0 : 1].get();
    } else {
      const auto& part = std::get<TreeNode::BinaryPartition>(cursor->test);
      const bool in_d1 = (part.mask >> data.cat_column(part.attr)[row]) & 1u;
      cursor = cursor->children[in_d1 ? 0 : 1].get();
    }
  }
  return std::get<TreeNode::Leaf>(cursor->test).label;
}

}  // namespace qdt

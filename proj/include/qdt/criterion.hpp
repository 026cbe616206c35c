#pragma once

// Twoing binary split criterion over categorical value partitions.
//
// A partition of an attribute's T values into (d1, d2) is a T-bit mask with
// bit v set iff value v belongs to d1. The twoing score of a partition is
//
//   0.25 * (n1/|S|) * (n2/|S|) * (sum_c |h1[c]/n1 - h2[c]/n2|)^2
//
// where h1/h2 are the per-class counts captured by each side. A side that
// captures zero rows scores 0, which keeps the objective total over all
// 2^T bitmasks.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qdt/util.hpp"

namespace qdt {

/// Bitmask split of one categorical attribute's domain. Canonical form keeps
/// value 0 on the d1 side (bit 0 set), removing the d1/d2 relabeling symmetry.
struct Partition {
  int attr = -1;
  std::uint32_t mask = 0;
};

inline std::uint32_t canonical_mask(std::uint32_t mask, int num_values) {
  const std::uint32_t full = (num_values >= 32) ? ~0u : ((1u << num_values) - 1u);
  return (mask & 1u) ? mask : (full ^ mask);
}

/// Per-attribute value x class count matrix for one row subset.
struct ContingencyTable {
  int num_values = 0;   // T
  int num_classes = 0;  // M
  std::vector<std::int64_t> counts;        // T*M, row-major by value
  std::vector<std::int64_t> value_totals;  // T
  std::int64_t total = 0;

  ContingencyTable() = default;
  ContingencyTable(int t, int m)
      : num_values(t),
        num_classes(m),
        counts(static_cast<std::size_t>(t) * m, 0),
        value_totals(t, 0) {}

  std::int64_t& at(int value, int cls) {
    return counts[static_cast<std::size_t>(value) * num_classes + cls];
  }
  std::int64_t at(int value, int cls) const {
    return counts[static_cast<std::size_t>(value) * num_classes + cls];
  }

  /// Recomputes the cached marginals from counts.
  void refresh_totals() {
    total = 0;
    for (int v = 0; v < num_values; ++v) {
      std::int64_t row = 0;
      for (int c = 0; c < num_classes; ++c) row += at(v, c);
      value_totals[v] = row;
      total += row;
    }
  }
};

/// Best split found for one attribute: the criterion value plus either a
/// categorical partition or a real threshold.
struct SplitScore {
  double value = 0.0;
  std::optional<Partition> partition;
  std::optional<double> threshold;
};

inline double twoing_from_histograms(std::span<const std::int64_t> h1,
                                     std::span<const std::int64_t> h2) {
  std::int64_t n1 = 0, n2 = 0;
  for (std::int64_t c : h1) n1 += c;
  for (std::int64_t c : h2) n2 += c;
  if (n1 == 0 || n2 == 0) return 0.0;
  const double total = static_cast<double>(n1 + n2);
  const double inv1 = 1.0 / static_cast<double>(n1);
  const double inv2 = 1.0 / static_cast<double>(n2);
  double diff = 0.0;
  for (std::size_t c = 0; c < h1.size(); ++c) {
    double p1 = static_cast<double>(h1[c]) * inv1;
    double p2 = static_cast<double>(h2[c]) * inv2;
    diff += (p1 >= p2) ? (p1 - p2) : (p2 - p1);
  }
  return 0.25 * (static_cast<double>(n1) / total) *
         (static_cast<double>(n2) / total) * diff * diff;
}

inline void partition_histograms(const ContingencyTable& table, std::uint32_t mask,
                                 std::vector<std::int64_t>& h1,
                                 std::vector<std::int64_t>& h2) {
  h1.assign(table.num_classes, 0);
  h2.assign(table.num_classes, 0);
  for (int v = 0; v < table.num_values; ++v) {
    auto& side = (mask >> v & 1u) ? h1 : h2;
    for (int c = 0; c < table.num_classes; ++c) side[c] += table.at(v, c);
  }
}

inline std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>
partition_histograms(const ContingencyTable& table, std::uint32_t mask) {
  std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> out;
  partition_histograms(table, mask, out.first, out.second);
  return out;
}

inline double twoing_of_partition(const ContingencyTable& table, std::uint32_t mask) {
  // Accumulate per-side class histograms, then score. Values are visited in
  // ascending order on both sides so complementary masks produce exactly
  // swapped histograms and bit-identical scores.
  static thread_local std::vector<std::int64_t> h1, h2;
  partition_histograms(table, mask, h1, h2);
  return twoing_from_histograms(h1, h2);
}

/// Scans every canonical nontrivial mask (bit 0 set, not all ones); keeps the
/// strictly greater score, so ties resolve to the numerically smallest mask.
/// T = 1 has no nontrivial partition and yields value 0 with no partition.
inline SplitScore exhaustive_best_partition(const ContingencyTable& table) {
  const int t = table.num_values;
  if (t < 1) throw std::invalid_argument("exhaustive_best_partition: empty domain");
  if (t > 31) throw std::invalid_argument("exhaustive_best_partition: domain too large");
  SplitScore best;
  if (t == 1) return best;
  const std::uint32_t full = (1u << t) - 1u;
  best.value = twoing_of_partition(table, 1u);
  best.partition = Partition{-1, 1u};
  for (std::uint32_t mask = 3; mask < full; mask += 2) {
    double value = twoing_of_partition(table, mask);
    if (value > best.value) {
      best.value = value;
      best.partition = Partition{-1, mask};
    }
  }
  return best;
}

inline constexpr int kMaxQubits = 16;

/// Tabulates the twoing score of every bitmask z in [0, 2^T); the objective
/// the phase Hamiltonian encodes. Trivial masks map to 0.
inline std::vector<double> objective_table(const ContingencyTable& table) {
  const int t = table.num_values;
  if (t < 1 || t > kMaxQubits)
    throw std::invalid_argument("objective_table: domain size out of range");
  std::vector<double> f(std::size_t{1} << t);
  for (std::uint32_t z = 0; z < f.size(); ++z) f[z] = twoing_of_partition(table, z);
  return f;
}

}  // namespace qdt

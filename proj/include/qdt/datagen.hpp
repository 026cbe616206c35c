#pragma once

// Deterministic benchmark-dataset synthesis.
//
// The four classic UCI categorical benchmarks (car, nursery, abalone,
// connect-4) are not redistributed here; these generators produce drop-in
// stand-ins with the exact published schemas (attribute names, domains,
// class labels) and the exact published row counts (1728, 12960, 4177,
// 67557). car and nursery enumerate their full attribute Cartesian products
// with hierarchical rule labels; connect-4 enumerates real legal 8-ply
// positions of the game and labels them with a static evaluation; abalone
// synthesizes correlated measurements from a fixed seed. Output is
// bit-reproducible. Real UCI files can replace the generated ones at any
// time; the schemas match.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qdt/dataset.hpp"

namespace qdt::datagen {

namespace detail {

inline Dataset make_categorical_dataset(Schema schema) {
  Dataset ds;
  ds.schema = std::move(schema);
  for (const auto& attr : ds.schema.attributes) {
    if (attr.kind == AttrKind::categorical)
      ds.columns.emplace_back(std::vector<std::int32_t>{});
    else
      ds.columns.emplace_back(std::vector<double>{});
  }
  return ds;
}

inline AttributeSchema cat_attr(std::string name, std::vector<std::string> labels) {
  return AttributeSchema{std::move(name), AttrKind::categorical, std::move(labels)};
}

inline AttributeSchema real_attr(std::string name) {
  return AttributeSchema{std::move(name), AttrKind::real, {}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// car: 6 categorical attributes, full 4*4*4*3*3*3 = 1728 product, 4 classes.

inline Schema car_schema() {
  Schema s;
  s.attributes = {
      detail::cat_attr("buying", {"vhigh", "high", "med", "low"}),
      detail::cat_attr("maint", {"vhigh", "high", "med", "low"}),
      detail::cat_attr("doors", {"2", "3", "4", "5more"}),
      detail::cat_attr("persons", {"2", "4", "more"}),
      detail::cat_attr("lug_boot", {"small", "med", "big"}),
      detail::cat_attr("safety", {"low", "med", "high"}),
  };
  s.class_name = "class";
  s.class_labels = {"unacc", "acc", "good", "vgood"};
  s.class_column = 6;
  return s;
}

/// Hierarchical acceptability rule: price from buying+maint, comfort from
/// doors/persons/lug_boot, gated by safety and capacity.
inline int car_label(int buying, int maint, int doors, int persons, int lug_boot, int safety) {
  if (safety == 0 || persons == 0) return 0;  // low safety / two seats
  const int expense = (3 - buying) + (3 - maint);          // 0 cheap .. 6 double-vhigh
  const int comfort = std::min(doors, 2) + lug_boot + (persons == 2 ? 1 : 0);  // 0..5
  const int quality = comfort + 2 * safety;                // 2..9
  if (expense >= 5) return 0;
  if (expense >= 3) return quality >= 5 ? 1 : 0;
  if (expense == 2) return quality >= 7 ? 2 : (quality >= 4 ? 1 : 0);
  return quality >= 8 ? 3 : (quality >= 6 ? 2 : (quality >= 3 ? 1 : 0));
}

inline Dataset make_car() {
  Dataset ds = detail::make_categorical_dataset(car_schema());
  auto push = [&](int attr, int v) {
    std::get<std::vector<std::int32_t>>(ds.columns[attr]).push_back(v);
  };
  for (int buying = 0; buying < 4; ++buying)
    for (int maint = 0; maint < 4; ++maint)
      for (int doors = 0; doors < 4; ++doors)
        for (int persons = 0; persons < 3; ++persons)
          for (int lug = 0; lug < 3; ++lug)
            for (int safety = 0; safety < 3; ++safety) {
              push(0, buying);
              push(1, maint);
              push(2, doors);
              push(3, persons);
              push(4, lug);
              push(5, safety);
              ds.classes.push_back(car_label(buying, maint, doors, persons, lug, safety));
            }
  return ds;
}

// ---------------------------------------------------------------------------
// nursery: 8 categorical attributes, full product of 12960 rows, 5 classes.

inline Schema nursery_schema() {
  Schema s;
  s.attributes = {
      detail::cat_attr("parents", {"usual", "pretentious", "great_pret"}),
      detail::cat_attr("has_nurs", {"proper", "less_proper", "improper", "critical", "very_crit"}),
      detail::cat_attr("form", {"complete", "completed", "incomplete", "foster"}),
      detail::cat_attr("children", {"1", "2", "3", "more"}),
      detail::cat_attr("housing", {"convenient", "less_conv", "critical"}),
      detail::cat_attr("finance", {"convenient", "inconv"}),
      detail::cat_attr("social", {"nonprob", "slightly_prob", "problematic"}),
      detail::cat_attr("health", {"recommended", "priority", "not_recom"}),
  };
  s.class_name = "class";
  s.class_labels = {"not_recom", "recommend", "very_recom", "priority", "spec_prior"};
  s.class_column = 8;
  return s;
}

inline int nursery_label(int parents, int has_nurs, int form, int children, int housing,
                         int finance, int social, int health) {
  if (health == 2) return 0;  // not_recom
  if (has_nurs == 4 || (has_nurs == 3 && finance == 1)) return 4;  // spec_prior
  static constexpr int parents_pts[] = {2, 1, 0};
  static constexpr int nurs_pts[] = {2, 1, 0, 0, 0};
  static constexpr int form_pts[] = {2, 1, 0, 0};
  static constexpr int children_pts[] = {2, 2, 1, 0};
  static constexpr int housing_pts[] = {2, 1, 0};
  static constexpr int social_pts[] = {2, 1, 0};
  const int score = parents_pts[parents] + nurs_pts[has_nurs] + form_pts[form] +
                    children_pts[children] + housing_pts[housing] + (finance == 0 ? 1 : 0) +
                    social_pts[social] + (health == 0 ? 2 : 0);
  if (score == 15) return 1;                   // recommend: the all-best applications
  if (score >= 12 && health == 0) return 2;    // very_recom
  if (score >= 8) return 3;                    // priority
  return 4;                                    // spec_prior
}

inline Dataset make_nursery() {
  Dataset ds = detail::make_categorical_dataset(nursery_schema());
  auto push = [&](int attr, int v) {
    std::get<std::vector<std::int32_t>>(ds.columns[attr]).push_back(v);
  };
  for (int parents = 0; parents < 3; ++parents)
    for (int has_nurs = 0; has_nurs < 5; ++has_nurs)
      for (int form = 0; form < 4; ++form)
        for (int children = 0; children < 4; ++children)
          for (int housing = 0; housing < 3; ++housing)
            for (int finance = 0; finance < 2; ++finance)
              for (int social = 0; social < 3; ++social)
                for (int health = 0; health < 3; ++health) {
                  push(0, parents);
                  push(1, has_nurs);
                  push(2, form);
                  push(3, children);
                  push(4, housing);
                  push(5, finance);
                  push(6, social);
                  push(7, health);
                  ds.classes.push_back(nursery_label(parents, has_nurs, form, children,
                                                     housing, finance, social, health));
                }
  return ds;
}

// ---------------------------------------------------------------------------
// abalone: sex + 7 measurements, 4177 rows, ring counts 1..29 as classes.

inline Schema abalone_schema() {
  Schema s;
  s.attributes.push_back(detail::cat_attr("sex", {"M", "F", "I"}));
  for (const char* name : {"length", "diameter", "height", "whole_weight", "shucked_weight",
                           "viscera_weight", "shell_weight"})
    s.attributes.push_back(detail::real_attr(name));
  s.class_name = "rings";
  for (int r = 1; r <= 29; ++r) s.class_labels.push_back(std::to_string(r));
  s.class_column = 8;
  return s;
}

namespace detail {

struct GaussianSource {
  std::mt19937_64 rng;
  explicit GaussianSource(std::uint64_t seed) : rng(seed) {}

  double uniform() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

  // Box-Muller on raw uniform bits; avoids the implementation-defined
  // std::normal_distribution.
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
};

inline double round_step(double x, double step) { return std::round(x / step) * step; }

}  // namespace detail

inline Dataset make_abalone() {
  Dataset ds;
  ds.schema = abalone_schema();
  ds.columns.emplace_back(std::vector<std::int32_t>{});
  for (int i = 0; i < 7; ++i) ds.columns.emplace_back(std::vector<double>{});

  detail::GaussianSource src(0xABA10E5EEDULL);
  auto clamp = [](double x, double lo, double hi) { return std::min(std::max(x, lo), hi); };
  for (int row = 0; row < 4177; ++row) {
    const int rings = static_cast<int>(clamp(std::llround(10.5 + 3.1 * src.normal()), 1, 29));
    const double length = detail::round_step(
        clamp(0.075 + 0.0265 * rings + 0.045 * src.normal(), 0.02, 0.90), 0.005);
    const double diameter =
        detail::round_step(clamp(length * (0.80 + 0.03 * src.normal()), 0.01, 0.80), 0.005);
    const double height =
        detail::round_step(clamp(length * (0.36 + 0.05 * src.normal()), 0.005, 0.60), 0.005);
    const double whole = detail::round_step(
        clamp(1.6 * length * length * length * (1.0 + 0.12 * src.normal()), 0.002, 3.0), 0.0005);
    const double shucked =
        detail::round_step(clamp(whole * (0.43 + 0.05 * src.normal()), 0.0005, 3.0), 0.0005);
    const double viscera =
        detail::round_step(clamp(whole * (0.22 + 0.04 * src.normal()), 0.0005, 2.0), 0.0005);
    const double shell =
        detail::round_step(clamp(whole * (0.28 + 0.04 * src.normal()), 0.0005, 2.0), 0.0005);
    const double infant_p = clamp(0.9 - 0.07 * (rings - 4), 0.03, 0.9);
    int sex;
    if (src.uniform() < infant_p)
      sex = 2;  // I
    else
      sex = src.uniform() < 0.5 ? 0 : 1;  // M / F
    std::get<std::vector<std::int32_t>>(ds.columns[0]).push_back(sex);
    const double values[] = {length, diameter, height, whole, shucked, viscera, shell};
    for (int a = 0; a < 7; ++a)
      std::get<std::vector<double>>(ds.columns[1 + a]).push_back(values[a]);
    ds.classes.push_back(rings - 1);
  }
  return ds;
}

// ---------------------------------------------------------------------------
// connect-4: all legal 8-ply positions where neither player has won and the
// next move is not forced; 42 cell attributes over {x,o,b}, 3 outcome
// classes. Cells are named a1..g6, column-major, row 1 at the bottom.

inline Schema connect4_schema() {
  Schema s;
  for (char col = 'a'; col <= 'g'; ++col)
    for (char row = '1'; row <= '6'; ++row)
      s.attributes.push_back(detail::cat_attr(std::string{col, row}, {"x", "o", "b"}));
  s.class_name = "outcome";
  s.class_labels = {"win", "loss", "draw"};
  s.class_column = 42;
  return s;
}

namespace detail {

// Bitboard layout: bit (col * 7 + row), rows 0..5 playable, bit 6 spare.
struct C4Position {
  std::uint64_t stones[2];  // [0] = x, [1] = o
  bool operator==(const C4Position&) const = default;
};

struct C4PositionHash {
  std::size_t operator()(const C4Position& p) const {
    return qdt::detail::splitmix64(p.stones[0] ^ qdt::detail::splitmix64(p.stones[1]));
  }
};

inline bool c4_has_won(std::uint64_t bb) {
  for (int shift : {1, 7, 6, 8}) {  // vertical, horizontal, both diagonals
    const std::uint64_t pairs = bb & (bb >> shift);
    if (pairs & (pairs >> (2 * shift))) return true;
  }
  return false;
}

inline bool c4_immediate_win(const C4Position& p, int player, const int* heights) {
  for (int col = 0; col < 7; ++col) {
    if (heights[col] >= 6) continue;
    const std::uint64_t stone = std::uint64_t{1} << (col * 7 + heights[col]);
    if (c4_has_won(p.stones[player] | stone)) return true;
  }
  return false;
}

inline void c4_heights(const C4Position& p, int* heights) {
  const std::uint64_t all = p.stones[0] | p.stones[1];
  for (int col = 0; col < 7; ++col) {
    int h = 0;
    while (h < 6 && (all >> (col * 7 + h)) & 1u) ++h;
    heights[col] = h;
  }
}

/// Static evaluation: sum over the 69 four-cell windows. Windows holding both
/// colors are dead; otherwise the owning side scores by stone count, and the
/// side to move (x) gets a small tempo bonus.
inline int c4_evaluate(const C4Position& p) {
  static const std::vector<std::array<int, 4>> windows = [] {
    std::vector<std::array<int, 4>> w;
    auto bit = [](int col, int row) { return col * 7 + row; };
    for (int col = 0; col < 7; ++col)
      for (int row = 0; row + 3 < 6; ++row)
        w.push_back({bit(col, row), bit(col, row + 1), bit(col, row + 2), bit(col, row + 3)});
    for (int row = 0; row < 6; ++row)
      for (int col = 0; col + 3 < 7; ++col)
        w.push_back({bit(col, row), bit(col + 1, row), bit(col + 2, row), bit(col + 3, row)});
    for (int col = 0; col + 3 < 7; ++col)
      for (int row = 0; row + 3 < 6; ++row) {
        w.push_back({bit(col, row), bit(col + 1, row + 1), bit(col + 2, row + 2),
                     bit(col + 3, row + 3)});
        w.push_back({bit(col, row + 3), bit(col + 1, row + 2), bit(col + 2, row + 1),
                     bit(col + 3, row)});
      }
    return w;
  }();
  static constexpr int weight[4] = {0, 1, 4, 24};
  int score = 4;  // x is on the move
  for (const auto& window : windows) {
    int cx = 0, co = 0;
    for (int b : window) {
      cx += (p.stones[0] >> b) & 1u;
      co += (p.stones[1] >> b) & 1u;
    }
    if (cx > 0 && co > 0) continue;
    score += weight[cx] - weight[co];
  }
  return score;
}

}  // namespace detail

inline Dataset make_connect4() {
  using detail::C4Position;
  std::unordered_set<C4Position, detail::C4PositionHash> seen;
  seen.reserve(1 << 18);

  C4Position pos{0, 0};
  int heights[7] = {0, 0, 0, 0, 0, 0, 0};
  auto dfs = [&](auto&& self, int ply) -> void {
    if (ply == 8) {
      seen.insert(pos);
      return;
    }
    const int player = ply & 1;
    for (int col = 0; col < 7; ++col) {
      if (heights[col] >= 6) continue;
      const std::uint64_t stone = std::uint64_t{1} << (col * 7 + heights[col]);
      pos.stones[player] |= stone;
      ++heights[col];
      if (!detail::c4_has_won(pos.stones[player])) self(self, ply + 1);
      --heights[col];
      pos.stones[player] &= ~stone;
    }
  };
  dfs(dfs, 0);

  std::vector<C4Position> keep;
  keep.reserve(seen.size());
  for (const auto& p : seen) {
    int h[7];
    detail::c4_heights(p, h);
    // x is to move; the move is forced when either side can complete four.
    if (detail::c4_immediate_win(p, 0, h) || detail::c4_immediate_win(p, 1, h)) continue;
    keep.push_back(p);
  }
  std::sort(keep.begin(), keep.end(), [](const C4Position& a, const C4Position& b) {
    return a.stones[0] != b.stones[0] ? a.stones[0] < b.stones[0] : a.stones[1] < b.stones[1];
  });
  constexpr std::size_t kTarget = 67557;
  if (keep.size() < kTarget)
    throw std::logic_error("connect-4 enumeration produced too few positions");
  keep.resize(kTarget);

  Dataset ds = detail::make_categorical_dataset(connect4_schema());
  ds.classes.reserve(kTarget);
  for (auto& column : ds.columns)
    std::get<std::vector<std::int32_t>>(column).reserve(kTarget);
  for (const auto& p : keep) {
    int attr = 0;
    for (int col = 0; col < 7; ++col)
      for (int row = 0; row < 6; ++row, ++attr) {
        const std::uint64_t bit = std::uint64_t{1} << (col * 7 + row);
        int cell = 2;  // b
        if (p.stones[0] & bit) cell = 0;
        else if (p.stones[1] & bit) cell = 1;
        std::get<std::vector<std::int32_t>>(ds.columns[attr]).push_back(cell);
      }
    const int score = detail::c4_evaluate(p);
    ds.classes.push_back(score >= 1 ? 0 : (score <= -8 ? 1 : 2));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// toy: a 12-row consistent mixed dataset used by tests and docs.

inline Schema toy_schema() {
  Schema s;
  s.attributes = {
      detail::cat_attr("color", {"red", "green", "blue"}),
      detail::cat_attr("size", {"small", "large"}),
      detail::real_attr("weight"),
  };
  s.class_name = "label";
  s.class_labels = {"yes", "no"};
  s.class_column = 3;
  return s;
}

inline Dataset make_toy() {
  Dataset ds;
  ds.schema = toy_schema();
  ds.columns.emplace_back(std::vector<std::int32_t>{});
  ds.columns.emplace_back(std::vector<std::int32_t>{});
  ds.columns.emplace_back(std::vector<double>{});
  struct Row {
    int color, size;
    double weight;
    int label;
  };
  const Row rows[] = {
      {0, 0, 1.5, 0}, {0, 1, 2.5, 0}, {0, 0, 3.5, 1}, {0, 1, 4.5, 1},
      {1, 0, 1.0, 0}, {1, 1, 2.0, 0}, {1, 0, 3.0, 0}, {1, 1, 4.0, 0},
      {2, 0, 1.25, 1}, {2, 1, 2.25, 1}, {2, 0, 3.75, 1}, {2, 1, 4.75, 0},
  };
  for (const Row& r : rows) {
    std::get<std::vector<std::int32_t>>(ds.columns[0]).push_back(r.color);
    std::get<std::vector<std::int32_t>>(ds.columns[1]).push_back(r.size);
    std::get<std::vector<double>>(ds.columns[2]).push_back(r.weight);
    ds.classes.push_back(r.label);
  }
  return ds;
}

inline Dataset make_named(const std::string& name) {
  if (name == "car") return make_car();
  if (name == "nursery") return make_nursery();
  if (name == "abalone") return make_abalone();
  if (name == "connect-4") return make_connect4();
  if (name == "toy") return make_toy();
  throw std::invalid_argument("unknown dataset '" + name + "'");
}

inline const std::vector<std::string>& dataset_names() {
  static const std::vector<std::string> names = {"car", "nursery", "abalone", "connect-4",
                                                 "toy"};
  return names;
}

}  // namespace qdt::datagen

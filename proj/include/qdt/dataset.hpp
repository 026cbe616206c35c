#pragma once

// Tabular training data with mixed categorical and real-valued attributes.
//
// A schema file declares, one line per CSV column in column order:
//
//   attribute <name> categorical <label> <label> ...
//   attribute <name> real
//   class <name> <label> <label> ...
//
// Exactly one `class` line must appear; its position among the lines is the
// class column's position in the data file. Blank lines and lines starting
// with '#' are skipped. Names and labels are whitespace-free tokens and may
// not contain ',' or '='.
//
// A data file is comma-separated text, one record per line, no header; cells
// are raw category labels or decimal literals. Category universes come from
// the schema, never inferred from data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qdt/criterion.hpp"
#include "qdt/util.hpp"

namespace qdt {

enum class AttrKind { categorical, real };

struct AttributeSchema {
  std::string name;
  AttrKind kind = AttrKind::categorical;
  std::vector<std::string> categories;  // empty iff kind == real

  int num_values() const { return static_cast<int>(categories.size()); }
  bool operator==(const AttributeSchema&) const = default;
};

struct Schema {
  std::vector<AttributeSchema> attributes;
  std::string class_name;
  std::vector<std::string> class_labels;
  int class_column = 0;  // position of the class among the d+1 CSV columns

  int num_attributes() const { return static_cast<int>(attributes.size()); }
  int num_classes() const { return static_cast<int>(class_labels.size()); }
  bool operator==(const Schema&) const = default;
};

struct Dataset {
  Schema schema;
  // Columnar storage, one column per attribute in schema order.
  std::vector<std::variant<std::vector<std::int32_t>, std::vector<double>>> columns;
  std::vector<std::int32_t> classes;

  std::int64_t num_rows() const { return static_cast<std::int64_t>(classes.size()); }

  const std::vector<std::int32_t>& cat_column(int attr) const {
    return std::get<std::vector<std::int32_t>>(columns[attr]);
  }
  const std::vector<double>& real_column(int attr) const {
    return std::get<std::vector<double>>(columns[attr]);
  }
};

/// Row-index subset of a dataset. Indices are strictly increasing; the empty
/// view is legal (empty branches produce it).
struct SubsetView {
  const Dataset* data = nullptr;
  std::vector<std::uint32_t> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

namespace detail {

inline bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == ',' || c == '=') return false;
  return true;
}

[[noreturn]] inline void schema_fail(const std::string& path, int line,
                                     const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace detail

inline Schema parse_schema(std::istream& in, const std::string& path) {
  Schema schema;
  bool saw_class = false;
  int column = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens[0] == "attribute") {
      if (tokens.size() < 3)
        detail::schema_fail(path, line_no, "expected: attribute <name> <kind> ...");
      AttributeSchema attr;
      attr.name = std::string(tokens[1]);
      if (!detail::valid_token(attr.name))
        detail::schema_fail(path, line_no, "bad attribute name '" + attr.name + "'");
      for (const auto& existing : schema.attributes)
        if (existing.name == attr.name)
          detail::schema_fail(path, line_no, "duplicate attribute name '" + attr.name + "'");
      if (tokens[2] == "categorical") {
        attr.kind = AttrKind::categorical;
        for (std::size_t i = 3; i < tokens.size(); ++i) {
          std::string label(tokens[i]);
          if (!detail::valid_token(label))
            detail::schema_fail(path, line_no, "bad category label '" + label + "'");
          if (std::find(attr.categories.begin(), attr.categories.end(), label) !=
              attr.categories.end())
            detail::schema_fail(path, line_no, "duplicate category label '" + label + "'");
          attr.categories.push_back(std::move(label));
        }
        if (attr.categories.empty())
          detail::schema_fail(path, line_no,
                              "categorical attribute '" + attr.name + "' has no categories");
      } else if (tokens[2] == "real") {
        attr.kind = AttrKind::real;
        if (tokens.size() > 3)
          detail::schema_fail(path, line_no, "real attribute takes no categories");
      } else {
        detail::schema_fail(path, line_no, "unknown kind '" + std::string(tokens[2]) + "'");
      }
      schema.attributes.push_back(std::move(attr));
      ++column;
    } else if (tokens[0] == "class") {
      if (saw_class) detail::schema_fail(path, line_no, "duplicate class line");
      if (tokens.size() < 3)
        detail::schema_fail(path, line_no, "expected: class <name> <label> ...");
      schema.class_name = std::string(tokens[1]);
      if (!detail::valid_token(schema.class_name))
        detail::schema_fail(path, line_no, "bad class name");
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        std::string label(tokens[i]);
        if (!detail::valid_token(label))
          detail::schema_fail(path, line_no, "bad class label '" + label + "'");
        if (std::find(schema.class_labels.begin(), schema.class_labels.end(), label) !=
            schema.class_labels.end())
          detail::schema_fail(path, line_no, "duplicate class label '" + label + "'");
        schema.class_labels.push_back(std::move(label));
      }
      schema.class_column = column;
      saw_class = true;
      ++column;
    } else {
      detail::schema_fail(path, line_no,
                          "unknown directive '" + std::string(tokens[0]) + "'");
    }
  }
  if (!saw_class) throw ParseError(path + ": schema declares no class column");
  if (schema.attributes.empty()) throw ParseError(path + ": schema declares no attributes");
  return schema;
}

inline Schema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schema file: " + path);
  return parse_schema(in, path);
}

inline std::string save_schema(const Schema& schema) {
  std::ostringstream out;
  int column = 0;
  for (const auto& attr : schema.attributes) {
    if (column == schema.class_column) {
      out << "class " << schema.class_name;
      for (const auto& label : schema.class_labels) out << ' ' << label;
      out << '\n';
    }
    out << "attribute " << attr.name;
    out << (attr.kind == AttrKind::categorical ? " categorical" : " real");
    for (const auto& label : attr.categories) out << ' ' << label;
    out << '\n';
    ++column;
  }
  if (schema.class_column == column) {
    out << "class " << schema.class_name;
    for (const auto& label : schema.class_labels) out << ' ' << label;
    out << '\n';
  }
  return out.str();
}

/// Stable digest of the schema content; trees record it so that comparing or
/// predicting against the wrong schema fails loudly.
inline std::string schema_digest(const Schema& schema) {
  std::uint64_t h = detail::fnv1a(save_schema(schema));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct LoadOptions {
  bool require_class = true;  // when false, a d-column file is accepted
  bool allow_empty = false;
};

inline Dataset parse_csv(std::istream& in, const Schema& schema, const std::string& path,
                         const LoadOptions& opts = {}) {
  Dataset ds;
  ds.schema = schema;
  const int d = schema.num_attributes();
  ds.columns.reserve(d);
  for (const auto& attr : schema.attributes) {
    if (attr.kind == AttrKind::categorical)
      ds.columns.emplace_back(std::vector<std::int32_t>{});
    else
      ds.columns.emplace_back(std::vector<double>{});
  }

  // Per-attribute label -> index lookup. Linear scan is fine for the domain
  // sizes seen here (T <= a few dozen).
  auto find_label = [](const std::vector<std::string>& labels, std::string_view cell) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cell) return static_cast<std::int32_t>(i);
    return std::int32_t{-1};
  };

  std::string line;
  int row_no = 0;
  bool first_data_row = true;
  bool has_class_column = true;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = detail::split_char(line, ',');
    if (first_data_row && !opts.require_class && static_cast<int>(cells.size()) == d)
      has_class_column = false;
    first_data_row = false;
    const int expected = d + (has_class_column ? 1 : 0);
    if (static_cast<int>(cells.size()) != expected)
      throw ParseError(path + ": row " + std::to_string(row_no) + ": expected " +
                       std::to_string(expected) + " cells, got " +
                       std::to_string(cells.size()));
    int attr = 0;
    for (int col = 0; col < static_cast<int>(cells.size()); ++col) {
      std::string_view cell = cells[col];
      if (has_class_column && col == schema.class_column) {
        std::int32_t cls = find_label(schema.class_labels, cell);
        if (cls < 0)
          throw ParseError(path + ": row " + std::to_string(row_no) +
                           ": unknown class label '" + std::string(cell) + "'");
        ds.classes.push_back(cls);
        continue;
      }
      const auto& spec = schema.attributes[attr];
      if (spec.kind == AttrKind::categorical) {
        std::int32_t v = find_label(spec.categories, cell);
        if (v < 0)
          throw ParseError(path + ": row " + std::to_string(row_no) +
                           ": unknown category label '" + std::string(cell) +
                           "' for attribute " + spec.name);
        std::get<std::vector<std::int32_t>>(ds.columns[attr]).push_back(v);
      } else {
        double value = 0;
        auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || p != cell.data() + cell.size() || !std::isfinite(value))
          throw ParseError(path + ": row " + std::to_string(row_no) +
                           ": bad real value '" + std::string(cell) + "' for attribute " +
                           spec.name);
        std::get<std::vector<double>>(ds.columns[attr]).push_back(value);
      }
      ++attr;
    }
    if (!has_class_column) ds.classes.push_back(0);
  }
  if (ds.classes.empty() && !opts.allow_empty)
    throw ParseError(path + ": empty dataset");
  return ds;
}

inline Dataset load_csv(const std::string& path, const Schema& schema,
                        const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file: " + path);
  return parse_csv(in, schema, path, opts);
}

inline std::string save_csv(const Dataset& ds) {
  std::ostringstream out;
  const int d = ds.schema.num_attributes();
  for (std::int64_t row = 0; row < ds.num_rows(); ++row) {
    int attr = 0;
    for (int col = 0; col <= d; ++col) {
      if (col > 0) out << ',';
      if (col == ds.schema.class_column) {
        out << ds.schema.class_labels[ds.classes[row]];
        continue;
      }
      const auto& spec = ds.schema.attributes[attr];
      if (spec.kind == AttrKind::categorical)
        out << spec.categories[ds.cat_column(attr)[row]];
      else
        out << detail::format_shortest(ds.real_column(attr)[row]);
      ++attr;
    }
    out << '\n';
  }
  return out.str();
}

inline SubsetView full_view(const Dataset& ds) {
  SubsetView view;
  view.data = &ds;
  view.rows.resize(ds.num_rows());
  for (std::size_t i = 0; i < view.rows.size(); ++i)
    view.rows[i] = static_cast<std::uint32_t>(i);
  return view;
}

inline SubsetView subset_by_category(const SubsetView& view, int attr, int value) {
  const auto& spec = view.data->schema.attributes[attr];
  if (spec.kind != AttrKind::categorical)
    throw std::invalid_argument("subset_by_category: attribute is not categorical");
  if (value < 0 || value >= spec.num_values())
    throw std::invalid_argument("subset_by_category: value out of domain");
  const auto& column = view.data->cat_column(attr);
  SubsetView out;
  out.data = view.data;
  for (std::uint32_t row : view.rows)
    if (column[row] == value) out.rows.push_back(row);
  return out;
}

inline std::pair<SubsetView, SubsetView> subset_by_threshold(const SubsetView& view,
                                                             int attr, double threshold) {
  const auto& spec = view.data->schema.attributes[attr];
  if (spec.kind != AttrKind::real)
    throw std::invalid_argument("subset_by_threshold: attribute is not real-valued");
  const auto& column = view.data->real_column(attr);
  std::pair<SubsetView, SubsetView> out;
  out.first.data = out.second.data = view.data;
  for (std::uint32_t row : view.rows) {
    if (column[row] < threshold)
      out.first.rows.push_back(row);
    else
      out.second.rows.push_back(row);
  }
  return out;
}

inline std::vector<std::int64_t> class_histogram(const SubsetView& view) {
  std::vector<std::int64_t> counts(view.data->schema.num_classes(), 0);
  for (std::uint32_t row : view.rows) ++counts[view.data->classes[row]];
  return counts;
}

/// Most frequent class in a non-empty view; ties go to the lowest class index.
inline int majority_class(const SubsetView& view) {
  if (view.empty()) throw std::invalid_argument("majority_class: empty view");
  auto counts = class_histogram(view);
  int best = 0;
  for (int c = 1; c < static_cast<int>(counts.size()); ++c)
    if (counts[c] > counts[best]) best = c;
  return best;
}

inline ContingencyTable contingency(const SubsetView& view, int attr) {
  const auto& spec = view.data->schema.attributes[attr];
  if (spec.kind != AttrKind::categorical)
    throw std::invalid_argument("contingency: attribute is not categorical");
  ContingencyTable table(spec.num_values(), view.data->schema.num_classes());
  const auto& column = view.data->cat_column(attr);
  const auto& classes = view.data->classes;
  for (std::uint32_t row : view.rows) ++table.at(column[row], classes[row]);
  table.refresh_totals();
  return table;
}

}  // namespace qdt

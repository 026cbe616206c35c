#pragma once

// Classical-vs-QAOA tree-equality experiments: for each height in a spec,
// grow one tree per backend on the same data, write both tree files, and
// report Q_tree plus node counts and wall time.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qdt/compare.hpp"
#include "qdt/dataset.hpp"
#include "qdt/tree.hpp"
#include "qdt/tree_io.hpp"

namespace qdt {

struct ExperimentSpec {
  std::string name;
  std::string data_path;
  std::string schema_path;
  std::vector<int> heights;
  QaoaConfig qaoa;
  SplitMode split_mode = SplitMode::paper_multiway;
  int jobs = 1;
};

/// The four benchmark setups with the heights used in the published tables.
inline std::optional<ExperimentSpec> builtin_experiment(const std::string& name,
                                                        const std::string& data_dir) {
  ExperimentSpec spec;
  spec.name = name;
  if (name == "car")
    spec.heights = {3, 5, 7};
  else if (name == "nursery")
    spec.heights = {3, 5, 7, 10};
  else if (name == "abalone")
    spec.heights = {3, 5, 7, 10};
  else if (name == "connect-4")
    spec.heights = {3, 5, 7, 10, 15};
  else if (name == "toy")
    spec.heights = {3};
  else
    return std::nullopt;
  spec.data_path = data_dir + "/" + name + ".data";
  spec.schema_path = data_dir + "/" + name + ".schema";
  return spec;
}

/// Key-value spec file: `name`, `data`, `schema`, `heights` (space separated),
/// optional `p`, `shots`, `seed`, `grid`. '#' comments allowed.
inline ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open experiment spec: " + path);
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    const auto fail = [&](const std::string& msg) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (tokens.size() < 2) fail("expected: <key> <value>");
    const auto key = tokens[0];
    if (key == "name") {
      spec.name = std::string(tokens[1]);
    } else if (key == "data") {
      spec.data_path = std::string(tokens[1]);
    } else if (key == "schema") {
      spec.schema_path = std::string(tokens[1]);
    } else if (key == "heights") {
      for (std::size_t i = 1; i < tokens.size(); ++i)
        spec.heights.push_back(std::stoi(std::string(tokens[i])));
    } else if (key == "p") {
      spec.qaoa.levels = std::stoi(std::string(tokens[1]));
    } else if (key == "shots") {
      spec.qaoa.shots = std::stoi(std::string(tokens[1]));
    } else if (key == "seed") {
      spec.qaoa.seed = std::stoull(std::string(tokens[1]));
    } else if (key == "grid") {
      spec.qaoa.calibration = RampGrid{std::stoi(std::string(tokens[1]))};
    } else {
      fail("unknown key '" + std::string(key) + "'");
    }
  }
  if (spec.name.empty() || spec.data_path.empty() || spec.schema_path.empty() ||
      spec.heights.empty())
    throw ParseError(path + ": spec needs name, data, schema and heights");
  return spec;
}

struct ExperimentRow {
  int height = 0;
  bool ok = false;
  std::string error;
  double q = 0.0;
  int nodes_exhaustive = 0;
  int nodes_qaoa = 0;
  double ms_exhaustive = 0.0;
  double ms_qaoa = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<ExperimentRow> rows;

  bool all_equal() const {
    for (const auto& row : rows)
      if (!row.ok || row.q != 1.0) return false;
    return !rows.empty();
  }
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

}  // namespace detail

/// Runs one spec. Tree files land in out_dir as
/// <name>_h<height>_<backend>.tree. A failing height is reported in its row
/// and the run continues.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                       std::ostream* log = nullptr) {
  ExperimentResult result;
  result.spec = spec;
  const Schema schema = load_schema(spec.schema_path);
  const Dataset data = load_csv(spec.data_path, schema);
  std::filesystem::create_directories(out_dir);

  if (log)
    *log << "dataset " << spec.name << ": N=" << data.num_rows() << ", d="
         << schema.num_attributes() << ", M=" << schema.num_classes() << "\n"
         << "  h    q         nodes_exh  nodes_qaoa  ms_exh      ms_qaoa\n";

  for (int height : spec.heights) {
    ExperimentRow row;
    row.height = height;
    try {
      GrowParams exhaustive_params{height, ExhaustiveBackend{}, spec.split_mode, spec.jobs};
      GrowParams qaoa_params{height, QaoaBackend{spec.qaoa}, spec.split_mode, spec.jobs};

      auto start = std::chrono::steady_clock::now();
      const GrownTree classical = grow_tree(data, exhaustive_params);
      row.ms_exhaustive = detail::elapsed_ms(start);

      start = std::chrono::steady_clock::now();
      const GrownTree quantum = grow_tree(data, qaoa_params);
      row.ms_qaoa = detail::elapsed_ms(start);

      const std::string ref_text = serialize_tree(
          *classical.root, schema, make_metadata(spec.name, exhaustive_params, classical));
      const std::string cand_text = serialize_tree(
          *quantum.root, schema, make_metadata(spec.name, qaoa_params, quantum));
      const std::string stem = out_dir + "/" + spec.name + "_h" + std::to_string(height);
      detail::write_file(stem + "_exhaustive.tree", ref_text);
      detail::write_file(stem + "_qaoa.tree", cand_text);

      const ComparisonReport report = q_tree(parse_tree(ref_text), parse_tree(cand_text));
      row.q = report.q;
      row.nodes_exhaustive = report.total_nodes;
      row.nodes_qaoa = count_nodes(*quantum.root);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    result.rows.push_back(row);
    if (log) {
      if (row.ok) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-4d %-9.6f %-10d %-11d %-11.1f %-11.1f\n",
                      row.height, row.q, row.nodes_exhaustive, row.nodes_qaoa,
                      row.ms_exhaustive, row.ms_qaoa);
        *log << line;
      } else {
        *log << "  " << row.height << "    FAILED: " << row.error << "\n";
      }
      log->flush();
    }
  }
  return result;
}

inline std::string experiment_csv(const ExperimentResult& result) {
  std::string out = "dataset,height,q,nodes_exhaustive,nodes_qaoa,ms_exhaustive,ms_qaoa,status\n";
  for (const auto& row : result.rows) {
    char q_text[32];
    std::snprintf(q_text, sizeof q_text, "%.6f", row.q);
    out += result.spec.name + "," + std::to_string(row.height) + "," + q_text + "," +
           std::to_string(row.nodes_exhaustive) + "," + std::to_string(row.nodes_qaoa) + "," +
           std::to_string(row.ms_exhaustive) + "," + std::to_string(row.ms_qaoa) + "," +
           (row.ok ? "ok" : ("error: " + row.error)) + "\n";
  }
  return out;
}

}  // namespace qdt

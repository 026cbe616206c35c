// qdt: train, apply and compare Twoing decision trees, with an exhaustive or
// a simulated-QAOA categorical split search.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdt/compare.hpp"
#include "qdt/dataset.hpp"
#include "qdt/experiment.hpp"
#include "qdt/tree.hpp"
#include "qdt/tree_io.hpp"

namespace {

constexpr int kExitUsage = 2;

std::string sanitize_name(std::string name) {
  if (name.empty()) return "unnamed";
  for (char& c : name)
    if (c == ' ' || c == '\t' || c == ',' || c == '=') c = '_';
  return name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qdt::ParseError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TrainOptions {
  std::string data_path, schema_path, out_path, name;
  int height = 3;
  std::string backend = "exhaustive";
  std::string split_mode = "multiway";
  int levels = 5, shots = 1024, grid = 16, jobs = 1;
  std::uint64_t seed = 42;
};

qdt::GrowParams to_grow_params(const TrainOptions& opt) {
  qdt::GrowParams params;
  params.max_height = opt.height;
  params.split_mode = opt.split_mode == "binary" ? qdt::SplitMode::binary_partition
                                                 : qdt::SplitMode::paper_multiway;
  params.jobs = opt.jobs;
  if (opt.backend == "qaoa") {
    qdt::QaoaConfig config;
    config.levels = opt.levels;
    config.shots = opt.shots;
    config.seed = opt.seed;
    config.calibration = qdt::RampGrid{opt.grid};
    params.backend = qdt::QaoaBackend{config};
  }
  return params;
}

int cmd_train(const TrainOptions& opt) {
  const qdt::Schema schema = qdt::load_schema(opt.schema_path);
  const qdt::Dataset data = qdt::load_csv(opt.data_path, schema);
  const qdt::GrowParams params = to_grow_params(opt);

  const auto start = std::chrono::steady_clock::now();
  const qdt::GrownTree tree = qdt::grow_tree(data, params);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();

  const std::string name =
      sanitize_name(opt.name.empty()
                        ? std::filesystem::path(opt.data_path).stem().string()
                        : opt.name);
  const std::string text =
      qdt::serialize_tree(*tree.root, schema, qdt::make_metadata(name, params, tree));
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw qdt::ParseError("cannot write tree file: " + opt.out_path);
  out << text;

  std::cout << "nodes " << qdt::count_nodes(*tree.root) << "\n";
  std::cout << "elapsed_ms " << static_cast<long long>(ms + 0.5) << "\n";
  std::cout << "wrote " << opt.out_path << "\n";
  return 0;
}

int cmd_predict(const std::string& tree_path, const std::string& data_path,
                const std::string& schema_path, const std::string& out_path) {
  const qdt::Schema schema = qdt::load_schema(schema_path);
  const qdt::TreeDocument doc = qdt::parse_tree(read_file(tree_path));
  const qdt::TreeNodePtr tree = qdt::bind_tree(doc, schema);
  // Rows may arrive with or without the class column; an empty file maps to
  // empty output.
  const qdt::Dataset rows =
      qdt::load_csv(data_path, schema, qdt::LoadOptions{false, true});

  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::binary);
    if (!file_out) throw qdt::ParseError("cannot write output file: " + out_path);
    out = &file_out;
  }
  for (std::int64_t row = 0; row < rows.num_rows(); ++row)
    *out << schema.class_labels[qdt::predict(*tree, rows, row)] << "\n";
  return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, bool require_equal) {
  const qdt::TreeDocument reference = qdt::parse_tree(read_file(path_a));
  const qdt::TreeDocument candidate = qdt::parse_tree(read_file(path_b));
  const qdt::ComparisonReport report = qdt::q_tree(reference, candidate);
  std::cout << qdt::format_report(report);
  if (require_equal && report.q != 1.0) return 1;
  return 0;
}

struct ExperimentOptions {
  std::string spec;
  std::string data_dir = "data";
  std::string out_dir = "experiments";
  std::string csv_path;
  std::vector<int> heights;
  std::string split_mode = "multiway";
  int levels = 5, shots = 1024, grid = 16, jobs = 1;
  std::uint64_t seed = 42;
};

int cmd_experiment(const ExperimentOptions& opt) {
  qdt::ExperimentSpec spec;
  if (auto builtin = qdt::builtin_experiment(opt.spec, opt.data_dir)) {
    spec = *builtin;
  } else if (std::filesystem::exists(opt.spec)) {
    spec = qdt::load_experiment_spec(opt.spec);
  } else {
    throw qdt::ParseError("unknown experiment '" + opt.spec +
                          "' (not a builtin name, not a spec file)");
  }
  if (!opt.heights.empty()) spec.heights = opt.heights;
  spec.qaoa.levels = opt.levels;
  spec.qaoa.shots = opt.shots;
  spec.qaoa.seed = opt.seed;
  spec.qaoa.calibration = qdt::RampGrid{opt.grid};
  spec.split_mode = opt.split_mode == "binary" ? qdt::SplitMode::binary_partition
                                               : qdt::SplitMode::paper_multiway;
  spec.jobs = opt.jobs;

  const qdt::ExperimentResult result = qdt::run_experiment(spec, opt.out_dir, &std::cout);
  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path, std::ios::binary);
    if (!csv) throw qdt::ParseError("cannot write csv file: " + opt.csv_path);
    csv << qdt::experiment_csv(result);
  }
  for (const auto& row : result.rows)
    if (!row.ok) return kExitUsage;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twoing decision trees with exhaustive or simulated-QAOA split search"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "grow a tree and write its canonical file");
  train_cmd->add_option("--data", train.data_path, "training data file")->required();
  train_cmd->add_option("--schema", train.schema_path, "schema file")->required();
  train_cmd->add_option("--height", train.height, "maximum tree height h")->required();
  train_cmd->add_option("--backend", train.backend, "exhaustive|qaoa")
      ->check(CLI::IsMember({"exhaustive", "qaoa"}));
  train_cmd->add_option("--split-mode", train.split_mode, "multiway|binary")
      ->check(CLI::IsMember({"multiway", "binary"}));
  train_cmd->add_option("--p", train.levels, "QAOA levels (default 5)");
  train_cmd->add_option("--shots", train.shots, "QAOA shots (default 1024)");
  train_cmd->add_option("--seed", train.seed, "QAOA master seed (default 42)");
  train_cmd->add_option("--grid", train.grid, "angle calibration grid resolution (default 16)");
  train_cmd->add_option("--jobs", train.jobs, "worker threads (default 1)");
  train_cmd->add_option("--out", train.out_path, "output tree file")->required();
  train_cmd->add_option("--name", train.name, "dataset name recorded in the tree header");

  std::string predict_tree, predict_data, predict_schema, predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "classify rows with a tree file");
  predict_cmd->add_option("--tree", predict_tree, "tree file")->required();
  predict_cmd->add_option("--data", predict_data, "rows to classify")->required();
  predict_cmd->add_option("--schema", predict_schema, "schema file")->required();
  predict_cmd->add_option("--out", predict_out, "output file (default stdout)");

  std::string compare_a, compare_b;
  bool require_equal = false;
  auto* compare_cmd = app.add_subcommand("compare", "Q_tree similarity of two tree files");
  compare_cmd->add_option("reference", compare_a, "reference tree file")->required();
  compare_cmd->add_option("candidate", compare_b, "candidate tree file")->required();
  compare_cmd->add_flag("--require-equal", require_equal, "exit 1 unless q = 1.0");

  ExperimentOptions experiment;
  auto* experiment_cmd =
      app.add_subcommand("experiment", "classical-vs-QAOA equality experiment");
  experiment_cmd->add_option("spec", experiment.spec, "builtin name or spec file")->required();
  experiment_cmd->add_option("--data-dir", experiment.data_dir,
                             "directory with <name>.data/.schema (default data)");
  experiment_cmd->add_option("--out-dir", experiment.out_dir,
                             "directory for tree files (default experiments)");
  experiment_cmd->add_option("--heights", experiment.heights, "override the height list");
  experiment_cmd->add_option("--split-mode", experiment.split_mode, "multiway|binary")
      ->check(CLI::IsMember({"multiway", "binary"}));
  experiment_cmd->add_option("--p", experiment.levels, "QAOA levels (default 5)");
  experiment_cmd->add_option("--shots", experiment.shots, "QAOA shots (default 1024)");
  experiment_cmd->add_option("--seed", experiment.seed, "QAOA master seed (default 42)");
  experiment_cmd->add_option("--grid", experiment.grid, "calibration grid (default 16)");
  experiment_cmd->add_option("--jobs", experiment.jobs, "worker threads (default 1)");
  experiment_cmd->add_option("--csv", experiment.csv_path, "also write rows as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train);
    if (predict_cmd->parsed()) return cmd_predict(predict_tree, predict_data, predict_schema,
                                                  predict_out);
    if (compare_cmd->parsed()) return cmd_compare(compare_a, compare_b, require_equal);
    if (experiment_cmd->parsed()) return cmd_experiment(experiment);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

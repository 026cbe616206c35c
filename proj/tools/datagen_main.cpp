// qdt-datagen: writes the bundled benchmark datasets (<name>.schema and
// <name>.data) into a directory. Output is bit-reproducible; see
// qdt/datagen.hpp for what each generator produces.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdt/datagen.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qdt::ParseError("cannot write file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the bundled benchmark datasets"};
  std::string out_dir = "data";
  std::string only;
  app.add_option("--out", out_dir, "output directory (default data)");
  app.add_option("--only", only, "generate a single dataset")
      ->check(CLI::IsMember(qdt::datagen::dataset_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::filesystem::create_directories(out_dir);
    for (const auto& name : qdt::datagen::dataset_names()) {
      if (!only.empty() && name != only) continue;
      const qdt::Dataset ds = qdt::datagen::make_named(name);
      write_file(out_dir + "/" + name + ".schema", qdt::save_schema(ds.schema));
      write_file(out_dir + "/" + name + ".data", qdt::save_csv(ds));
      std::cout << name << ": " << ds.num_rows() << " rows, "
                << ds.schema.num_attributes() << " attributes\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

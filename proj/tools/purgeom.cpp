#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "jobs.hpp"
#include "purgeom/errors.hpp"

using purgeom::cli::Json;

namespace {

Json read_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw purgeom::ParseError("cannot open spec file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw purgeom::ParseError("spec '" + path + "': " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of standard purification: connections, metrics and holonomy"};
  app.require_subcommand(1, 1);
  std::string spec_path, out_path, grid;
  std::uint64_t seed = 0;
  int steps = 0;
  unsigned threads = 0;

  const std::map<std::string, std::string> about = {
      {"convert", "convert between f_s, F, r, k and f on a grid"},
      {"metric", "evaluate a metric on state or purification tangents"},
      {"transport", "parallel transport along a curve of states"},
      {"vn", "von Neumann curves: h_tilde and transported purifications"},
      {"holonomy", "relative phase and holonomy invariants"},
      {"noise", "holonomy of a loop under depolarizing noise"},
      {"selftest", "run the acceptance criteria"}};
  for (const auto& name : purgeom::cli::command_names()) {
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    auto* spec_opt = sub->add_option("--spec", spec_path, "JSON job spec");
    if (name != "selftest") spec_opt->required();
    sub->add_option("--out", out_path, "write the CSV table here");
    sub->add_option("--seed", seed, "seed for random curves");
    sub->add_option("--steps", steps, "integration steps")->check(CLI::NonNegativeNumber);
    sub->add_option("--grid", grid, "function grid lo,hi,n");
    sub->add_option("--threads", threads, "worker threads for sweeps (0: all cores)");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    purgeom::cli::JobOptions options;
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--steps")) options.steps = steps;
    if (sub->count("--grid")) options.grid = grid;
    options.threads = threads;
    const Json spec = spec_path.empty() ? Json::object() : read_spec(spec_path);
    const auto result = purgeom::cli::run_job(command, spec, options);
    if (result.table) {
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw purgeom::ValidationError("cannot write '" + out_path + "'");
        result.table->write_csv(out);
      }
    }
    std::cout << result.report.dump(2) << '\n';
    code = result.exit_code;
  } catch (const std::exception& e) {
    std::cout << purgeom::cli::error_report(command, e).dump(2) << '\n';
    std::cerr << command << ": " << e.what() << '\n';
    code = purgeom::cli::exit_code_for(e);
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cerr << "timing: " << command << " took " << elapsed.count() << " s\n";
  return code;
}

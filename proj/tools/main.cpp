// Command-line front end: scenario runner, Dirichlet demo and alpha sweep.

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "rankone/scenario.hpp"

#include "CLI11.hpp"

namespace {

int dispatch(const std::function<rankone::cli::RunResult()>& job) {
  try {
    const auto result = job();
    std::cout << result.summary;
    for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
    return result.exit_code;
  } catch (const rankone::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const rankone::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-one perturbation analysis of dense symmetric operators"};
  app.require_subcommand(1);
  app.fallthrough();

  rankone::cli::RunOptions opt;
  std::string format;
  app.add_option("--out", opt.out_dir, "Output directory for reports")->capture_default_str();
  app.add_option("--format", format, "Report format: json or csv");
  long long seed = 0;
  bool seed_set = false;
  app.add_option("--seed", seed, "Seed echoed into reports")->each([&](const std::string&) {
    seed_set = true;
  });
  double tol = -1.0;
  app.add_option("--tol", tol, "Override the eigenvalue clustering tolerance");

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  double alpha = 1.0;
  int quad_n = 400;
  auto* demo = app.add_subcommand("demo-dirichlet", "Reproduce the Dirichlet worked example");
  demo->add_option("--alpha", alpha, "Coupling of the rank-one update")->capture_default_str();
  demo->add_option("--n", quad_n, "Quadrature size")->capture_default_str();

  double from = 0.0, to = 2.0;
  int steps = 21, sweep_n = 200;
  auto* sweep = app.add_subcommand("sweep-alpha", "Tabulate case tags and roots against alpha");
  sweep->add_option("--from", from, "First alpha")->required();
  sweep->add_option("--to", to, "Last alpha")->required();
  sweep->add_option("--steps", steps, "Number of alpha samples")->required();
  sweep->add_option("--n", sweep_n, "Quadrature size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!format.empty()) {
    if (format == "json")
      opt.format = rankone::cli::OutputFormat::Json;
    else if (format == "csv")
      opt.format = rankone::cli::OutputFormat::Csv;
    else {
      std::cerr << "input error: --format must be json or csv\n";
      return 1;
    }
  }
  if (seed_set) opt.seed = seed;
  if (tol >= 0.0) opt.cluster_tol = tol;

  if (run->parsed())
    return dispatch([&] {
      const auto sc = rankone::cli::parse_scenario_file(scenario_path);
      return rankone::cli::run_scenario(sc, opt);
    });
  if (demo->parsed())
    return dispatch([&] { return rankone::cli::run_demo_dirichlet(alpha, quad_n, opt); });
  return dispatch([&] { return rankone::cli::run_sweep_alpha(from, to, steps, sweep_n, opt); });
}

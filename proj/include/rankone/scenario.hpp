#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankone/krein.hpp"

// Scenario runner behind the command-line tool: parses problem descriptions,
// executes the requested analyses and writes deterministic reports.
namespace rankone::cli {

enum class ScenarioKind { Matrix, Dirichlet };
enum class Action { Classify, Roots, Verify, SecularCurve };
enum class OutputFormat { Json, Csv };

struct Scenario {
  ScenarioKind kind = ScenarioKind::Matrix;

  // kind == Matrix
  int n = 0;
  Vector entries;  // row-major, n*n
  Vector f;
  double c = 0.0;
  std::vector<double> lambda0;  // empty: classify every cluster

  // kind == Dirichlet
  double alpha = 1.0;
  int quadrature_n = 400;

  std::vector<Action> actions;
  OutputFormat format = OutputFormat::Json;
  long long seed = 0;
};

struct RunOptions {
  std::string out_dir = ".";
  std::optional<OutputFormat> format;  // overrides the scenario
  std::optional<long long> seed;
  std::optional<double> cluster_tol;   // --tol
};

// Exit codes: 0 all requested checks passed, 1 malformed input,
// 2 an oracle comparison failed, 3 numerical failure.
struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files;
  std::string summary;
};

Scenario parse_scenario_json(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

RunResult run_scenario(const Scenario& sc, const RunOptions& opt);

RunResult run_demo_dirichlet(double alpha, int n, const RunOptions& opt);

RunResult run_sweep_alpha(double from, double to, int steps, int n, const RunOptions& opt);

}  // namespace rankone::cli

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speccas/iteration_engine.hpp"
#include "speccas/matrix_io.hpp"

namespace speccas {

enum class OperatorKind { diagonal, dense, jordan_block };

// A fully validated run description: operator, layer cycle, mode, budgets,
// requested checks and the expected outcome.
struct Scenario {
  std::string name;
  OperatorKind operator_kind = OperatorKind::diagonal;
  CVector diagonal_eigenvalues;          // diagonal kind
  CMatrix dense_entries;                 // dense kind
  int jordan_dim = 0;                    // jordan_block kind
  cplx jordan_eigenvalue{};
  std::vector<SchurMap> layers;
  std::optional<CMatrix> conjugator;     // conjugation mode
  IterationMode mode = IterationMode::function_iteration;
  double tolerance = defaults::scenario_tolerance;
  long long max_stages = defaults::scenario_max_stages;
  int cycle_window = defaults::scenario_cycle_window;
  std::vector<std::string> checks;
  std::optional<ContourSpec> contour;
  std::optional<IterationStatus> expect;
  // Optional closed-form cross-check of the composed cycle. When
  // expect_reference_mismatch is set the fixture asserts the composed map
  // does NOT match the declared reference.
  std::optional<SchurMap> reference_map;
  bool expect_reference_mismatch = false;

  int dim() const;
  CMatrix operator_matrix() const;
};

struct CheckResult {
  double residual = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string scenario;
  IterationStatus status = IterationStatus::budget_exhausted;
  int period = 0;
  long long stage = 0;
  std::map<std::string, CheckResult> checks;
  double wall_ms = 0.0;
  std::vector<std::string> emitted_files;
  int exit_code = 0;  // 0 ok, 1 check failed, 2 status mismatch, 3 config error
};

struct RunOptions {
  std::string out_dir = "./out";
  std::string format = "csv";  // trace format: csv or json
  bool emit_files = true;
  std::optional<double> tol_override;
  std::optional<long long> max_stages_override;
};

// Names accepted in a scenario's `checks` list.
const std::vector<std::string>& known_checks();

Scenario parse_scenario(const std::string& document);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

RunReport run_scenario(const Scenario& scenario, const RunOptions& options = {});

// Trace CSV: stage, frobenius_delta, distance_to_final, norm (17 significant
// digits, scientific). Companion eigenvalue table: stage, index, re, im.
void emit_trace(const ConvergenceReport& report, const std::string& path);
void emit_eigenvalues(const ConvergenceReport& report, const std::string& path);
void emit_trace_json(const ConvergenceReport& report, const std::string& path);

Json report_to_json(const RunReport& report);

}  // namespace speccas

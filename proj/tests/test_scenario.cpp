#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "speccas/ensembles.hpp"
#include "speccas/error.hpp"
#include "speccas/scenario.hpp"

using namespace speccas;

namespace {

std::string fixture_dir() { return SPECCAS_SCENARIO_DIR; }

Scenario load_fixture(const std::string& name) {
  return load_scenario(fixture_dir() + "/" + name + ".json");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

RunOptions sandbox_options(const std::string& tag) {
  RunOptions options;
  options.out_dir = (std::filesystem::temp_directory_path() / ("speccas_test_" + tag)).string();
  return options;
}

}  // namespace

TEST_CASE("parse_scenario fills defaults and validates") {
  Scenario s = load_fixture("c4_t05");
  CHECK(s.name == "c4_t05");
  CHECK(s.mode == IterationMode::function_iteration);
  CHECK(s.tolerance == defaults::scenario_tolerance);
  CHECK(s.max_stages == defaults::scenario_max_stages);
  CHECK(s.cycle_window == defaults::scenario_cycle_window);
  CHECK(s.layers.size() == 2);
  CHECK(s.dim() == 3);
  CHECK(s.expect == IterationStatus::converged);
}

TEST_CASE("parse_scenario rejections") {
  auto parse_with = [](const std::string& body) {
    return parse_scenario(body);
  };
  std::string base = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "function_iteration", "layers": [{"kind": "affine", "t": 0.5}]})";
  CHECK_NOTHROW(parse_with(base));

  SUBCASE("out-of-range layer parameter") {
    std::string bad = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "function_iteration", "layers": [{"kind": "affine", "t": 1.5}]})";
    CHECK_THROWS_WITH_AS(parse_with(bad), doctest::Contains("layer rejected"), Error);
  }

  SUBCASE("function iteration without layers") {
    std::string bad = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "function_iteration"})";
    CHECK_THROWS_AS(parse_with(bad), Error);
  }

  SUBCASE("unknown top-level key") {
    std::string bad = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "power", "surprise": 1})";
    CHECK_THROWS_WITH_AS(parse_with(bad), doctest::Contains("unknown field"), Error);
  }

  SUBCASE("unknown check name") {
    std::string bad = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "power", "checks": ["no_such_check"]})";
    CHECK_THROWS_AS(parse_with(bad), Error);
  }

  SUBCASE("oversized operator") {
    std::string head = R"({"name": "x", "operator": {"kind": "jordan_block", "dim": 300, "eigenvalue": [1.0, 0.0]}, "mode": "power"})";
    CHECK_THROWS_AS(parse_with(head), Error);
  }

  SUBCASE("malformed document") {
    CHECK_THROWS_AS(parse_with("{"), Error);
  }

  SUBCASE("contour parsing and validation") {
    std::string with_contour = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "power", "contour": {"center": [1.0, 0.0], "radius": 0.25, "nodes": 32}})";
    Scenario s = parse_with(with_contour);
    REQUIRE(s.contour.has_value());
    CHECK(s.contour->center == cplx(1.0));
    CHECK(s.contour->radius == 0.25);
    CHECK(s.contour->nodes == 32);

    std::string bad_radius = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "power", "contour": {"center": [1.0, 0.0], "radius": 0.0}})";
    CHECK_THROWS_AS(parse_with(bad_radius), Error);
    std::string bad_nodes = R"({"name": "x", "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0]]}, "mode": "power", "contour": {"center": [1.0, 0.0], "radius": 0.25, "nodes": 8}})";
    CHECK_THROWS_AS(parse_with(bad_nodes), Error);
  }
}

TEST_CASE("run options override tolerance and budget") {
  Scenario s = load_fixture("jordan_diverge");
  RunOptions options = sandbox_options("override");
  options.emit_files = false;
  options.max_stages_override = 5;  // too few stages to reach the divergence guard
  RunReport report = run_scenario(s, options);
  CHECK(report.status == IterationStatus::budget_exhausted);
  CHECK(report.exit_code == 2);
}

TEST_CASE("scenario serialization round-trips") {
  for (const std::string name :
       {"c4_t05", "ex41_printed", "ex44_half", "swap_cycle", "jordan_diverge",
        "flip_cesaro"}) {
    Scenario s = load_fixture(name);
    std::string once = serialize_scenario(s);
    Scenario reparsed = parse_scenario(once);
    CHECK(serialize_scenario(reparsed) == once);
  }
}

TEST_CASE("matrix exchange format round-trips") {
  std::mt19937_64 rng(5);
  CMatrix M = random_dense(4, rng);
  CMatrix back = matrix_from_json(matrix_to_json(M));
  CHECK((M - back).norm() == 0.0);

  std::string path = (std::filesystem::temp_directory_path() / "speccas_matrix.json").string();
  save_matrix(M, path);
  CHECK((load_matrix(path) - M).norm() == 0.0);

  CHECK_THROWS_AS(matrix_from_json(Json{{"dim", 2}, {"rows", Json::array()}, {"extra", 1}}),
                  Error);
  // wrong row count
  Json short_rows = matrix_to_json(M);
  short_rows["rows"].erase(0);
  CHECK_THROWS_AS(matrix_from_json(short_rows), Error);
}

TEST_CASE("c4 fixture runs, passes checks and emits deterministic files") {
  Scenario s = load_fixture("c4_t05");
  RunOptions options = sandbox_options("c4");
  std::filesystem::remove_all(options.out_dir);

  RunReport report = run_scenario(s, options);
  CHECK(report.exit_code == 0);
  CHECK(report.status == IterationStatus::converged);
  REQUIRE(report.checks.size() == s.checks.size());
  for (const auto& [name, result] : report.checks) {
    INFO(name);
    CHECK(result.pass);
  }

  std::string trace_path = options.out_dir + "/c4_t05_trace.csv";
  std::string eigs_path = options.out_dir + "/c4_t05_eigs.csv";
  REQUIRE(std::filesystem::exists(trace_path));
  REQUIRE(std::filesystem::exists(eigs_path));

  std::string trace_a = slurp(trace_path);
  CHECK(trace_a.starts_with("stage,frobenius_delta,distance_to_final,norm\n"));

  // Residual column settles into the mu = 2/3 contraction ratio.
  {
    std::vector<double> deltas;
    std::istringstream lines(trace_a);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      size_t first = line.find(',');
      size_t second = line.find(',', first + 1);
      deltas.push_back(std::stod(line.substr(first + 1, second - first - 1)));
    }
    REQUIRE(deltas.size() > 20);
    size_t mid = deltas.size() / 2;
    CHECK(std::abs(deltas[mid + 1] / deltas[mid] - 2.0 / 3.0) < 0.05);
  }

  std::string eigs_a = slurp(eigs_path);
  RunReport second = run_scenario(s, options);
  CHECK(slurp(trace_path) == trace_a);
  CHECK(slurp(eigs_path) == eigs_a);
  CHECK(second.status == report.status);

  // eigenvalue table carries dim rows per recorded stage
  size_t eig_rows = static_cast<size_t>(std::count(eigs_a.begin(), eigs_a.end(), '\n')) - 1;
  size_t trace_rows = static_cast<size_t>(std::count(trace_a.begin(), trace_a.end(), '\n')) - 1;
  CHECK(eig_rows == trace_rows * 3);

  // Reports agree on everything except the wall-clock field.
  Json a = report_to_json(report);
  Json b = report_to_json(second);
  a.erase("wall_ms");
  b.erase("wall_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("counterexample fixtures exit 0 under their declared expectation") {
  SUBCASE("swap conjugation cycles with period 2") {
    RunReport report = run_scenario(load_fixture("swap_cycle"), sandbox_options("swap"));
    CHECK(report.exit_code == 0);
    CHECK(report.status == IterationStatus::cycle);
    CHECK(report.period == 2);
  }

  SUBCASE("the diagonal swap case from the appendix") {
    RunReport report = run_scenario(load_fixture("c5_swap"), sandbox_options("c5"));
    CHECK(report.exit_code == 0);
    CHECK(report.period == 2);
  }

  SUBCASE("jordan block diverges under the parametric cycle") {
    RunReport report = run_scenario(load_fixture("jordan_diverge"), sandbox_options("jordan"));
    CHECK(report.exit_code == 0);
    CHECK(report.status == IterationStatus::diverged);
  }
}

TEST_CASE("remaining fixtures all exit 0") {
  for (const std::string name : {"ex41_recomputed", "ex41_printed", "ex42_t01", "ex42_t09",
                                 "ex43_rational_family", "ex44_power_r05", "ex44_square",
                                 "ex44_half", "flip_cesaro"}) {
    INFO(name);
    RunReport report = run_scenario(load_fixture(name), sandbox_options(name));
    CHECK(report.exit_code == 0);
  }
}

TEST_CASE("the printed-composite fixture flags the mismatch") {
  RunReport report = run_scenario(load_fixture("ex41_printed"), sandbox_options("printed"));
  REQUIRE(report.checks.count("reference_map") == 1);
  CHECK(report.checks.at("reference_map").pass);
  CHECK(report.checks.at("reference_map").residual > 0.1);

  RunReport recomputed =
      run_scenario(load_fixture("ex41_recomputed"), sandbox_options("recomputed"));
  REQUIRE(recomputed.checks.count("reference_map") == 1);
  CHECK(recomputed.checks.at("reference_map").pass);
  CHECK(recomputed.checks.at("reference_map").residual < 1e-9);
}

TEST_CASE("exit codes distinguish status mismatch from check failure") {
  SUBCASE("status mismatch gives exit 2") {
    Scenario s = load_fixture("c4_t05");
    s.expect = IterationStatus::cycle;
    RunOptions options = sandbox_options("mismatch");
    options.emit_files = false;
    CHECK(run_scenario(s, options).exit_code == 2);
  }

  SUBCASE("failing check gives exit 1") {
    Scenario s = load_fixture("ex41_printed");
    s.expect_reference_mismatch = false;  // now the mismatch trips the check
    RunOptions options = sandbox_options("checkfail");
    options.emit_files = false;
    CHECK(run_scenario(s, options).exit_code == 1);
  }
}

TEST_CASE("emit_trace writes one row per recorded stage") {
  ConvergenceReport synthetic;
  synthetic.status = IterationStatus::converged;
  synthetic.limit = CMatrix::Identity(2, 2);
  synthetic.history.push_back(CMatrix::Identity(2, 2));
  synthetic.norm_history.push_back(std::sqrt(2.0));

  std::string path =
      (std::filesystem::temp_directory_path() / "speccas_trace_single.csv").string();
  emit_trace(synthetic, path);
  std::string text = slurp(path);
  CHECK(text == "stage,frobenius_delta,distance_to_final,norm\n"
                "0,0.0000000000000000e+00,0.0000000000000000e+00,1.4142135623730951e+00\n");

  ConvergenceReport empty;
  CHECK_THROWS_AS(emit_trace(empty, path), Error);
}

TEST_CASE("cycle traces alternate with the detected period") {
  Scenario s = load_fixture("swap_cycle");
  RunOptions options = sandbox_options("cycletrace");
  run_scenario(s, options);
  std::string text = slurp(options.out_dir + "/swap_cycle_trace.csv");

  std::vector<double> distance;
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    size_t first = line.find(',');
    size_t second = line.find(',', first + 1);
    size_t third = line.find(',', second + 1);
    distance.push_back(std::stod(line.substr(second + 1, third - second - 1)));
  }
  REQUIRE(distance.size() >= 3);
  // final iterate repeats two stages earlier
  CHECK(distance[distance.size() - 1] == 0.0);
  CHECK(distance[distance.size() - 3] < 1e-12);
  CHECK(distance[distance.size() - 2] > 0.1);
}

TEST_CASE("larger jordan blocks build and power-converge when contractive") {
  std::string body = R"({
    "name": "jordan3_power",
    "operator": {"kind": "jordan_block", "dim": 3, "eigenvalue": [0.5, 0.0]},
    "mode": "power",
    "expect": "converged"
  })";
  RunOptions options = sandbox_options("jordan3");
  options.emit_files = false;
  Scenario s = parse_scenario(body);
  CHECK(s.operator_matrix()(0, 1) == cplx(1.0));
  CHECK(s.operator_matrix()(1, 2) == cplx(1.0));
  CHECK(s.operator_matrix()(0, 2) == cplx(0.0));
  RunReport report = run_scenario(s, options);
  CHECK(report.exit_code == 0);  // powers of a strict contraction vanish
}

TEST_CASE("cesaro scenarios accept layer cycles") {
  std::string body = R"({
    "name": "cesaro_layered",
    "operator": {"kind": "diagonal", "eigenvalues": [[1.0, 0.0], [0.5, 0.0], [0.3, 0.0]]},
    "mode": "cesaro",
    "layers": [{"kind": "affine", "t": 0.5}, {"kind": "blaschke", "t": 0.5}],
    "max_stages": 1099511627776,
    "tolerance": 1e-9,
    "checks": ["limit_properties"],
    "expect": "converged"
  })";
  RunOptions options = sandbox_options("cesaro_layered");
  options.emit_files = false;
  RunReport report = run_scenario(parse_scenario(body), options);
  CHECK(report.exit_code == 0);
  CHECK(report.checks.at("limit_properties").pass);
}

TEST_CASE("json trace format is available") {
  Scenario s = load_fixture("ex44_power_r05");
  RunOptions options = sandbox_options("jsontrace");
  options.format = "json";
  RunReport report = run_scenario(s, options);
  CHECK(report.exit_code == 0);
  std::string text = slurp(options.out_dir + "/ex44_power_r05_trace.json");
  Json doc = Json::parse(text);
  CHECK(doc.is_array());
  CHECK(doc.size() >= 2);
  CHECK(doc[0].contains("frobenius_delta"));
}

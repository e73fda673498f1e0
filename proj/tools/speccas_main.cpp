// Scenario-driven front end: runs iteration scenarios, the two-point
// interpolation solver and the built-in verification batteries.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "speccas/ensembles.hpp"
#include "speccas/error.hpp"
#include "speccas/scenario.hpp"
#include "speccas/schur_interp.hpp"

using namespace speccas;

namespace {

struct GlobalFlags {
  std::string out_dir = "./out";
  std::string format = "csv";
  std::optional<double> tol;
  std::optional<long long> max_stages;
  unsigned long long seed = 0;
};

RunOptions make_options(const GlobalFlags& flags) {
  RunOptions options;
  options.out_dir = flags.out_dir;
  if (const char* env = std::getenv("SPECTRAL_CASCADE_OUT")) options.out_dir = env;
  options.format = flags.format;
  options.tol_override = flags.tol;
  options.max_stages_override = flags.max_stages;
  return options;
}

void print_report(const RunReport& report) {
  std::printf("scenario %s: status=%s stage=%lld", report.scenario.c_str(),
              status_name(report.status), report.stage);
  if (report.status == IterationStatus::cycle) std::printf(" period=%d", report.period);
  std::printf(" wall_ms=%.2f\n", report.wall_ms);
  for (const auto& [name, result] : report.checks)
    std::printf("  check %-22s %-4s residual=%.3e\n", name.c_str(),
                result.pass ? "PASS" : "FAIL", result.residual);
  for (const auto& path : report.emitted_files) std::printf("  wrote %s\n", path.c_str());
}

int run_mode_command(const std::string& path, std::optional<IterationMode> required,
                     const GlobalFlags& flags) {
  Scenario s = load_scenario(path);
  if (required && s.mode != *required) {
    std::fprintf(stderr, "error: scenario mode does not match this subcommand\n");
    return 3;
  }
  RunReport report = run_scenario(s, make_options(flags));
  print_report(report);
  return report.exit_code;
}

int run_riesz_command(const std::string& path, const GlobalFlags& flags) {
  Scenario s = load_scenario(path);
  if (s.mode != IterationMode::function_iteration || s.layers.empty()) {
    std::fprintf(stderr, "error: the riesz command needs a function-iteration scenario\n");
    return 3;
  }
  CMatrix A = s.operator_matrix();
  LayerCycle cycle = LayerCycle::from_layers(s.layers);
  CMatrix image = apply_transform(A, cycle.composite());
  ContourSpec at_1 =
      s.contour ? *s.contour : isolating_contour(eigenvalues_of(image), 1.0);
  RieszProductReport report =
      riesz_product_identity(A, s.layers, at_1, defaults::check_riesz_tol);
  std::printf("scenario %s: riesz product residual=%.3e commutators=%.3e %s\n", s.name.c_str(),
              report.product_residual, report.max_commutator, report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 1;
}

int run_interp_command(double t, const std::string& phi_text) {
  SchurMap phi = SchurMap::polynomial({cplx(1.0)});
  if (!phi_text.empty()) {
    // reuse the scenario layer vocabulary for the parameter
    std::string wrapped = Json{{"name", "phi"},
                               {"operator", Json{{"kind", "diagonal"},
                                                 {"eigenvalues", Json::array({Json::array({1.0, 0.0})})}}},
                               {"mode", "function_iteration"},
                               {"layers", Json::array({Json::parse(phi_text)})}}
                              .dump();
    phi = parse_scenario(wrapped).layers.front();
  }
  SchurSolution solution = solve_two_point({t}, phi);
  InterpolationReport check = verify_interpolation(solution.s, t);
  std::printf("interp t=%g: |s(t)|=%.3e |s(1)-1|=%.3e sup=%.12f %s\n", t,
              check.residual_at_t, check.residual_at_1, check.sup_estimate,
              check.pass ? "PASS" : "FAIL");
  RationalCoeffs rc = to_rational(solution.s);
  std::printf("  num:");
  for (cplx c : rc.num) std::printf(" [%.17g, %.17g]", c.real(), c.imag());
  std::printf("\n  den:");
  for (cplx c : rc.den) std::printf(" [%.17g, %.17g]", c.real(), c.imag());
  std::printf("\n");
  return check.pass ? 0 : 1;
}

int list_scenarios(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) {
    std::fprintf(stderr, "error: no scenario directory at %s\n", dir.c_str());
    return 3;
  }
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    try {
      Scenario s = load_scenario(path);
      std::printf("%-24s dim=%-3d layers=%-2zu expect=%s\n", s.name.c_str(), s.dim(),
                  s.layers.size(), s.expect ? status_name(*s.expect) : "converged");
    } catch (const Error& e) {
      std::printf("%-24s INVALID (%s)\n", path.c_str(), e.what());
    }
  }
  return 0;
}

// ---- verification batteries -------------------------------------------------

using CheckFn = std::function<bool()>;

int run_battery(const std::vector<std::pair<std::string, CheckFn>>& checks) {
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::printf("%-40s FAIL (%s)\n", name.c_str(), e.what());
      ++failures;
      continue;
    }
    std::printf("%-40s %s\n", name.c_str(), ok ? "PASS" : "FAIL");
    if (!ok) ++failures;
  }
  return failures;
}

LayerCycle verify_cycle(double t) {
  return LayerCycle::from_layers({SchurMap::affine(t), SchurMap::blaschke(t)});
}

std::vector<std::pair<std::string, CheckFn>> scalar_battery(unsigned long long seed) {
  return {
      {"scalar/closed_form_agreement",
       [] {
         for (double t : {0.1, 0.5, 0.9}) {
           LayerCycle cycle = verify_cycle(t);
           for (int k = 0; k < 64; ++k) {
             cplx z = (0.1 + 0.8 * (k % 8) / 7.0) * std::polar(1.0, 2.0 * std::numbers::pi * k / 64);
             ScalarTrace trace = iterate_scalar(cycle, z, 1e-300, 40);
             for (int m = 0; m < static_cast<int>(trace.values.size()); ++m)
               if (std::abs(trace.values[m] - closed_form_param_iterate(t, m, z)) >= 1e-12)
                 return false;
           }
         }
         return true;
       }},
      {"scalar/dichotomy",
       [seed] {
         std::mt19937_64 rng(seed);
         std::uniform_real_distribution<double> radius(0.0, 1.0), angle(0.0, 2.0 * std::numbers::pi);
         LayerCycle cycle = verify_cycle(0.5);
         if (classify_limit(iterate_scalar(cycle, 1.0, 1e-12, 5000), 1e-9).tag !=
             LimitClass::Tag::one)
           return false;
         for (int k = 0; k < 50; ++k) {
           cplx z = std::sqrt(radius(rng)) * std::polar(1.0, angle(rng));
           if (classify_limit(iterate_scalar(cycle, z, 1e-12, 5000), 1e-9).tag !=
               LimitClass::Tag::zero)
             return false;
         }
         return true;
       }},
      {"scalar/schur_bound",
       [] {
         return verify_schur_bound(SchurMap::blaschke(0.5)).pass &&
                !verify_schur_bound(SchurMap::polynomial({cplx(0.0), cplx(2.0)})).pass;
       }},
      {"scalar/peripheral_fixed_points",
       [] {
         FppReport report = verify_peripheral_fpp(SchurMap::blaschke(0.5));
         for (const auto& violation : report.violations)
           if (std::abs(violation.point - cplx(0.0, 1.0)) < 1e-12 &&
               std::abs(violation.image - cplx(-0.8, 0.6)) < 1e-12)
             return true;
         return false;
       }},
      {"scalar/attracting_points",
       [] {
         LayerCycle interior = verify_cycle(0.5);
         DenjoyWolffEstimate a = denjoy_wolff(interior, 1e-12, 5000);
         LayerCycle boundary =
             LayerCycle::from_layers({SchurMap::polynomial({cplx(0.5), cplx(0.5)})});
         DenjoyWolffEstimate b = denjoy_wolff(boundary, 1e-12, 5000);
         return a.interior && std::abs(a.point) < 1e-9 && !b.interior &&
                std::abs(b.point - 1.0) < 1e-9;
       }},
  };
}

std::vector<std::pair<std::string, CheckFn>> matrix_battery(unsigned long long seed) {
  return {
      {"matrix/borel_indicator",
       [] {
         CMatrix A = CMatrix::Zero(2, 2);
         A(0, 0) = 1.0;
         A(1, 1) = 0.5;
         CMatrix P = apply_borel(diagonalize_normal(A), ScalarFn([](cplx z) {
                                   return std::abs(z - 1.0) < 1e-9 ? cplx(1.0) : cplx(0.0);
                                 }));
         return (P - spectral_projection(diagonalize_normal(A),
                                         SpectralSet::explicit_points({cplx(1.0)}, 1e-8)))
                    .norm() < 1e-12;
       }},
      {"matrix/contour_vs_eigenbasis",
       [seed] {
         std::mt19937_64 rng(seed + 1);
         for (int trial = 0; trial < 5; ++trial) {
           NormalOperator A = random_normal_with_one(rng);
           CMatrix M = A.reconstruct();
           SchurMap f = compose_cycle({SchurMap::affine(0.4), SchurMap::blaschke(0.4)});
           CMatrix via_contour = contour_calculus(M, f, enclosing_contour(eigenvalues_of(M)));
           if ((via_contour - apply_borel(A, f)).norm() >= 1e-8) return false;
         }
         return true;
       }},
      {"matrix/riesz_isolated_point",
       [] {
         CMatrix A = CMatrix::Zero(2, 2);
         A(0, 0) = 1.0;
         A(1, 1) = 0.5;
         CMatrix expected = CMatrix::Zero(2, 2);
         expected(0, 0) = 1.0;
         return (riesz_projection(A, ContourSpec{1.0, 0.2, 32}) - expected).norm() < 1e-10;
       }},
      {"matrix/ritt_bounds",
       [] {
         CMatrix A = CMatrix::Zero(2, 2);
         A(0, 0) = 1.0;
         A(1, 1) = 0.5;
         CMatrix J(2, 2);
         J << cplx(1.0), cplx(1.0), cplx(0.0), cplx(1.0);
         RittReport good = ritt_constant(A);
         RittReport bad = ritt_constant(J);
         return good.is_ritt && std::abs(good.estimate - 1.0) < 0.05 && !bad.is_ritt;
       }},
      {"matrix/power_growth_of_jordan_block",
       [] {
         CMatrix J(2, 2);
         J << cplx(1.0), cplx(1.0), cplx(0.0), cplx(1.0);
         PowerBoundReport report = power_bound_estimate(J, 100);
         double ratio = report.norms[99] / 100.0;
         return ratio > 0.9 && ratio < 1.1;
       }},
      {"matrix/spectral_mapping",
       [seed] {
         std::mt19937_64 rng(seed + 2);
         NormalOperator A = random_normal_with_one(rng);
         for (int m : {1, 5, 20}) {
           ScalarFn g = [m](cplx z) { return closed_form_param_iterate(0.5, m, z); };
           if (multiset_distance(spectrum_image(A, g), eigenvalues_of(apply_borel(A, g))) >= 1e-8)
             return false;
         }
         return true;
       }},
  };
}

std::vector<std::pair<std::string, CheckFn>> engine_battery(unsigned long long seed) {
  return {
      {"engine/projection_limit",
       [seed] {
         std::mt19937_64 rng(seed + 3);
         LayerCycle cycle = verify_cycle(0.5);
         IterationConfig config;
         config.mode = IterationMode::function_iteration;
         for (int trial = 0; trial < 5; ++trial) {
           NormalOperator A = random_normal_with_one(rng);
           ConvergenceReport report = iterate_operator(A, cycle, config);
           if (report.status != IterationStatus::converged) return false;
           CMatrix expected = spectral_projection(
               A, SpectralSet::characteristic_of_limit(cycle, LimitClass::Tag::one));
           if ((*report.limit - expected).norm() >= 1e-8) return false;
           if (!stage_omega_check(*report.limit, cycle, 1e-8).pass) return false;
         }
         return true;
       }},
      {"engine/cesaro_flip",
       [] {
         CMatrix T = CMatrix::Zero(2, 2);
         T(0, 0) = 1.0;
         T(1, 1) = -1.0;
         ConvergenceReport report = cesaro_projection(T, 1e-10, 100000);
         CMatrix expected = CMatrix::Zero(2, 2);
         expected(0, 0) = 1.0;
         return report.status == IterationStatus::converged &&
                (*report.limit - expected).norm() < 1e-6;
       }},
      {"engine/power_rate",
       [] {
         CMatrix T = CMatrix::Zero(2, 2);
         T(0, 0) = 1.0;
         T(1, 1) = 0.5;
         CMatrix P = CMatrix::Zero(2, 2);
         P(0, 0) = 1.0;
         CMatrix power = CMatrix::Identity(2, 2);
         for (int n = 1; n <= 40; ++n) {
           power = power * T;
           if (std::abs(operator_two_norm(power - P) - std::pow(0.5, n)) >= 1e-12) return false;
         }
         return true;
       }},
      {"engine/swap_cycle",
       [] {
         CMatrix S(2, 2), J(2, 2);
         S << cplx(0.0), cplx(1.0), cplx(1.0), cplx(0.0);
         J << cplx(1.0), cplx(1.0), cplx(0.0), cplx(1.0);
         IterationConfig config;
         config.mode = IterationMode::conjugation_cycle;
         ConvergenceReport report = conjugation_cycle(J, S, config);
         return report.status == IterationStatus::cycle && report.period == 2;
       }},
      {"engine/jordan_divergence",
       [] {
         CMatrix J(2, 2);
         J << cplx(1.0), cplx(1.0), cplx(0.0), cplx(1.0);
         IterationConfig config;
         config.mode = IterationMode::function_iteration;
         config.record_history = true;
         ConvergenceReport report = iterate_operator(J, verify_cycle(0.5), config);
         if (report.status != IterationStatus::diverged) return false;
         size_t m = report.history.size() - 2;
         double ratio =
             std::abs(report.history[m](0, 1)) / std::abs(report.history[m - 1](0, 1));
         return std::abs(ratio - 1.5) < 0.015;
       }},
      {"engine/riesz_product",
       [seed] {
         std::mt19937_64 rng(seed + 4);
         for (int trial = 0; trial < 5; ++trial) {
           NormalOperator A = random_normal_with_one(rng);
           CMatrix M = A.reconstruct();
           std::vector<SchurMap> layers = random_admissible_layers(rng);
           CMatrix image = apply_transform(M, compose_cycle(layers));
           RieszProductReport report = riesz_product_identity(
               M, layers, isolating_contour(eigenvalues_of(image), 1.0), 1e-6);
           if (!report.pass) return false;
         }
         return true;
       }},
      {"engine/joint_fixed_space",
       [seed] {
         std::mt19937_64 rng(seed + 5);
         LayerCycle cycle = verify_cycle(0.5);
         for (int trial = 0; trial < 5; ++trial) {
           NormalOperator A = random_normal_with_one(rng);
           CMatrix M = A.reconstruct();
           if (!boundary_separation_check(cycle.layers()).pass()) return false;
           std::vector<CMatrix> transformed;
           for (const auto& layer : cycle.layers())
             transformed.push_back(apply_transform(M, layer));
           double angle = subspace_angle(joint_fixed_space(transformed).basis,
                                         fixed_space(apply_transform(M, cycle.composite())).basis);
           if (angle >= 1e-8) return false;
         }
         return true;
       }},
  };
}

int run_verify(const std::string& suite, unsigned long long seed) {
  std::vector<std::pair<std::string, CheckFn>> checks;
  auto append = [&](std::vector<std::pair<std::string, CheckFn>> more) {
    for (auto& item : more) checks.push_back(std::move(item));
  };
  if (suite == "all" || suite == "scalar") append(scalar_battery(seed));
  if (suite == "all" || suite == "matrix") append(matrix_battery(seed));
  if (suite == "all" || suite == "engine") append(engine_battery(seed));
  if (checks.empty()) {
    std::fprintf(stderr, "error: unknown suite %s\n", suite.c_str());
    return 3;
  }
  int failures = run_battery(checks);
  std::printf("%d/%zu checks passed\n", static_cast<int>(checks.size()) - failures,
              checks.size());
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral-cascade: layered transforms, spectral projections and their limits"};
  app.require_subcommand(1);
  // allow the shared flags to appear after the subcommand name
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--out", flags.out_dir, "output directory for traces and reports");
  app.add_option("--tol", flags.tol, "override the scenario tolerance");
  app.add_option("--max-stages", flags.max_stages, "override the scenario stage budget");
  app.add_option("--seed", flags.seed, "seed for randomized verification suites");
  app.add_option("--format", flags.format, "trace format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string scenario_path;
  auto* iterate_cmd = app.add_subcommand("iterate", "run a scenario in its declared mode");
  iterate_cmd->add_option("scenario", scenario_path, "scenario file")->required();
  auto* power_cmd = app.add_subcommand("power", "run a power-iteration scenario");
  power_cmd->add_option("scenario", scenario_path, "scenario file")->required();
  auto* cesaro_cmd = app.add_subcommand("cesaro", "run an averaged-power scenario");
  cesaro_cmd->add_option("scenario", scenario_path, "scenario file")->required();
  auto* riesz_cmd = app.add_subcommand("riesz", "layerwise projection product check");
  riesz_cmd->add_option("scenario", scenario_path, "scenario file")->required();

  double interp_t = 0.5;
  std::string phi_text;
  auto* interp_cmd = app.add_subcommand("interp", "two-point interpolation in the disk");
  interp_cmd->add_option("--t", interp_t, "interior node in (0,1)")->required();
  interp_cmd->add_option("--phi", phi_text, "parameter map as a layer descriptor (json)");

  std::string suite = "all";
  auto* verify_cmd = app.add_subcommand("verify", "run built-in verification batteries");
  verify_cmd->add_option("--suite", suite, "all, scalar, matrix or engine")
      ->check(CLI::IsMember({"all", "scalar", "matrix", "engine"}));

  std::string list_dir = "./scenarios";
  bool list_flag = false;
  auto* scenario_cmd = app.add_subcommand("scenario", "inspect shipped scenarios");
  scenario_cmd->add_flag("--list", list_flag, "list scenario files");
  scenario_cmd->add_option("--dir", list_dir, "scenario directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (iterate_cmd->parsed())  // generic runner: any declared mode
      return run_mode_command(scenario_path, std::nullopt, flags);
    if (power_cmd->parsed())
      return run_mode_command(scenario_path, IterationMode::power_iteration, flags);
    if (cesaro_cmd->parsed()) return run_mode_command(scenario_path, IterationMode::cesaro, flags);
    if (riesz_cmd->parsed()) return run_riesz_command(scenario_path, flags);
    if (interp_cmd->parsed()) return run_interp_command(interp_t, phi_text);
    if (verify_cmd->parsed()) return run_verify(suite, flags.seed);
    if (scenario_cmd->parsed()) return list_scenarios(list_dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 3;
  }
  return 3;
}

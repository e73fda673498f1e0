#include "speccas/iteration_engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "speccas/error.hpp"

namespace speccas {

namespace {

constexpr double riesz_near_tol = 1e-4;  // enclosed eigenvalues must sit this close to 1

// Shared stop logic: consecutive sub-tol deltas mean convergence, a window
// match with the step still large means a cycle, a norm blow-up means
// divergence. Period-1 "cycles" are convergence and never reported as cycles.
class StopTracker {
 public:
  StopTracker(double tol, int window) : tol_(tol), window_(window) {}

  enum class Verdict { keep_going, converged, cycle, diverged };
  struct Outcome {
    Verdict verdict = Verdict::keep_going;
    int period = 0;
    double period_residual = 0.0;
  };

  template <typename DistBack>
  Outcome observe(double delta, double norm, int available_back, DistBack&& dist_back) {
    Outcome out;
    if (norm > defaults::diverge_norm) {
      out.verdict = Verdict::diverged;
      return out;
    }
    hits_ = (delta < tol_) ? hits_ + 1 : 0;
    if (hits_ >= defaults::op_consecutive) {
      out.verdict = Verdict::converged;
      return out;
    }
    // A period partner must sit far below the step size; otherwise slow
    // geometric convergence would alias as a cycle.
    if (delta >= tol_) {
      int max_back = std::min(window_, available_back);
      for (int back = 2; back <= max_back; ++back) {
        double d = dist_back(back);
        if (d < defaults::cycle_tol && d < 1e-3 * delta) {
          out.verdict = Verdict::cycle;
          out.period = back;
          out.period_residual = d;
          return out;
        }
      }
    }
    return out;
  }

 private:
  double tol_;
  int window_;
  int hits_ = 0;
};

// Generic matrix iteration driver.
ConvergenceReport run_matrix_iteration(const CMatrix& initial,
                                       const std::function<CMatrix(const CMatrix&)>& step,
                                       const IterationConfig& config, bool track_eigenvalues) {
  ConvergenceReport report;
  report.norm_history.push_back(initial.norm());
  if (config.record_history) report.history.push_back(initial);

  auto record_eigs = [&](const CMatrix& X) {
    if (!track_eigenvalues) return;
    auto eigs = eigenvalues_of(X);
    CVector v(static_cast<int>(eigs.size()));
    for (size_t i = 0; i < eigs.size(); ++i) v(static_cast<int>(i)) = eigs[i];
    report.eigenvalue_history.push_back(v);
  };
  record_eigs(initial);

  std::deque<CMatrix> window;
  window.push_back(initial);
  StopTracker tracker(config.tol, config.cycle_window);
  CMatrix current = initial;

  for (long long m = 1; m <= config.max_stages; ++m) {
    CMatrix next = step(current);
    double delta = (next - current).norm();
    report.residual_history.push_back(delta);
    report.norm_history.push_back(next.norm());
    if (config.record_history) report.history.push_back(next);
    record_eigs(next);

    window.push_back(next);
    while (static_cast<int>(window.size()) > config.cycle_window + 1) window.pop_front();

    auto outcome = tracker.observe(delta, next.norm(), static_cast<int>(window.size()) - 1,
                                   [&](int back) {
                                     return (next - window[window.size() - 1 - back]).norm();
                                   });
    current = next;

    switch (outcome.verdict) {
      case StopTracker::Verdict::converged:
        report.status = IterationStatus::converged;
        report.stage = std::max<long long>(0, m - defaults::op_consecutive);
        report.limit = current;
        return report;
      case StopTracker::Verdict::cycle:
        report.status = IterationStatus::cycle;
        report.period = outcome.period;
        report.stage = m;
        report.check_results["periodicity_residual"] = outcome.period_residual;
        return report;
      case StopTracker::Verdict::diverged:
        report.status = IterationStatus::diverged;
        report.stage = m;
        return report;
      case StopTracker::Verdict::keep_going:
        break;
    }
  }
  report.status = IterationStatus::budget_exhausted;
  report.stage = config.max_stages;
  return report;
}

}  // namespace

const char* status_name(IterationStatus status) {
  switch (status) {
    case IterationStatus::converged: return "converged";
    case IterationStatus::cycle: return "cycle";
    case IterationStatus::diverged: return "diverged";
    case IterationStatus::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

ConvergenceReport iterate_operator(const NormalOperator& A, const LayerCycle& cycle,
                                   const IterationConfig& config) {
  if (config.mode != IterationMode::function_iteration)
    raise(errc::validation_error, "iterate_operator requires function-iteration mode");

  // Eigenvalues evolve under the composite in the fixed eigenbasis; all
  // matrix-level norms equal the corresponding eigenvalue-vector norms.
  ConvergenceReport report;
  CVector current = A.eigenvalues;
  report.norm_history.push_back(current.norm());
  report.eigenvalue_history.push_back(current);
  if (config.record_history)
    report.history.push_back(A.eigenbasis * current.asDiagonal() * A.eigenbasis.adjoint());

  std::deque<CVector> window;
  window.push_back(current);
  StopTracker tracker(config.tol, config.cycle_window);

  auto finish = [&](const CVector& v) {
    return CMatrix(A.eigenbasis * v.asDiagonal() * A.eigenbasis.adjoint());
  };

  for (long long m = 1; m <= config.max_stages; ++m) {
    CVector next(A.dim);
    for (int i = 0; i < A.dim; ++i) next(i) = eval_map(cycle.composite(), current(i));
    double delta = (next - current).norm();
    report.residual_history.push_back(delta);
    report.norm_history.push_back(next.norm());
    report.eigenvalue_history.push_back(next);
    if (config.record_history) report.history.push_back(finish(next));

    window.push_back(next);
    while (static_cast<int>(window.size()) > config.cycle_window + 1) window.pop_front();

    auto outcome = tracker.observe(delta, next.norm(), static_cast<int>(window.size()) - 1,
                                   [&](int back) {
                                     return (next - window[window.size() - 1 - back]).norm();
                                   });
    current = next;

    switch (outcome.verdict) {
      case StopTracker::Verdict::converged:
        report.status = IterationStatus::converged;
        report.stage = std::max<long long>(0, m - defaults::op_consecutive);
        report.limit = finish(current);
        return report;
      case StopTracker::Verdict::cycle:
        report.status = IterationStatus::cycle;
        report.period = outcome.period;
        report.stage = m;
        report.check_results["periodicity_residual"] = outcome.period_residual;
        return report;
      case StopTracker::Verdict::diverged:
        report.status = IterationStatus::diverged;
        report.stage = m;
        return report;
      case StopTracker::Verdict::keep_going:
        break;
    }
  }
  report.status = IterationStatus::budget_exhausted;
  report.stage = config.max_stages;
  return report;
}

ConvergenceReport iterate_operator(const CMatrix& A, const LayerCycle& cycle,
                                   const IterationConfig& config) {
  if (config.mode != IterationMode::function_iteration)
    raise(errc::validation_error, "iterate_operator requires function-iteration mode");
  if (A.rows() != A.cols() || A.rows() == 0)
    raise(errc::incompatible_dims, "operator must be square");

  auto step = [&cycle](const CMatrix& X) {
    ContourSpec contour = enclosing_contour(eigenvalues_of(X));
    return contour_calculus(X, cycle.composite(), contour);
  };
  return run_matrix_iteration(A, step, config, /*track_eigenvalues=*/true);
}

ConvergenceReport power_limit(const CMatrix& T, double tol, long long max_n,
                              const IterationConfig& config) {
  if (T.rows() != T.cols() || T.rows() == 0)
    raise(errc::incompatible_dims, "operator must be square");
  if (max_n < 1) raise(errc::param_out_of_range, "max_n must be at least 1");

  IterationConfig local = config;
  local.tol = tol;
  local.max_stages = max_n;
  auto step = [&T](const CMatrix& X) { return CMatrix(X * T); };
  CMatrix identity = CMatrix::Identity(T.rows(), T.cols());
  return run_matrix_iteration(identity, step, local, local.record_history);
}

ConvergenceReport cesaro_projection(const CMatrix& T, double tol, long long max_N,
                                    bool record_history) {
  if (T.rows() != T.cols() || T.rows() == 0)
    raise(errc::incompatible_dims, "operator must be square");
  if (max_N < 2) raise(errc::param_out_of_range, "max_N must be at least 2");

  PowerBoundReport probe = power_bound_estimate(T, defaults::cesaro_power_check);
  if (probe.overflowed || probe.sup >= defaults::cesaro_power_limit)
    raise(errc::not_power_bounded, "power bound probe exceeded the limit");

  int n = static_cast<int>(T.rows());
  ConvergenceReport report;
  CMatrix average = CMatrix::Identity(n, n);  // S_1
  CMatrix power = T;                          // T^N at checkpoint N
  bool power_frozen = false;
  double prev_power_delta = std::numeric_limits<double>::infinity();
  long long N = 1;
  report.norm_history.push_back(average.norm());
  if (record_history) report.history.push_back(average);

  while (2 * N <= max_N) {
    CMatrix doubled = 0.5 * (average + power * average);  // S_2N
    double delta = (doubled - average).norm();
    report.residual_history.push_back(delta);
    report.norm_history.push_back(doubled.norm());
    if (record_history) report.history.push_back(doubled);
    average = doubled;
    N *= 2;

    if (average.norm() > defaults::diverge_norm || power.norm() > defaults::diverge_norm) {
      report.status = IterationStatus::diverged;
      report.stage = N;
      return report;
    }
    if (delta < tol) {
      report.status = IterationStatus::converged;
      report.stage = N;
      report.limit = average;
      report.check_results["left_absorption"] = (average * T - average).norm();
      report.check_results["right_absorption"] = (T * average - average).norm();
      return report;
    }
    // T^2N by squaring, frozen once the powers are numerically stationary;
    // squaring a stationary power otherwise amplifies rounding linearly in N.
    // A tiny delta that starts growing again marks the rounding-drift regime,
    // which is the other stationarity signature.
    if (!power_frozen) {
      CMatrix squared = power * power;
      double scale = std::max(1.0, power.norm());
      double power_delta = (squared - power).norm();
      if (power_delta < 1e-12 * scale ||
          (power_delta < 1e-8 * scale && power_delta > prev_power_delta)) {
        power_frozen = true;
      } else {
        power = squared;
        prev_power_delta = power_delta;
      }
    }
  }
  report.status = IterationStatus::budget_exhausted;
  report.stage = N;
  return report;
}

SubspaceBasis fixed_space(const CMatrix& T, double rank_tol) {
  if (T.rows() != T.cols() || T.rows() == 0)
    raise(errc::incompatible_dims, "operator must be square");
  int n = static_cast<int>(T.rows());
  CMatrix M = CMatrix::Identity(n, n) - T;

  Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
  double sigma_max = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;

  SubspaceBasis out;
  out.rank_tol = rank_tol;
  if (sigma_max == 0.0) {  // T = I: the whole space is fixed
    out.dim = n;
    out.basis = CMatrix::Identity(n, n);
    return out;
  }
  int kernel_dim = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < rank_tol * sigma_max) ++kernel_dim;
  out.dim = kernel_dim;
  out.basis = svd.matrixV().rightCols(kernel_dim);
  return out;
}

SubspaceBasis joint_fixed_space(const std::vector<CMatrix>& layers, double rank_tol) {
  if (layers.empty()) raise(errc::param_out_of_range, "need at least one layer");
  int n = static_cast<int>(layers.front().rows());
  for (const auto& T : layers)
    if (T.rows() != n || T.cols() != n)
      raise(errc::incompatible_dims, "layers must share a common square dimension");

  CMatrix stacked(static_cast<int>(layers.size()) * n, n);
  for (size_t k = 0; k < layers.size(); ++k)
    stacked.middleRows(static_cast<int>(k) * n, n) = CMatrix::Identity(n, n) - layers[k];

  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  double sigma_max = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;

  SubspaceBasis out;
  out.rank_tol = rank_tol;
  if (sigma_max == 0.0) {
    out.dim = n;
    out.basis = CMatrix::Identity(n, n);
    return out;
  }
  int kernel_dim = n - static_cast<int>(svd.singularValues().size());
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < rank_tol * sigma_max) ++kernel_dim;
  out.dim = kernel_dim;
  out.basis = svd.matrixV().rightCols(kernel_dim);
  return out;
}

double subspace_angle(const CMatrix& U1, const CMatrix& U2) {
  if (U1.cols() != U2.cols()) return std::numbers::pi / 2.0;
  if (U1.cols() == 0) return 0.0;
  if (U1.rows() != U2.rows()) raise(errc::incompatible_dims, "ambient dimensions differ");

  auto residual_sine = [](const CMatrix& A, const CMatrix& B) {
    CMatrix proj = B - A * (A.adjoint() * B);
    return operator_two_norm(proj);
  };
  double s = std::max(residual_sine(U1, U2), residual_sine(U2, U1));
  return std::asin(std::clamp(s, 0.0, 1.0));
}

std::map<std::string, double> check_limit_properties(const CMatrix& P, const CMatrix& A,
                                                     double tol) {
  if (P.rows() != A.rows() || P.cols() != A.cols())
    raise(errc::incompatible_dims, "limit and operator dimensions differ");
  (void)tol;

  std::map<std::string, double> residuals;
  residuals["idempotency"] = (P * P - P).norm();
  residuals["commutation"] = (P * A - A * P).norm();
  residuals["hermitian"] = (P - P.adjoint()).norm();
  double worst = 0.0;
  for (cplx lambda : eigenvalues_of(P))
    worst = std::max(worst, std::min(std::abs(lambda), std::abs(lambda - 1.0)));
  residuals["spectrum_01"] = worst;
  return residuals;
}

CMatrix apply_transform(const CMatrix& A, const SchurMap& map) {
  try {
    return apply_borel(diagonalize_normal(A), map);
  } catch (const Error& e) {
    if (e.code() != errc::not_normal) throw;
  }
  return contour_calculus(A, map, enclosing_contour(eigenvalues_of(A)));
}

RieszProductReport riesz_product_identity(const CMatrix& A, const std::vector<SchurMap>& layers,
                                          const ContourSpec& contour_at_1, double tol) {
  if (layers.empty()) raise(errc::param_out_of_range, "need at least one layer");

  auto check_isolation = [](const std::vector<cplx>& eigs, const ContourSpec& contour) {
    for (cplx lambda : eigs) {
      double dist_to_center = std::abs(lambda - contour.center);
      if (dist_to_center < contour.radius - defaults::gap_tol &&
          std::abs(lambda - cplx(1.0)) > riesz_near_tol)
        raise(errc::isolation_failed, "a non-unit eigenvalue falls inside the circle");
    }
  };

  std::vector<CMatrix> projections;
  for (const auto& layer : layers) {
    CMatrix transformed = apply_transform(A, layer);
    auto eigs = eigenvalues_of(transformed);
    ContourSpec gamma = isolating_contour(eigs, 1.0);
    check_isolation(eigs, gamma);
    projections.push_back(riesz_projection(transformed, gamma));
  }

  CMatrix composite_image = apply_transform(A, compose_cycle(layers));
  check_isolation(eigenvalues_of(composite_image), contour_at_1);
  CMatrix p_psi = riesz_projection(composite_image, contour_at_1);

  CMatrix product = projections.front();
  for (size_t k = 1; k < projections.size(); ++k) product = projections[k] * product;

  RieszProductReport report;
  report.product_residual = (p_psi - product).norm();
  for (size_t i = 0; i < projections.size(); ++i)
    for (size_t j = i + 1; j < projections.size(); ++j)
      report.max_commutator = std::max(
          report.max_commutator,
          (projections[i] * projections[j] - projections[j] * projections[i]).norm());
  report.pass = report.product_residual < tol && report.max_commutator < tol;
  return report;
}

OmegaCheck stage_omega_check(const CMatrix& P, const LayerCycle& cycle, double tol) {
  CMatrix next = apply_transform(P, cycle.composite());
  OmegaCheck check;
  check.residual = (next - P).norm();
  check.pass = check.residual < tol;
  return check;
}

ConvergenceReport conjugation_cycle(const CMatrix& A, const CMatrix& S,
                                    const IterationConfig& config) {
  if (config.mode != IterationMode::conjugation_cycle)
    raise(errc::validation_error, "conjugation_cycle requires conjugation mode");
  if (A.rows() != A.cols() || S.rows() != S.cols() || A.rows() != S.rows())
    raise(errc::incompatible_dims, "operator and conjugator dimensions differ");

  Eigen::FullPivLU<CMatrix> lu(S);
  if (!lu.isInvertible()) raise(errc::singular_conjugator, "conjugator is singular");
  CMatrix s_inv = lu.inverse();
  if (operator_two_norm(S) * operator_two_norm(s_inv) >= defaults::conjugator_cond_limit)
    raise(errc::singular_conjugator, "conjugator condition estimate too large");

  auto step = [&S, &s_inv](const CMatrix& X) { return CMatrix(S * X * s_inv); };
  return run_matrix_iteration(A, step, config, config.record_history);
}

SeparationReport boundary_separation_check(const std::vector<SchurMap>& layers, int angular) {
  if (angular < 256) raise(errc::param_out_of_range, "angular resolution below 256");
  SchurMap composite = compose_cycle(layers);

  SeparationReport report;
  for (int k = 0; k < angular; ++k) {
    cplx lambda = std::polar(1.0, 2.0 * std::numbers::pi * k / angular);
    cplx image;
    try {
      image = eval_map(composite, lambda);
    } catch (const Error&) {
      continue;  // poles on the circle cannot be composite-fixed
    }
    if (std::abs(image - lambda) >= defaults::separation_composite_tol) continue;

    ++report.composite_fixed_samples;
    for (size_t j = 0; j < layers.size(); ++j) {
      cplx layer_image = eval_map(layers[j], lambda);
      if (std::abs(layer_image - lambda) >= defaults::separation_layer_tol)
        report.violations.push_back({lambda, static_cast<int>(j), layer_image});
    }
  }
  return report;
}

}  // namespace speccas

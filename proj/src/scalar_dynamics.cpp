#include "speccas/scalar_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "speccas/error.hpp"

namespace speccas {

namespace {

// Shared evaluation grid over the closed disk: `points` samples spread over
// radii and angles, plus the center and the boundary point 1.
std::vector<cplx> disk_grid(int points) {
  std::vector<cplx> grid;
  grid.reserve(points + 2);
  grid.push_back(0.0);
  grid.push_back(1.0);
  int rings = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(points) / 2.0)));
  int per_ring = std::max(4, points / rings);
  for (int j = 1; j <= rings && static_cast<int>(grid.size()) < points + 2; ++j) {
    double r = static_cast<double>(j) / rings;
    for (int k = 0; k < per_ring && static_cast<int>(grid.size()) < points + 2; ++k) {
      double theta = 2.0 * std::numbers::pi * (k + 0.5 * (j % 2)) / per_ring;
      grid.push_back(r * std::polar(1.0, theta));
    }
  }
  return grid;
}

}  // namespace

SchurMap compose_cycle(const std::vector<SchurMap>& layers) {
  if (layers.empty()) raise(errc::empty_cycle, "cycle needs at least one layer");
  SchurMap composite = SchurMap::composition(layers);
  for (cplx z : disk_grid(defaults::compose_grid_points)) {
    cplx seq = z;
    for (const auto& layer : layers) seq = eval_map(layer, seq);
    if (std::abs(eval_map(composite, z) - seq) > defaults::compose_grid_tol)
      raise(errc::solver_failure, "composite disagrees with sequential evaluation");
  }
  return composite;
}

LayerCycle LayerCycle::from_layers(std::vector<SchurMap> layers) {
  if (layers.empty()) raise(errc::empty_cycle, "cycle needs at least one layer");
  for (const auto& layer : layers) {
    BoundReport bound = verify_schur_bound(layer);
    if (!bound.pass)
      raise(errc::not_schur, "layer violates the sup bound (estimate " +
                                 std::to_string(bound.sup_estimate) + ")");
    if (std::abs(eval_map(layer, 1.0) - 1.0) > defaults::layer_fixes_one_tol)
      raise(errc::validation_error, "layer does not fix 1");
  }
  SchurMap composite = compose_cycle(layers);
  return LayerCycle(std::move(layers), std::move(composite));
}

ScalarTrace iterate_map(const SchurMap& map, cplx z0, double tol, int max_iter) {
  if (std::abs(z0) > 1.0 + 1e-12)
    raise(errc::param_out_of_range, "starting point outside the closed disk");
  if (!(tol > 0.0)) raise(errc::param_out_of_range, "tolerance must be positive");
  if (max_iter < 1) raise(errc::param_out_of_range, "max_iter must be at least 1");

  ScalarTrace trace;
  trace.start = z0;
  trace.values.push_back(z0);
  trace.terminated_reason = StopReason::budget;

  int hits = 0;
  for (int m = 1; m <= max_iter; ++m) {
    cplx next = eval_map(map, trace.values.back());
    double delta = std::abs(next - trace.values.back());
    trace.values.push_back(next);

    hits = (delta < tol) ? hits + 1 : 0;
    if (hits >= defaults::consecutive_hits) {
      trace.terminated_reason = StopReason::converged;
      return trace;
    }

    // Orbit repeat: the distance to a period partner must collapse far below
    // the step size, otherwise slow geometric convergence would alias as a
    // cycle.
    if (delta >= tol) {
      int window = std::min<int>(defaults::scalar_cycle_window, static_cast<int>(trace.values.size()) - 1);
      for (int back = 2; back <= window; ++back) {
        double match = std::abs(next - trace.values[trace.values.size() - 1 - back]);
        if (match < defaults::scalar_cycle_tol && match < 1e-3 * delta) {
          trace.terminated_reason = StopReason::nonconvergent;
          return trace;
        }
      }
    }
  }
  return trace;
}

ScalarTrace iterate_scalar(const LayerCycle& cycle, cplx z0, double tol, int max_iter) {
  return iterate_map(cycle.composite(), z0, tol, max_iter);
}

LimitClass classify_limit(const ScalarTrace& trace, double tol) {
  if (trace.values.empty()) raise(errc::param_out_of_range, "empty trace");

  size_t n = trace.values.size();
  size_t tail = std::min<size_t>(n, defaults::consecutive_hits + 1);
  cplx last = trace.values.back();

  bool all_one = true, all_zero = true, cauchy = true;
  for (size_t i = n - tail; i < n; ++i) {
    all_one = all_one && std::abs(trace.values[i] - 1.0) < tol;
    all_zero = all_zero && std::abs(trace.values[i]) < tol;
    if (i > n - tail) cauchy = cauchy && std::abs(trace.values[i] - trace.values[i - 1]) < tol;
  }

  LimitClass out;
  if (all_one) {
    out.tag = LimitClass::Tag::one;
  } else if (all_zero) {
    out.tag = LimitClass::Tag::zero;
  } else if (cauchy && trace.terminated_reason != StopReason::nonconvergent &&
             std::abs(last) < 1.0 - tol) {
    out.tag = LimitClass::Tag::interior_point;
    out.interior = last;
  } else {
    out.tag = LimitClass::Tag::non_convergent;
  }
  return out;
}

BoundReport verify_schur_bound(const SchurMap& map, int radial, int angular) {
  if (radial < 16) raise(errc::param_out_of_range, "radial resolution below 16");
  if (angular < 64) raise(errc::param_out_of_range, "angular resolution below 64");

  BoundReport report;
  auto sample = [&](cplx z) {
    try {
      report.sup_estimate = std::max(report.sup_estimate, std::abs(eval_map(map, z)));
    } catch (const Error& e) {
      if (e.code() == errc::pole_at_point && !report.pole_location) report.pole_location = z;
    }
  };

  sample(0.0);
  for (int j = 1; j <= radial; ++j) {
    double r = static_cast<double>(j) / radial;
    for (int k = 0; k < angular; ++k)
      sample(r * std::polar(1.0, 2.0 * std::numbers::pi * k / angular));
  }

  report.pass = !report.pole_location && report.sup_estimate <= 1.0 + defaults::schur_bound_slack;
  return report;
}

FppReport verify_peripheral_fpp(const SchurMap& map, int angular) {
  if (angular < 256) raise(errc::param_out_of_range, "angular resolution below 256");

  FppReport report;
  for (int k = 0; k < angular; ++k) {
    cplx lambda = std::polar(1.0, 2.0 * std::numbers::pi * k / angular);
    cplx image;
    try {
      image = eval_map(map, lambda);
    } catch (const Error&) {
      report.violations.push_back({lambda, cplx(std::nan(""), std::nan(""))});
      continue;
    }
    if (std::abs(image) > 1.0 - defaults::fpp_modulus_slack &&
        std::abs(image - lambda) >= defaults::fpp_match_tol)
      report.violations.push_back({lambda, image});
  }
  return report;
}

DenjoyWolffEstimate denjoy_wolff(const LayerCycle& cycle, double tol, int max_iter) {
  if (cycle.composite().is_identity()) raise(errc::identity_cycle, "composite is the identity");

  // The composite may still act as the identity without being one structurally.
  bool moves_something = false;
  for (cplx z : {cplx(0.3, 0.1), cplx(-0.5, 0.2), cplx(0.0, -0.7)})
    if (std::abs(eval_map(cycle.composite(), z) - z) > 1e-13) moves_something = true;
  if (!moves_something) raise(errc::identity_cycle, "composite acts as the identity");

  auto settle = [&](cplx seed) {
    ScalarTrace trace = iterate_scalar(cycle, seed, tol, max_iter);
    if (trace.terminated_reason == StopReason::nonconvergent)
      raise(errc::non_convergent, "orbit cycles; no attracting point");
    return trace.values.back();
  };

  cplx a = settle(0.0);
  cplx b = settle(cplx(0.0, 0.5));
  if (std::abs(a - b) > 10.0 * tol)
    raise(errc::non_convergent, "seed orbits disagree");

  DenjoyWolffEstimate est;
  est.point = a;
  est.interior = std::abs(a) < 1.0 - tol;
  return est;
}

cplx closed_form_param_iterate(double t, int m, cplx z) {
  if (!(t > 0.0 && t < 1.0)) raise(errc::param_out_of_range, "parameter must lie in (0,1)");
  if (m < 0) raise(errc::param_out_of_range, "negative iterate count");
  if (std::abs(z) > 1.0 + 1e-12) raise(errc::param_out_of_range, "point outside the closed disk");

  double mu = 1.0 / (1.0 + t);
  double mu_m = std::pow(mu, m);
  cplx den = 1.0 - (1.0 - mu_m) * z;
  if (std::abs(den) <= defaults::pole_eps) {
    // The only denominator collapse on the closed disk is the removable
    // 0/0 at the fixed point once mu^m underflows; the true pole sits at
    // 1/(1 - mu^m) outside the disk.
    if (std::abs(z - 1.0) <= defaults::pole_eps) return 1.0;
    raise(errc::pole_at_point, "closed-form pole");
  }
  return mu_m * z / den;
}

}  // namespace speccas

#include "speccas/schur_interp.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "speccas/defaults.hpp"
#include "speccas/error.hpp"
#include "speccas/scalar_dynamics.hpp"

namespace speccas {

namespace {

void trim_exact_zeros(std::vector<cplx>& coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == cplx(0.0)) coeffs.pop_back();
}

std::vector<cplx> poly_pow(const std::vector<cplx>& base, int k) {
  std::vector<cplx> acc{1.0};
  for (int i = 0; i < k; ++i) acc = poly_mul(acc, base);
  return acc;
}

}  // namespace

std::vector<cplx> poly_add(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

std::vector<cplx> poly_mul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

RationalCoeffs compose_rational(const RationalCoeffs& f, const RationalCoeffs& g) {
  // f = P/Q padded to a common degree d; then f(N/D) clears D^d from both
  // P(N/D) and Q(N/D), leaving polynomial coefficient lists.
  size_t d = std::max(f.num.size(), f.den.size()) - 1;
  std::vector<cplx> p = f.num, q = f.den;
  p.resize(d + 1, 0.0);
  q.resize(d + 1, 0.0);

  std::vector<std::vector<cplx>> n_pow(d + 1), d_pow(d + 1);
  for (size_t k = 0; k <= d; ++k) {
    n_pow[k] = poly_pow(g.num, static_cast<int>(k));
    d_pow[k] = poly_pow(g.den, static_cast<int>(k));
  }

  RationalCoeffs out;
  out.num = {0.0};
  out.den = {0.0};
  for (size_t k = 0; k <= d; ++k) {
    std::vector<cplx> basis = poly_mul(n_pow[k], d_pow[d - k]);
    if (p[k] != cplx(0.0)) {
      std::vector<cplx> term = basis;
      for (auto& c : term) c *= p[k];
      out.num = poly_add(out.num, term);
    }
    if (q[k] != cplx(0.0)) {
      std::vector<cplx> term = basis;
      for (auto& c : term) c *= q[k];
      out.den = poly_add(out.den, term);
    }
  }
  trim_exact_zeros(out.num);
  trim_exact_zeros(out.den);
  return out;
}

RationalCoeffs mul_rational(const RationalCoeffs& f, const RationalCoeffs& g) {
  RationalCoeffs out{poly_mul(f.num, g.num), poly_mul(f.den, g.den)};
  trim_exact_zeros(out.num);
  trim_exact_zeros(out.den);
  return out;
}

RationalCoeffs to_rational(const SchurMap& map) {
  return std::visit(
      [](const auto& node) -> RationalCoeffs {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return {{0.0, 1.0}, {1.0}};
        } else if constexpr (std::is_same_v<T, Affine>) {
          return {{node.t, 1.0 - node.t}, {1.0}};
        } else if constexpr (std::is_same_v<T, Blaschke>) {
          return {{-node.t, 1.0}, {1.0, -node.t}};
        } else if constexpr (std::is_same_v<T, Mobius>) {
          return {{node.b, node.a}, {node.d, node.c}};
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          return {node.coeffs, {1.0}};
        } else if constexpr (std::is_same_v<T, RationalMap>) {
          return {node.num, node.den};
        } else {
          static_assert(std::is_same_v<T, Composition>);
          RationalCoeffs acc{{0.0, 1.0}, {1.0}};
          for (const auto& m : node.maps) acc = compose_rational(to_rational(m), acc);
          return acc;
        }
      },
      map.node());
}

SchurMap schur_step(const SchurMap& R, double tol) {
  RationalCoeffs rc;
  bool was_polynomial = false;
  if (const auto* poly = std::get_if<Polynomial>(&R.node())) {
    rc = {poly->coeffs, {1.0}};
    was_polynomial = true;
  } else if (const auto* rat = std::get_if<RationalMap>(&R.node())) {
    rc = {rat->num, rat->den};
  } else {
    raise(errc::unsupported_variant, "schur_step needs an explicit coefficient form");
  }

  if (std::abs(eval_map(R, 0.0)) >= tol)
    raise(errc::nonzero_at_origin, "R(0) must vanish");

  // R(z) = z * Phi(z): drop the constant numerator coefficient and shift.
  std::vector<cplx> shifted(rc.num.begin() + 1, rc.num.end());
  if (shifted.empty()) shifted.push_back(0.0);
  SchurMap phi = was_polynomial ? SchurMap::polynomial(shifted)
                                : SchurMap::rational(shifted, rc.den);

  for (int k = 0; k < defaults::compose_grid_points; ++k) {
    cplx z = 0.95 * std::polar(1.0, 2.0 * std::numbers::pi * k / defaults::compose_grid_points);
    if (std::abs(eval_map(R, z) - z * eval_map(phi, z)) > defaults::compose_grid_tol)
      raise(errc::solver_failure, "factorization check failed on the grid");
  }

  double h = defaults::derivative_step;
  cplx derivative = (eval_map(R, cplx(h)) - eval_map(R, cplx(-h))) / (2.0 * h);
  if (std::abs(eval_map(phi, 0.0) - derivative) > defaults::schur_step_phi0_tol)
    raise(errc::solver_failure, "Phi(0) disagrees with R'(0)");

  return phi;
}

SchurSolution solve_two_point(const InterpolationProblem& problem, const SchurMap& phi) {
  if (!(problem.t > 0.0 && problem.t < 1.0))
    raise(errc::param_out_of_range, "interior node must lie in (0,1)");

  BoundReport phi_bound = verify_schur_bound(phi);
  if (!phi_bound.pass) raise(errc::not_schur, "parameter Phi violates the sup bound");
  if (std::abs(eval_map(phi, 1.0) - 1.0) >= defaults::interp_residual_1)
    raise(errc::boundary_condition_failed, "Phi(1) must equal 1");

  // s(z) = b_t(z) Phi(b_t(z)) = G(b_t(z)) with G(w) = w Phi(w); lifting Phi
  // by one power of w is an exact coefficient shift, and the blaschke factor
  // stays a composition node, so evaluation never sees expanded high-degree
  // coefficients.
  RationalCoeffs phi_rc = to_rational(phi);
  SchurMap lifted =
      SchurMap::rational(poly_mul({cplx(0.0), cplx(1.0)}, phi_rc.num), phi_rc.den);
  SchurSolution solution{
      SchurMap::composition({SchurMap::blaschke(problem.t), lifted}), {}};
  solution.certificate.residual_at_t = std::abs(eval_map(solution.s, problem.t));
  solution.certificate.residual_at_1 = std::abs(eval_map(solution.s, 1.0) - 1.0);
  solution.certificate.sup_estimate = verify_schur_bound(solution.s).sup_estimate;

  if (solution.certificate.residual_at_t >= defaults::interp_residual_t ||
      solution.certificate.residual_at_1 >= defaults::interp_residual_1 ||
      solution.certificate.sup_estimate > 1.0 + defaults::schur_bound_slack)
    raise(errc::solver_failure, "constructed solution fails its certificate");

  return solution;
}

InterpolationReport verify_interpolation(const SchurMap& s, double t) {
  InterpolationReport report;
  report.residual_at_t = std::abs(eval_map(s, t));
  report.residual_at_1 = std::abs(eval_map(s, 1.0) - 1.0);
  BoundReport bound = verify_schur_bound(s);
  report.sup_estimate = bound.sup_estimate;
  report.pass = report.residual_at_t < defaults::interp_residual_t &&
                report.residual_at_1 < defaults::interp_residual_1 && bound.pass;
  return report;
}

}  // namespace speccas

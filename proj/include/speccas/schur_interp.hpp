#pragma once

#include <vector>

#include "speccas/defaults.hpp"
#include "speccas/schur_map.hpp"

namespace speccas {

// Ascending coefficient lists for num/den; the workhorse representation for
// the interpolation construction and the division step.
struct RationalCoeffs {
  std::vector<cplx> num;
  std::vector<cplx> den;
};

// Exact coefficient arithmetic on polynomials (ascending order).
std::vector<cplx> poly_add(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<cplx> poly_mul(const std::vector<cplx>& a, const std::vector<cplx>& b);
cplx poly_eval(const std::vector<cplx>& coeffs, cplx z);

// Coefficient form of an arbitrary map; compositions are expanded
// symbolically (every leaf variant is rational, so this is always exact).
RationalCoeffs to_rational(const SchurMap& map);

// f(g(z)) and f(z)*g(z) on coefficient lists.
RationalCoeffs compose_rational(const RationalCoeffs& f, const RationalCoeffs& g);
RationalCoeffs mul_rational(const RationalCoeffs& f, const RationalCoeffs& g);

// Interpolation data: interior node t with target 0; the boundary target is
// fixed at s(1) = 1.
struct InterpolationProblem {
  double t;
};

struct InterpolationCertificate {
  double residual_at_t = 0.0;
  double residual_at_1 = 0.0;
  double sup_estimate = 0.0;
};

struct SchurSolution {
  SchurMap s;
  InterpolationCertificate certificate;
};

struct InterpolationReport {
  bool pass = false;
  double residual_at_t = 0.0;
  double residual_at_1 = 0.0;
  double sup_estimate = 0.0;
};

// Divides out the zero at the origin: R(z) = z * Phi(z). R must be a
// Polynomial or RationalMap variant with |R(0)| < tol.
SchurMap schur_step(const SchurMap& R, double tol = defaults::schur_step_origin_tol);

// s(z) = b_t(z) * Phi(b_t(z)) for a Schur parameter Phi with Phi(1) = 1,
// returned in coefficient form with a populated certificate.
SchurSolution solve_two_point(const InterpolationProblem& problem, const SchurMap& phi);

InterpolationReport verify_interpolation(const SchurMap& s, double t);

}  // namespace speccas

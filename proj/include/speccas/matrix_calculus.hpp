#pragma once

#include <functional>
#include <vector>

#include "speccas/defaults.hpp"
#include "speccas/scalar_dynamics.hpp"
#include "speccas/schur_map.hpp"
#include "speccas/types.hpp"

namespace speccas {

using ScalarFn = std::function<cplx(cplx)>;

// A normal matrix carried as (eigenvalues, unitary eigenbasis). The atomic
// spectral measure assigns the set S the projection sum of u_i u_i* over
// eigenvalues in S.
struct NormalOperator {
  int dim = 0;
  CVector eigenvalues;
  CMatrix eigenbasis;  // orthonormal columns

  CMatrix reconstruct() const;

  static NormalOperator diagonal(CVector eigs);
};

// Unitary diagonalization with clustering of near-degenerate eigenvalues
// (cluster radius defaults::cluster_radius) and per-cluster
// re-orthonormalization. Rejects matrices whose normality residual
// ||MM* - M*M||_F exceeds tol * ||M||_F^2.
NormalOperator diagonalize_normal(const CMatrix& M, double tol = defaults::normality_tol);

// U diag(g(eigenvalues)) U*.
CMatrix apply_borel(const NormalOperator& A, const ScalarFn& g);
CMatrix apply_borel(const NormalOperator& A, const SchurMap& map);

// Predicate over spectral points, selecting which eigenprojections a
// spectral projection sums.
class SpectralSet {
 public:
  static SpectralSet explicit_points(std::vector<cplx> points, double radius);
  // Eigenvalues whose forward orbit under the cycle classifies to `target`.
  static SpectralSet characteristic_of_limit(const LayerCycle& cycle, LimitClass::Tag target,
                                             double tol = defaults::scalar_tol,
                                             int max_iter = defaults::default_max_iter);

  bool contains(cplx lambda) const { return contains_(lambda); }

 private:
  explicit SpectralSet(std::function<bool(cplx)> contains) : contains_(std::move(contains)) {}
  std::function<bool(cplx)> contains_;
};

// Sum of u_i u_i* over eigenvalues in S; the zero matrix for an empty match.
CMatrix spectral_projection(const NormalOperator& A, const SpectralSet& S);

// The multiset {g(eigenvalue_i)}.
std::vector<cplx> spectrum_image(const NormalOperator& A, const ScalarFn& g);

// (zeta I - A)^{-1}, with distance-to-spectrum and residual guards.
CMatrix resolvent(const CMatrix& A, cplx zeta);

struct ContourSpec {
  cplx center;
  double radius = 0.0;
  int nodes = 64;  // starting quadrature resolution; doubled adaptively
};

// Positively oriented circle around the eigenvalue cluster at `center`,
// with radius half the distance to the nearest excluded eigenvalue.
ContourSpec isolating_contour(const std::vector<cplx>& eigs, cplx center, int nodes = 64);

// Circle enclosing all eigenvalues: centroid center, radius 1.5x the spread
// (floored when the spectrum is a single point).
ContourSpec enclosing_contour(const std::vector<cplx>& eigs, int nodes = 64);

// (1/2*pi*i) contour integral of g(z)(zI - A)^{-1} dz by trapezoidal
// quadrature with node doubling until successive results agree to quad_tol.
// g must be holomorphic on and inside the circle (caller-asserted).
CMatrix contour_calculus(const CMatrix& A, const ScalarFn& g, const ContourSpec& contour);
CMatrix contour_calculus(const CMatrix& A, const SchurMap& map, const ContourSpec& contour);

// Contour integral of the resolvent alone: the Riesz projection onto the
// spectrum enclosed by the circle.
CMatrix riesz_projection(const CMatrix& A, const ContourSpec& contour);

struct RittReport {
  double estimate = 0.0;
  bool is_ritt = false;
};

// sup over sample points |z|>1 of (|z|-1) * ||(zI - A)^{-1}||_2, on radii
// 1 + 2^-k approaching the unit circle.
RittReport ritt_constant(const CMatrix& A, int radial = defaults::ritt_radial,
                         int angular = defaults::ritt_angular);

struct PowerBoundReport {
  double sup = 0.0;
  std::vector<double> norms;  // norms[n-1] = ||A^n||_2
  bool overflowed = false;    // growth passed power_overflow; stopped early
};

PowerBoundReport power_bound_estimate(const CMatrix& A, int max_power);

// Largest singular value by power iteration on A*A (two_norm_max_iters
// steps, two_norm_tol relative tolerance).
double operator_two_norm(const CMatrix& M);

// Eigenvalues in a deterministic order (descending by real part, then
// imaginary part).
std::vector<cplx> eigenvalues_of(const CMatrix& M);

// Worst pair distance under greedy nearest matching; infinity when the
// multiset sizes differ.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

double spectral_radius(const CMatrix& M);

}  // namespace speccas

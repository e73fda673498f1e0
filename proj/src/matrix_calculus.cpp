#include "speccas/matrix_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "speccas/error.hpp"

namespace speccas {

namespace {

void require_square(const CMatrix& M, const char* what) {
  if (M.rows() != M.cols() || M.rows() == 0)
    raise(errc::incompatible_dims, std::string(what) + " needs a nonempty square matrix");
}

bool exactly_diagonal(const CMatrix& M) {
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (i != j && M(i, j) != cplx(0.0)) return false;
  return true;
}

// Deterministic eigenvalue order: descending real part, then imaginary part.
bool eig_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

CMatrix pairwise_sum(std::vector<CMatrix>& terms) {
  if (terms.empty()) raise(errc::solver_failure, "empty summation");
  size_t count = terms.size();
  while (count > 1) {
    size_t half = count / 2;
    for (size_t i = 0; i < half; ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
    if (count % 2 == 1) {
      terms[half] = terms[count - 1];
      count = half + 1;
    } else {
      count = half;
    }
  }
  return terms[0];
}

CMatrix solve_resolvent_unchecked(const CMatrix& A, cplx zeta) {
  CMatrix M = zeta * CMatrix::Identity(A.rows(), A.cols()) - A;
  return Eigen::PartialPivLU<CMatrix>(M).solve(CMatrix::Identity(A.rows(), A.cols()));
}

}  // namespace

CMatrix NormalOperator::reconstruct() const {
  return eigenbasis * eigenvalues.asDiagonal() * eigenbasis.adjoint();
}

NormalOperator NormalOperator::diagonal(CVector eigs) {
  NormalOperator out;
  out.dim = static_cast<int>(eigs.size());
  out.eigenvalues = std::move(eigs);
  out.eigenbasis = CMatrix::Identity(out.dim, out.dim);
  return out;
}

NormalOperator diagonalize_normal(const CMatrix& M, double tol) {
  require_square(M, "diagonalize_normal");
  int n = static_cast<int>(M.rows());

  double scale2 = M.squaredNorm();
  if (scale2 == 0.0) return NormalOperator::diagonal(CVector::Zero(n));
  double normality = (M * M.adjoint() - M.adjoint() * M).norm();
  if (normality >= tol * scale2)
    raise(errc::not_normal, "commutator residual " + std::to_string(normality / scale2));

  if (exactly_diagonal(M)) return NormalOperator::diagonal(M.diagonal());

  Eigen::ComplexEigenSolver<CMatrix> solver(M, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) raise(errc::solver_failure, "eigensolver did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return eig_less(solver.eigenvalues()(a), solver.eigenvalues()(b));
  });

  NormalOperator out;
  out.dim = n;
  out.eigenvalues = CVector(n);
  out.eigenbasis = CMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(order[i]);
    out.eigenbasis.col(i) = solver.eigenvectors().col(order[i]);
  }

  // Cluster near-degenerate eigenvalues (union-find on pairwise distance) and
  // re-orthonormalize each cluster's vectors; vectors of well-separated
  // eigenvalues of a normal matrix are already orthogonal.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(out.eigenvalues(i) - out.eigenvalues(j)) <= defaults::cluster_radius)
        parent[find(i)] = find(j);

  for (int root = 0; root < n; ++root) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (find(i) == root) members.push_back(i);
    if (members.size() < 2) continue;
    CMatrix block(n, members.size());
    for (size_t k = 0; k < members.size(); ++k) block.col(k) = out.eigenbasis.col(members[k]);
    Eigen::HouseholderQR<CMatrix> qr(block);
    CMatrix thin_q = qr.householderQ() * CMatrix::Identity(n, static_cast<int>(members.size()));
    for (size_t k = 0; k < members.size(); ++k) out.eigenbasis.col(members[k]) = thin_q.col(k);
  }

  double unitarity = (out.eigenbasis.adjoint() * out.eigenbasis - CMatrix::Identity(n, n)).norm();
  if (unitarity >= defaults::unitarity_tol)
    raise(errc::solver_failure, "eigenbasis failed the unitarity check");
  double recon = (out.reconstruct() - M).norm();
  if (recon >= defaults::reconstruct_tol * std::sqrt(scale2))
    raise(errc::solver_failure, "reconstruction residual too large");
  return out;
}

CMatrix apply_borel(const NormalOperator& A, const ScalarFn& g) {
  CVector mapped(A.dim);
  for (int i = 0; i < A.dim; ++i) {
    cplx value;
    try {
      value = g(A.eigenvalues(i));
    } catch (const Error&) {
      raise(errc::function_undefined_at_eigenvalue, "g is singular at an eigenvalue");
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      raise(errc::function_undefined_at_eigenvalue, "g is not finite at an eigenvalue");
    mapped(i) = value;
  }
  return A.eigenbasis * mapped.asDiagonal() * A.eigenbasis.adjoint();
}

CMatrix apply_borel(const NormalOperator& A, const SchurMap& map) {
  return apply_borel(A, ScalarFn([&map](cplx z) { return eval_map(map, z); }));
}

SpectralSet SpectralSet::explicit_points(std::vector<cplx> points, double radius) {
  if (!(radius > 0.0)) raise(errc::param_out_of_range, "point radius must be positive");
  return SpectralSet([points = std::move(points), radius](cplx lambda) {
    for (cplx p : points)
      if (std::abs(lambda - p) <= radius) return true;
    return false;
  });
}

SpectralSet SpectralSet::characteristic_of_limit(const LayerCycle& cycle, LimitClass::Tag target,
                                                 double tol, int max_iter) {
  return SpectralSet([cycle, target, tol, max_iter](cplx lambda) {
    ScalarTrace trace = iterate_scalar(cycle, lambda, tol, max_iter);
    return classify_limit(trace, defaults::classify_tol).tag == target;
  });
}

CMatrix spectral_projection(const NormalOperator& A, const SpectralSet& S) {
  CMatrix P = CMatrix::Zero(A.dim, A.dim);
  for (int i = 0; i < A.dim; ++i)
    if (S.contains(A.eigenvalues(i)))
      P += A.eigenbasis.col(i) * A.eigenbasis.col(i).adjoint();
  return P;
}

std::vector<cplx> spectrum_image(const NormalOperator& A, const ScalarFn& g) {
  std::vector<cplx> image;
  image.reserve(A.dim);
  for (int i = 0; i < A.dim; ++i) {
    cplx value;
    try {
      value = g(A.eigenvalues(i));
    } catch (const Error&) {
      raise(errc::function_undefined_at_eigenvalue, "g is singular at an eigenvalue");
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      raise(errc::function_undefined_at_eigenvalue, "g is not finite at an eigenvalue");
    image.push_back(value);
  }
  return image;
}

CMatrix resolvent(const CMatrix& A, cplx zeta) {
  require_square(A, "resolvent");
  double dist = std::numeric_limits<double>::infinity();
  for (cplx lambda : eigenvalues_of(A)) dist = std::min(dist, std::abs(zeta - lambda));
  if (dist <= defaults::resolvent_min_dist) raise(errc::spectrum_hit, "zeta touches the spectrum");

  int n = static_cast<int>(A.rows());
  CMatrix M = zeta * CMatrix::Identity(n, n) - A;
  CMatrix R = Eigen::PartialPivLU<CMatrix>(M).solve(CMatrix::Identity(n, n));
  if (M.norm() * R.norm() > defaults::condition_limit)
    raise(errc::ill_conditioned, "resolvent condition estimate too large");
  if ((M * R - CMatrix::Identity(n, n)).norm() >= defaults::resolvent_residual)
    raise(errc::ill_conditioned, "resolvent residual too large");
  return R;
}

ContourSpec isolating_contour(const std::vector<cplx>& eigs, cplx center, int nodes) {
  double nearest = std::numeric_limits<double>::infinity();
  for (cplx lambda : eigs) {
    double d = std::abs(lambda - center);
    if (d > defaults::cluster_radius) nearest = std::min(nearest, d);
  }
  double radius = std::isfinite(nearest) ? nearest / 2.0 : defaults::contour_radius_floor;
  return ContourSpec{center, radius, nodes};
}

ContourSpec enclosing_contour(const std::vector<cplx>& eigs, int nodes) {
  cplx center = 0.0;
  for (cplx lambda : eigs) center += lambda;
  center /= static_cast<double>(eigs.size());
  double spread = 0.0;
  for (cplx lambda : eigs) spread = std::max(spread, std::abs(lambda - center));
  double radius = std::max(defaults::contour_radius_factor * spread, defaults::contour_radius_floor);
  return ContourSpec{center, radius, nodes};
}

CMatrix contour_calculus(const CMatrix& A, const ScalarFn& g, const ContourSpec& contour) {
  require_square(A, "contour_calculus");
  if (contour.nodes < defaults::quad_min_nodes)
    raise(errc::param_out_of_range, "contour needs at least 16 nodes");
  if (!(contour.radius > 0.0)) raise(errc::param_out_of_range, "contour radius must be positive");

  for (cplx lambda : eigenvalues_of(A))
    if (std::abs(std::abs(lambda - contour.center) - contour.radius) < defaults::gap_tol)
      raise(errc::contour_too_close, "circle passes near an eigenvalue");

  auto node_term = [&](double theta) -> CMatrix {
    cplx unit = std::polar(1.0, theta);
    cplx zeta = contour.center + contour.radius * unit;
    return g(zeta) * unit * solve_resolvent_unchecked(A, zeta);
  };

  auto batch_sum = [&](int count, double offset) {
    std::vector<CMatrix> terms;
    terms.reserve(count);
    for (int j = 0; j < count; ++j)
      terms.push_back(node_term(2.0 * std::numbers::pi * (j + offset) / count));
    return pairwise_sum(terms);
  };

  int nodes = contour.nodes;
  CMatrix running = batch_sum(nodes, 0.0);
  CMatrix previous = (contour.radius / nodes) * running;
  while (true) {
    if (2 * nodes > defaults::quad_max_nodes)
      raise(errc::no_convergence, "node cap reached without quadrature agreement");
    running += batch_sum(nodes, 0.5);
    nodes *= 2;
    CMatrix current = (contour.radius / nodes) * running;
    // absolute at desk scale, relative once results outgrow unit norm
    if ((current - previous).norm() < defaults::quad_tol * std::max(1.0, current.norm()))
      return current;
    previous = current;
  }
}

CMatrix contour_calculus(const CMatrix& A, const SchurMap& map, const ContourSpec& contour) {
  return contour_calculus(A, ScalarFn([&map](cplx z) { return eval_map(map, z); }), contour);
}

CMatrix riesz_projection(const CMatrix& A, const ContourSpec& contour) {
  return contour_calculus(A, ScalarFn([](cplx) { return cplx(1.0); }), contour);
}

RittReport ritt_constant(const CMatrix& A, int radial, int angular) {
  require_square(A, "ritt_constant");
  if (radial < 1 || angular < 4) raise(errc::param_out_of_range, "ritt sampling grid too small");
  if (spectral_radius(A) > 1.0 + defaults::spectral_radius_slack)
    raise(errc::spectral_radius_exceeds_one, "spectral radius above one");

  RittReport report;
  for (int k = 1; k <= radial; ++k) {
    double r = 1.0 + std::pow(2.0, -k);
    for (int j = 0; j < angular; ++j) {
      cplx z = r * std::polar(1.0, 2.0 * std::numbers::pi * j / angular);
      double norm = operator_two_norm(solve_resolvent_unchecked(A, z));
      report.estimate = std::max(report.estimate, (r - 1.0) * norm);
    }
  }
  report.is_ritt = report.estimate <= defaults::ritt_flag_threshold;
  return report;
}

PowerBoundReport power_bound_estimate(const CMatrix& A, int max_power) {
  require_square(A, "power_bound_estimate");
  if (max_power < 1) raise(errc::param_out_of_range, "max_power must be at least 1");

  PowerBoundReport report;
  CMatrix power = A;
  for (int n = 1; n <= max_power; ++n) {
    double norm = operator_two_norm(power);
    report.norms.push_back(norm);
    report.sup = std::max(report.sup, norm);
    if (norm > defaults::power_overflow) {
      report.overflowed = true;
      return report;
    }
    if (n < max_power) power = power * A;
  }
  return report;
}

double operator_two_norm(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  double fro = M.norm();
  if (fro < 1e-13) return fro;

  CMatrix B = M.adjoint() * M;
  int n = static_cast<int>(B.rows());
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  v.normalize();

  double sigma = 0.0;
  for (int it = 0; it < defaults::two_norm_max_iters; ++it) {
    CVector w = B * v;
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    double next = std::sqrt(norm);
    if (std::abs(next - sigma) <= defaults::two_norm_tol * std::max(next, 1e-30)) return next;
    sigma = next;
  }
  return sigma;
}

std::vector<cplx> eigenvalues_of(const CMatrix& M) {
  require_square(M, "eigenvalues_of");
  if (exactly_diagonal(M)) {
    std::vector<cplx> eigs(M.rows());
    for (int i = 0; i < M.rows(); ++i) eigs[i] = M(i, i);
    std::sort(eigs.begin(), eigs.end(), eig_less);
    return eigs;
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) raise(errc::solver_failure, "eigensolver did not converge");
  std::vector<cplx> eigs(solver.eigenvalues().data(), solver.eigenvalues().data() + M.rows());
  std::sort(eigs.begin(), eigs.end(), eig_less);
  return eigs;
}

double spectral_radius(const CMatrix& M) {
  double rho = 0.0;
  for (cplx lambda : eigenvalues_of(M)) rho = std::max(rho, std::abs(lambda));
  return rho;
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (cplx x : a) {
    size_t best = b.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < b.size(); ++j) {
      double d = std::abs(x - b[j]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == b.size()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, best_dist);
    b.erase(b.begin() + static_cast<long>(best));
  }
  return worst;
}

}  // namespace speccas

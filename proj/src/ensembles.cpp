#include "speccas/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "speccas/error.hpp"
#include "speccas/schur_interp.hpp"

namespace speccas {

CMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMatrix> qr(G);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(dim, dim);
  CMatrix R = Q.adjoint() * G;
  for (int j = 0; j < dim; ++j) {
    cplx r = R(j, j);
    Q.col(j) *= (std::abs(r) > 0.0) ? r / std::abs(r) : cplx(1.0);
  }
  return Q;
}

NormalOperator random_normal_with_one(std::mt19937_64& rng, const NormalEnsembleOptions& options) {
  std::uniform_int_distribution<int> dim_pick(options.min_dim, options.max_dim);
  int dim = dim_pick(rng);
  std::uniform_int_distribution<int> mult_pick(1, std::min(options.max_one_multiplicity, dim - 1));
  int one_mult = mult_pick(rng);

  std::uniform_real_distribution<double> radius_pick(0.0, options.interior_radius);
  std::uniform_real_distribution<double> angle_pick(0.0, 2.0 * std::numbers::pi);

  std::vector<cplx> eigs(one_mult, cplx(1.0));
  while (static_cast<int>(eigs.size()) < dim) {
    cplx candidate = std::sqrt(radius_pick(rng)) * std::polar(1.0, angle_pick(rng));
    if (std::abs(candidate - cplx(1.0)) < options.min_gap_from_one) continue;
    bool separated = true;
    for (size_t i = static_cast<size_t>(one_mult); i < eigs.size(); ++i)
      if (std::abs(candidate - eigs[i]) < options.min_separation) separated = false;
    if (separated) eigs.push_back(candidate);
  }

  NormalOperator out;
  out.dim = dim;
  out.eigenvalues = CVector(dim);
  for (int i = 0; i < dim; ++i) out.eigenvalues(i) = eigs[i];
  out.eigenbasis = random_unitary(dim, rng);
  return out;
}

std::vector<SchurMap> random_admissible_layers(std::mt19937_64& rng, int max_layers) {
  std::uniform_int_distribution<int> count_pick(1, max_layers);
  std::uniform_real_distribution<double> t_pick(0.1, 0.9);
  std::uniform_int_distribution<int> kind_pick(0, 1);

  int count = count_pick(rng);
  std::vector<SchurMap> layers;
  layers.reserve(count);
  for (int k = 0; k < count; ++k) {
    double t = t_pick(rng);
    layers.push_back(kind_pick(rng) == 0 ? SchurMap::affine(t) : SchurMap::blaschke(t));
  }
  return layers;
}

SchurMap random_blaschke_product(std::mt19937_64& rng, int max_factors) {
  std::uniform_int_distribution<int> count_pick(1, max_factors);
  std::uniform_int_distribution<int> power_pick(1, 3);
  std::uniform_real_distribution<double> a_pick(0.05, 0.85);

  RationalCoeffs product{{1.0}, {1.0}};
  int factors = count_pick(rng);
  for (int k = 0; k < factors; ++k) {
    double a = a_pick(rng);
    RationalCoeffs factor{{-a, 1.0}, {1.0, -a}};
    int power = power_pick(rng);
    for (int p = 0; p < power; ++p) product = mul_rational(product, factor);
  }
  return SchurMap::rational(product.num, product.den);
}

CMatrix random_involution(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  v.normalize();
  return CMatrix::Identity(dim, dim) - 2.0 * (v * v.adjoint());
}

CMatrix random_dense(int dim, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  CMatrix M(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) M(i, j) = cplx(gauss(rng), gauss(rng));
  return M;
}

}  // namespace speccas

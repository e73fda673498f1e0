#pragma once

#include <random>
#include <vector>

#include "speccas/matrix_calculus.hpp"

namespace speccas {

struct NormalEnsembleOptions {
  int min_dim = 2;
  int max_dim = 16;
  int max_one_multiplicity = 2;      // eigenvalue 1 appears 1..max times
  double interior_radius = 0.85;     // remaining eigenvalues stay inside this
  double min_gap_from_one = 0.12;    // and away from 1
  double min_separation = 0.02;      // pairwise, keeps eigenvectors well conditioned
};

// Haar-distributed unitary via QR of a complex Gaussian with phase fix.
CMatrix random_unitary(int dim, std::mt19937_64& rng);

// Random normal operator with eigenvalue 1 present and all the rest
// strictly inside the disk.
NormalOperator random_normal_with_one(std::mt19937_64& rng,
                                      const NormalEnsembleOptions& options = {});

// 1..max_layers admissible layers (affine/blaschke mix with random
// parameters), all fixing 1 and Schur-bounded.
std::vector<SchurMap> random_admissible_layers(std::mt19937_64& rng, int max_layers = 3);

// Finite Blaschke product with value 1 at 1, in rational coefficient form:
// the stock supply of admissible interpolation parameters.
SchurMap random_blaschke_product(std::mt19937_64& rng, int max_factors = 3);

// Unitary Hermitian involution I - 2vv*.
CMatrix random_involution(int dim, std::mt19937_64& rng);

// Dense matrix with independent Gaussian entries.
CMatrix random_dense(int dim, std::mt19937_64& rng, double scale = 1.0);

}  // namespace speccas

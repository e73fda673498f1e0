#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speccas/matrix_calculus.hpp"

namespace speccas {

enum class IterationMode { function_iteration, power_iteration, cesaro, conjugation_cycle };

struct IterationConfig {
  IterationMode mode = IterationMode::function_iteration;
  double tol = defaults::op_tol;
  long long max_stages = defaults::scenario_max_stages;
  int cycle_window = defaults::cycle_window;
  std::optional<CMatrix> conjugator;  // conjugation_cycle only
  bool record_history = false;        // keep per-stage iterates (trace emission)
};

enum class IterationStatus { converged, cycle, diverged, budget_exhausted };

const char* status_name(IterationStatus status);

struct ConvergenceReport {
  IterationStatus status = IterationStatus::budget_exhausted;
  int period = 0;        // set for IterationStatus::cycle
  long long stage = 0;   // first stable stage when converged, else last stage reached
  std::optional<CMatrix> limit;
  std::vector<double> residual_history;  // ||A^(m+1) - A^(m)||_F
  std::vector<double> norm_history;      // ||A^(m)||_F including stage 0
  std::vector<CVector> eigenvalue_history;
  std::vector<CMatrix> history;  // populated when record_history is set
  std::map<std::string, double> check_results;
};

struct SubspaceBasis {
  int dim = 0;       // subspace dimension (columns of basis)
  CMatrix basis;     // orthonormal columns
  double rank_tol = 0.0;
};

struct SeparationViolation {
  cplx point;        // composite-fixed boundary sample
  int layer = 0;     // offending layer index
  cplx layer_image;
};

struct SeparationReport {
  int composite_fixed_samples = 0;
  std::vector<SeparationViolation> violations;
  bool pass() const { return violations.empty(); }
};

struct RieszProductReport {
  double product_residual = 0.0;  // ||P_Psi - Q_K ... Q_1||_F
  double max_commutator = 0.0;    // max over pairs ||Q_i Q_j - Q_j Q_i||_F
  bool pass = false;
};

struct OmegaCheck {
  double residual = 0.0;  // ||f(P) - P||_F after one extra cycle
  bool pass = false;
};

// A^(m+1) = f(A^(m)); the normal overload iterates eigenvalues in the fixed
// eigenbasis, the dense overload re-applies contour calculus with an
// automatically chosen enclosing circle each stage.
ConvergenceReport iterate_operator(const NormalOperator& A, const LayerCycle& cycle,
                                   const IterationConfig& config);
ConvergenceReport iterate_operator(const CMatrix& A, const LayerCycle& cycle,
                                   const IterationConfig& config);

// T^n from n = 0 with the shared stop rules.
ConvergenceReport power_limit(const CMatrix& T, double tol, long long max_n,
                              const IterationConfig& config = {});

// Running averages S_N = (1/N) sum_{n<N} T^n at doubling checkpoints:
// S_2N = (S_N + T^N S_N)/2 keeps the cost logarithmic in N.
ConvergenceReport cesaro_projection(const CMatrix& T, double tol, long long max_N,
                                    bool record_history = false);

// Orthonormal basis of the numerical kernel of (I - T).
SubspaceBasis fixed_space(const CMatrix& T, double rank_tol = defaults::rank_tol);

// Intersection of the kernels of (I - T_k), via the stacked-block kernel.
SubspaceBasis joint_fixed_space(const std::vector<CMatrix>& layers,
                                double rank_tol = defaults::rank_tol);

// Largest principal angle between the column spans (sine-based, accurate
// near zero). Subspaces of different dimension report pi/2.
double subspace_angle(const CMatrix& U1, const CMatrix& U2);

// Residuals: idempotency ||P^2-P||, commutation ||PA-AP||, spectrum_01
// (max eigenvalue distance to {0,1}), hermitian ||P-P*||.
std::map<std::string, double> check_limit_properties(const CMatrix& P, const CMatrix& A, double tol);

// Layerwise Riesz projections at 1 versus the composite's: reports
// ||P_Psi - Q_K...Q_1||_F and the worst pairwise commutator.
RieszProductReport riesz_product_identity(const CMatrix& A, const std::vector<SchurMap>& layers,
                                          const ContourSpec& contour_at_1, double tol);

// Applies one more full cycle to a converged limit and reports ||f(P) - P||.
OmegaCheck stage_omega_check(const CMatrix& P, const LayerCycle& cycle, double tol);

// X -> S X S^{-1} with cycle detection; any involution S yields period 2 or
// immediate convergence.
ConvergenceReport conjugation_cycle(const CMatrix& A, const CMatrix& S,
                                    const IterationConfig& config);

// Unit-circle samples fixed by the composite must be fixed by every layer.
SeparationReport boundary_separation_check(const std::vector<SchurMap>& layers,
                                           int angular = defaults::fpp_angular);

// phi(A) through the calculus: exact eigenbasis route for normal input,
// contour quadrature otherwise.
CMatrix apply_transform(const CMatrix& A, const SchurMap& map);

}  // namespace speccas

#pragma once

#include <optional>
#include <vector>

#include "speccas/defaults.hpp"
#include "speccas/schur_map.hpp"

namespace speccas {

// An ordered list of admissible layers p_1, ..., p_K applied cyclically.
// Admission requires each layer to pass the sup-bound check and to fix 1;
// the cached composite is cross-checked against sequential evaluation on a
// disk grid at construction.
class LayerCycle {
 public:
  static LayerCycle from_layers(std::vector<SchurMap> layers);

  const std::vector<SchurMap>& layers() const { return layers_; }
  const SchurMap& composite() const { return composite_; }

 private:
  LayerCycle(std::vector<SchurMap> layers, SchurMap composite)
      : layers_(std::move(layers)), composite_(std::move(composite)) {}

  std::vector<SchurMap> layers_;
  SchurMap composite_;
};

enum class StopReason { converged, budget, nonconvergent };

struct ScalarTrace {
  cplx start;
  std::vector<cplx> values;  // values[m] = f^m(start)
  StopReason terminated_reason = StopReason::budget;
};

struct LimitClass {
  enum class Tag { zero, one, interior_point, non_convergent };
  Tag tag = Tag::non_convergent;
  cplx interior{};  // populated for Tag::interior_point
};

struct BoundReport {
  double sup_estimate = 0.0;
  bool pass = false;
  std::optional<cplx> pole_location;  // set when sampling hit a pole
};

struct FppViolation {
  cplx point;  // unimodular sample kept at modulus one but moved
  cplx image;
};

struct FppReport {
  std::vector<FppViolation> violations;
  bool pass() const { return violations.empty(); }
};

struct DenjoyWolffEstimate {
  cplx point;
  bool interior = false;
};

// Composition node over the given layers, checked pointwise against
// sequential application on a disk grid.
SchurMap compose_cycle(const std::vector<SchurMap>& layers);

// Forward orbit of an arbitrary map; stops after `consecutive_hits` deltas
// under tol (converged), on an orbit repeat within the look-back window
// (nonconvergent) or at max_iter (budget).
ScalarTrace iterate_map(const SchurMap& map, cplx z0, double tol, int max_iter);

// Same, driving the cycle's composite.
ScalarTrace iterate_scalar(const LayerCycle& cycle, cplx z0, double tol, int max_iter);

LimitClass classify_limit(const ScalarTrace& trace, double tol);

// sup |map| on a radial x angular polar grid over the closed disk.
BoundReport verify_schur_bound(const SchurMap& map, int radial = defaults::bound_grid_radial,
                               int angular = defaults::bound_grid_angular);

// Unit-circle samples that keep modulus one must be fixed points.
FppReport verify_peripheral_fpp(const SchurMap& map, int angular = defaults::fpp_angular);

// Attracting point of the composite, estimated by forward orbits from two
// seeds; the seeds must agree within 10*tol.
DenjoyWolffEstimate denjoy_wolff(const LayerCycle& cycle, double tol, int max_iter);

// m-th iterate of the two-layer parametric cycle in closed form:
// mu^m z / (1 - (1 - mu^m) z) with mu = 1/(1+t).
cplx closed_form_param_iterate(double t, int m, cplx z);

}  // namespace speccas

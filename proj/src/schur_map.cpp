#include "speccas/schur_map.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "speccas/defaults.hpp"
#include "speccas/error.hpp"

namespace speccas {

namespace {

cplx horner(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// Construction-time guard: the denominator must stay away from zero on the
// closed disk. Sampling only; rigorous certification is out of scope.
void check_den_on_disk(const std::vector<cplx>& den) {
  constexpr int radial = 16;
  constexpr int angular = 64;
  double min_mag = std::abs(horner(den, 0.0));
  for (int j = 1; j <= radial; ++j) {
    double r = static_cast<double>(j) / radial;
    for (int k = 0; k < angular; ++k) {
      double theta = 2.0 * std::numbers::pi * k / angular;
      min_mag = std::min(min_mag, std::abs(horner(den, r * std::polar(1.0, theta))));
    }
  }
  if (min_mag <= defaults::den_sample_min)
    raise(errc::param_out_of_range, "rational denominator vanishes on the closed disk");
}

}  // namespace

const char* errc_name(errc code) {
  switch (code) {
    case errc::pole_at_point: return "PoleAtPoint";
    case errc::empty_cycle: return "EmptyCycle";
    case errc::param_out_of_range: return "ParamOutOfRange";
    case errc::identity_cycle: return "IdentityCycle";
    case errc::non_convergent: return "NonConvergent";
    case errc::nonzero_at_origin: return "NonzeroAtOrigin";
    case errc::unsupported_variant: return "UnsupportedVariant";
    case errc::not_schur: return "NotSchur";
    case errc::boundary_condition_failed: return "BoundaryConditionFailed";
    case errc::not_normal: return "NotNormal";
    case errc::solver_failure: return "SolverFailure";
    case errc::function_undefined_at_eigenvalue: return "FunctionUndefinedAtEigenvalue";
    case errc::spectrum_hit: return "SpectrumHit";
    case errc::ill_conditioned: return "IllConditioned";
    case errc::contour_too_close: return "ContourTooClose";
    case errc::no_convergence: return "NoConvergence";
    case errc::spectral_radius_exceeds_one: return "SpectralRadiusExceedsOne";
    case errc::not_power_bounded: return "NotPowerBounded";
    case errc::incompatible_dims: return "IncompatibleDims";
    case errc::singular_conjugator: return "SingularConjugator";
    case errc::isolation_failed: return "IsolationFailed";
    case errc::overflow: return "Overflow";
    case errc::io_error: return "IoError";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
  }
  return "UnknownError";
}

SchurMap SchurMap::identity() { return SchurMap(Identity{}); }

SchurMap SchurMap::affine(double t) {
  if (!(t > 0.0 && t < 1.0)) raise(errc::param_out_of_range, "affine parameter must lie in (0,1)");
  return SchurMap(Affine{t});
}

SchurMap SchurMap::blaschke(double t) {
  if (!(t >= 0.0 && t < 1.0)) raise(errc::param_out_of_range, "blaschke parameter must lie in [0,1)");
  return SchurMap(Blaschke{t});
}

SchurMap SchurMap::mobius(cplx a, cplx b, cplx c, cplx d) {
  if (std::abs(c) + std::abs(d) == 0.0)
    raise(errc::param_out_of_range, "mobius denominator is identically zero");
  check_den_on_disk({d, c});
  return SchurMap(Mobius{a, b, c, d});
}

SchurMap SchurMap::polynomial(std::vector<cplx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return SchurMap(Polynomial{std::move(coeffs)});
}

SchurMap SchurMap::rational(std::vector<cplx> num, std::vector<cplx> den) {
  if (num.empty()) num.push_back(0.0);
  if (den.empty()) raise(errc::param_out_of_range, "rational denominator is empty");
  check_den_on_disk(den);
  return SchurMap(RationalMap{std::move(num), std::move(den)});
}

SchurMap SchurMap::composition(std::vector<SchurMap> maps) {
  if (maps.empty()) raise(errc::empty_cycle, "composition of zero maps");
  return SchurMap(Composition{std::move(maps)});
}

bool SchurMap::is_identity() const {
  if (std::holds_alternative<Identity>(node())) return true;
  if (const auto* comp = std::get_if<Composition>(&node())) {
    for (const auto& m : comp->maps)
      if (!m.is_identity()) return false;
    return true;
  }
  return false;
}

cplx eval_map(const SchurMap& map, cplx z) {
  return std::visit(
      [&](const auto& node) -> cplx {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return z;
        } else if constexpr (std::is_same_v<T, Affine>) {
          return node.t + (1.0 - node.t) * z;
        } else if constexpr (std::is_same_v<T, Blaschke>) {
          cplx den = 1.0 - node.t * z;
          if (std::abs(den) <= defaults::pole_eps) raise(errc::pole_at_point, "blaschke pole");
          return (z - node.t) / den;
        } else if constexpr (std::is_same_v<T, Mobius>) {
          cplx den = node.c * z + node.d;
          if (std::abs(den) <= defaults::pole_eps) raise(errc::pole_at_point, "mobius pole");
          return (node.a * z + node.b) / den;
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          return horner(node.coeffs, z);
        } else if constexpr (std::is_same_v<T, RationalMap>) {
          cplx den = horner(node.den, z);
          if (std::abs(den) <= defaults::pole_eps) raise(errc::pole_at_point, "rational pole");
          return horner(node.num, z) / den;
        } else {
          static_assert(std::is_same_v<T, Composition>);
          cplx w = z;
          for (const auto& m : node.maps) w = eval_map(m, w);
          return w;
        }
      },
      map.node());
}

}  // namespace speccas

#pragma once

#include <stdexcept>
#include <string>

namespace speccas {

// Every failure mode the library can report. Keeping a single exception type
// with a code makes error paths testable without a class per condition.
enum class errc {
  pole_at_point,
  empty_cycle,
  param_out_of_range,
  identity_cycle,
  non_convergent,
  nonzero_at_origin,
  unsupported_variant,
  not_schur,
  boundary_condition_failed,
  not_normal,
  solver_failure,
  function_undefined_at_eigenvalue,
  spectrum_hit,
  ill_conditioned,
  contour_too_close,
  no_convergence,
  spectral_radius_exceeds_one,
  not_power_bounded,
  incompatible_dims,
  singular_conjugator,
  isolation_failed,
  overflow,
  io_error,
  parse_error,
  validation_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace speccas

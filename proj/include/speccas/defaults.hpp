#pragma once

// Central table of every tolerance, grid resolution and budget used by the
// toolkit. Nothing below is tuned per call site; operations take these as
// defaults and tests pin against the same names.

namespace speccas::defaults {

// -- scalar dynamics ---------------------------------------------------------
inline constexpr double scalar_tol = 1e-12;        // per-step convergence delta
inline constexpr int consecutive_hits = 3;         // deltas under tol in a row
inline constexpr int scalar_cycle_window = 8;      // look-back for orbit repeats
inline constexpr double scalar_cycle_tol = 1e-10;  // repeat match tolerance
inline constexpr double classify_tol = 1e-9;       // limit classification tolerance
inline constexpr double pole_eps = 1e-14;          // |denominator| treated as a pole
inline constexpr int bound_grid_radial = 32;       // sup-bound polar grid
inline constexpr int bound_grid_angular = 128;
inline constexpr double schur_bound_slack = 1e-9;  // sup <= 1 + slack passes
inline constexpr int fpp_angular = 256;            // peripheral fixed-point grid
inline constexpr double fpp_modulus_slack = 1e-9;  // |f(x)| > 1 - slack counts as unimodular
inline constexpr double fpp_match_tol = 1e-9;      // |f(x) - x| below this is "fixed"
inline constexpr int compose_grid_points = 64;     // composite-vs-sequential check grid
inline constexpr double compose_grid_tol = 1e-12;
inline constexpr double layer_fixes_one_tol = 1e-9;  // |layer(1) - 1| admission bound
inline constexpr double den_sample_min = 1e-9;     // min sampled |den| at construction
inline constexpr int default_max_iter = 5000;

// -- Schur interpolation ------------------------------------------------------
inline constexpr double interp_residual_t = 1e-10;   // |s(t)| bound
inline constexpr double interp_residual_1 = 1e-8;    // |s(1) - 1| bound
inline constexpr double schur_step_origin_tol = 1e-10;  // |R(0)| precondition
inline constexpr double derivative_step = 1e-5;      // central-difference step
inline constexpr double schur_step_phi0_tol = 1e-8;  // |Phi(0) - R'(0)| bound

// -- matrix calculus ----------------------------------------------------------
inline constexpr double cluster_radius = 1e-8;      // eigenvalue clustering for orthonormalization
inline constexpr double unitarity_tol = 1e-10;      // ||U*U - I||_F bound
inline constexpr double reconstruct_tol = 1e-8;     // relative reconstruction bound
inline constexpr double normality_tol = 1e-8;       // ||MM* - M*M||_F / ||M||_F^2 bound
inline constexpr double resolvent_min_dist = 1e-12;  // required distance to spectrum
inline constexpr double resolvent_residual = 1e-8;  // ||(zI - A)R - I||_F bound
inline constexpr double condition_limit = 1e12;     // resolvent conditioning guard
inline constexpr double gap_tol = 1e-6;             // contour-to-eigenvalue clearance
inline constexpr double quad_tol = 1e-10;           // node-doubling stop criterion
inline constexpr int quad_max_nodes = 4096;
inline constexpr int quad_min_nodes = 16;
inline constexpr int two_norm_max_iters = 200;      // power iteration on A*A
inline constexpr double two_norm_tol = 1e-10;
inline constexpr double power_overflow = 1e12;      // ||A^n|| early-stop guard
inline constexpr double ritt_flag_threshold = 1e3;  // estimate above this is not Ritt
inline constexpr int ritt_radial = 24;
inline constexpr int ritt_angular = 128;
inline constexpr double spectral_radius_slack = 1e-9;

// -- iteration engine -----------------------------------------------------------
inline constexpr double op_tol = 1e-10;            // Frobenius delta per stage
inline constexpr int op_consecutive = 3;
inline constexpr double diverge_norm = 1e6;        // Frobenius norm divergence guard
inline constexpr int cycle_window = 8;
inline constexpr double cycle_tol = 1e-10;
inline constexpr double rank_tol = 1e-8;           // relative singular-value threshold
inline constexpr double contour_radius_factor = 1.5;  // times the spectral spread
inline constexpr double contour_radius_floor = 0.25;  // when the spectrum is a point
inline constexpr double conjugator_cond_limit = 1e8;
inline constexpr int cesaro_power_check = 50;      // power-bound probe before averaging
inline constexpr double cesaro_power_limit = 1e6;
inline constexpr double separation_composite_tol = 1e-9;  // |Psi(x) - x| detection
inline constexpr double separation_layer_tol = 1e-8;      // per-layer fix requirement

// -- scenario runner -------------------------------------------------------------
inline constexpr double scenario_tolerance = 1e-10;
inline constexpr int scenario_max_stages = 5000;
inline constexpr int scenario_cycle_window = 8;
inline constexpr int scenario_dim_max = 256;
inline constexpr double check_limit_tol = 1e-8;   // limit_properties / spectral_match / stage_omega
inline constexpr double check_riesz_tol = 1e-6;   // riesz_product residuals
inline constexpr double check_angle_tol = 1e-8;   // fixed_space_match subspace angle
inline constexpr double ref_match_tol = 1e-9;     // composed-vs-reference agreement bound

}  // namespace speccas::defaults

#pragma once

#include <cstddef>
#include <cstdint>

namespace sis::defaults {

// Numerical support threshold: a value v counts as nonzero when v > tau_supp.
inline constexpr double tau_supp = 1e-12;

// Allowed overshoot of a spectral function above 1 before it is rejected.
inline constexpr double tight_tol = 1e-6;

// Filter modulus bound tolerance (|m| <= 1 + filter_tol).
inline constexpr double filter_tol = 1e-6;

// Tolerance on sigma_W = sigma(A^{*-1} xi) - sigma(xi) dipping below zero.
inline constexpr double spectral_diff_tol = 1e-9;

// Scale-monotonicity slack.
inline constexpr double mono_tol = 1e-9;

// Lattice truncation radius for bracket products.
inline constexpr int bracket_K_1d = 10000;
inline constexpr int bracket_K_nd = 100;

// Hard cap on |j| for matrix powers.
inline constexpr int power_limit = 64;

// Probe defaults.
inline constexpr int probe_jmax_1d = 40;
inline constexpr int probe_jmax_nd = 25;
inline constexpr std::size_t probe_samples = 100000;
inline constexpr double probe_epsilon = 1e-3;
inline constexpr int probe_window = 5;
inline constexpr double probe_box_radius = 8.0;
inline constexpr std::uint64_t probe_seed = 42;

// Target band half-width for the "limit equals one" criterion.
inline constexpr double eps_val = 1e-3;

// Wavelet checks.
inline constexpr int calderon_j_range = 30;
inline constexpr int semiorth_j_small = 4;
inline constexpr double boundary_h = 1e-9;

// Tail-oscillation tolerance for scale-limit convergence flags.
inline constexpr double tail_osc_tol = 1e-6;

}  // namespace sis::defaults

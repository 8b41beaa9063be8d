#pragma once

#include <vector>

#include "besov/elliptic.hpp"
#include "besov/grid.hpp"
#include "besov/littlewood_paley.hpp"

namespace besov::tools {

// Brute-force reference implementations. They share no code with the
// spectral paths they check: no FFT, no partition tables.

/// O(P^2) forward DFT with the unit-mode convention (1/P scaling).
GridFunction direct_dft(const GridFunction& f);

/// O(P^2) synthesis from FFT-native ordered coefficients.
GridFunction direct_synthesis(const GridFunction& spectrum);

/// Smooth cutoff psi(t): 1 for |t| <= 1, 0 for |t| >= 2, profile in between.
double oracle_cutoff(Profile profile, double t);

/// Besov norm by physical-space convolution with the kernels
/// K_k(y) = (1/P) sum_xi phi_k(xi) e^{i xi y}, each built by direct summation.
/// Blocks k = 0..k_max with k_max = floor(log2(nyquist)) - 1.
double oracle_besov_norm(const GridFunction& f, double s, Exponent q, Exponent r,
                         const std::vector<double>& weight_samples, Profile profile);

/// Dense per-mode solve of (A + lambda + K(xi) + sum_alpha (i xi)^alpha C_alpha) u^ = f^
/// with direct transforms and an LU factorisation; lower terms must be constant.
GridFunction oracle_elliptic_solve(const EllipticProblem& problem, const GridFunction& f);

}  // namespace besov::tools

#pragma once

#include <functional>
#include <string>

#include "besov/grid.hpp"

namespace besov {

/// Modal coefficients with the unit-mode convention: the function
/// exp(i xi_0 . x) v transforms to a single coefficient v at xi_0.
/// The result lives on the same grid in FFT-native frequency order.
GridFunction forward_transform(const GridFunction& f);

/// Inverse of forward_transform (synthesis without scaling).
GridFunction inverse_transform(const GridFunction& spectrum);

/// F^{-1}[(i xi)^alpha F f]. Exact on trigonometric polynomials the grid resolves.
GridFunction spectral_derivative(const GridFunction& f, const MultiIndex& alpha);

/// Multiplies every fiber vector of a spectrum by scale(flat frequency index), in place.
void scale_modes(GridFunction& spectrum, const std::function<cplx(std::size_t)>& scale);

/// Version string of the FFT backend.
std::string fft_library_version();

}  // namespace besov

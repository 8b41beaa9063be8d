#pragma once

#include <cstdint>

#include "besov/multipliers.hpp"

namespace besov::tools {

/// Random smooth matrix symbol on R^n with analytic first derivatives:
///   m(xi) = B0 + (B1 + B2 xi_1 / w) exp(-|xi|^2 / (2 w^2)),
/// entries of B_j standard complex normal scaled by 1/sqrt(d), w in [1, 4].
Symbol random_mikhlin_symbol(std::size_t d, Exponent p, std::uint64_t seed, std::size_t index);

/// m(xi) = xi_1 I, which violates every Mikhlin bound.
Symbol linear_symbol(std::size_t d, Exponent p);

}  // namespace besov::tools

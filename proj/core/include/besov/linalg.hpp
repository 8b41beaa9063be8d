#pragma once

#include <Eigen/Dense>

#include "besov/exponent.hpp"

namespace besov {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Operator norm of `m` viewed as a map l_{p_in} -> l_{p_out}.
///
/// Exact for p_in = 1, p_out = inf and p_in = p_out = 2; every other pair
/// falls back to a Boyd-style power iteration, which returns a lower bound
/// that is tight to the iteration tolerance for the matrices we meet here.
double operator_norm(const Matrix& m, Exponent p_in, Exponent p_out);

/// 2-norm condition number via singular values; +inf for singular input.
double condition_number(const Matrix& m);

/// Eigendecomposition m = V diag(values) V^{-1}.
struct EigenSystem {
    Vector values;
    Matrix vectors;
    Matrix inverse_vectors;
    double vector_condition = 0.0;
};

EigenSystem eigen_system(const Matrix& m);

}  // namespace besov

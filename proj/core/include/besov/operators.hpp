#pragma once

#include <variant>
#include <vector>

#include "besov/linalg.hpp"

namespace besov {

/// Sampling of the sector boundary used to certify positivity.
struct SectorSampling {
    std::size_t count = 64;   // log-spaced magnitudes per ray
    double min_magnitude = 1e-3;
    double max_magnitude = 1e6;
    bool include_zero = true;
    double bound_cap = 1e8;   // M above this is reported as a violation
    double slack = 1e-10;
    double max_vector_condition = 1e6;
};

class PositiveOperator;

struct PositivityViolation {
    cplx witness;            // sample where the bound is worst
    double resolvent_norm;   // ||(A + witness)^{-1}||, inf if singular
    double required_bound;   // (1 + |witness|) * resolvent_norm
};

using Certification = std::variant<PositiveOperator, PositivityViolation>;

/// A diagonalizable d x d matrix with a certified resolvent bound
///   ||(A + xi)^{-1}|| <= M (1 + |xi|)^{-1}
/// on the sampled sector |arg xi| <= phi.
class PositiveOperator {
public:
    const Matrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    double sector_angle() const noexcept { return angle_; }
    double bound() const noexcept { return bound_; }
    Exponent fiber_p() const noexcept { return p_; }
    const EigenSystem& spectrum() const noexcept { return eigen_; }
    double min_eigenvalue_modulus() const;

    /// (A + z)^{-1} through the cached eigendecomposition.
    Matrix resolvent(cplx z) const;

private:
    friend Certification certify_positive(const Matrix&, double, const SectorSampling&,
                                          Exponent);
    Matrix matrix_;
    double angle_ = 0.0;
    double bound_ = 0.0;
    Exponent p_{2.0};
    EigenSystem eigen_;
};

/// Certifies positivity on the rays arg xi = +-phi and the half-line
/// [0, max_magnitude]. Throws NonDiagonalizable when the bound holds but
/// the eigenvector matrix is too ill-conditioned for functional calculus.
Certification certify_positive(const Matrix& matrix, double phi,
                               const SectorSampling& sampling = {}, Exponent fiber_p = Exponent(2.0));

/// Convenience: certify or throw PositivityViolation.
PositiveOperator require_positive(const Matrix& matrix, double phi,
                                  const SectorSampling& sampling = {},
                                  Exponent fiber_p = Exponent(2.0));

/// A^theta = V diag(lambda_i^theta) V^{-1}, principal branch, theta in [-1, 1].
Matrix fractional_power(const PositiveOperator& op, double theta);

/// (||v||_p^p + ||A^theta v||_p^p)^{1/p}.
double graph_norm(std::span<const cplx> v, const PositiveOperator& op, double theta, Exponent p);
double graph_norm(std::span<const cplx> v, const Matrix& power, Exponent p);

/// Truncated l_q^sigma scale: A = diag(2^{sigma i}), i = 1..d.
struct DiagonalScale {
    double sigma = 1.0;
    std::size_t d = 16;

    std::vector<double> entries() const;
    Matrix matrix() const;
};

}  // namespace besov

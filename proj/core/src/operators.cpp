#include "besov/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "besov/error.hpp"
#include "besov/parallel.hpp"

namespace besov {

double PositiveOperator::min_eigenvalue_modulus() const {
    return eigen_.values.cwiseAbs().minCoeff();
}

Matrix PositiveOperator::resolvent(cplx z) const {
    const auto d = eigen_.values.size();
    Vector inv(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const cplx s = eigen_.values(i) + z;
        require(s != cplx{}, ErrorCode::SingularMode, "resolvent evaluated on the spectrum");
        inv(i) = 1.0 / s;
    }
    return eigen_.vectors * inv.asDiagonal() * eigen_.inverse_vectors;
}

Certification certify_positive(const Matrix& matrix, double phi, const SectorSampling& sampling,
                               Exponent fiber_p) {
    require(matrix.rows() == matrix.cols() && matrix.rows() > 0, ErrorCode::DimensionMismatch,
            "operator matrix must be square");
    require(phi >= 0.0 && phi < std::numbers::pi, ErrorCode::InvalidArgument,
            "sector angle must lie in [0, pi)");
    require(sampling.count >= 2 && sampling.min_magnitude > 0 &&
                sampling.max_magnitude > sampling.min_magnitude,
            ErrorCode::InvalidArgument, "bad sector sampling");

    // Rays alone miss spectrum strictly inside the sector: -lambda must lie outside it.
    const EigenSystem spectrum = eigen_system(matrix);
    for (Eigen::Index i = 0; i < spectrum.values.size(); ++i) {
        const cplx lambda = spectrum.values(i);
        if (std::abs(lambda) == 0.0 || std::abs(std::arg(-lambda)) <= phi)
            return PositivityViolation{-lambda, std::numeric_limits<double>::infinity(),
                                       std::numeric_limits<double>::infinity()};
    }

    std::vector<cplx> samples;
    if (sampling.include_zero) samples.emplace_back(0.0, 0.0);
    const double lo = std::log(sampling.min_magnitude);
    const double hi = std::log(sampling.max_magnitude);
    for (std::size_t i = 0; i < sampling.count; ++i) {
        const double rho =
            std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(sampling.count - 1));
        samples.emplace_back(rho, 0.0);
        if (phi > 0.0) {
            samples.push_back(std::polar(rho, phi));
            samples.push_back(std::polar(rho, -phi));
        }
    }

    const auto d = matrix.rows();
    std::vector<double> norms(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        const Matrix shifted = matrix + samples[i] * Matrix::Identity(d, d);
        Eigen::FullPivLU<Matrix> lu(shifted);
        if (!lu.isInvertible() || condition_number(shifted) > 1e14) {
            norms[i] = std::numeric_limits<double>::infinity();
            return;
        }
        norms[i] = operator_norm(lu.inverse(), fiber_p, fiber_p);
    });

    std::size_t worst = 0;
    double bound = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double m = (1.0 + std::abs(samples[i])) * norms[i];
        if (!(m <= bound)) {  // NaN or inf also wins
            bound = m;
            worst = i;
        }
    }
    if (!std::isfinite(bound) || bound > sampling.bound_cap)
        return PositivityViolation{samples[worst], norms[worst], bound};

    PositiveOperator op;
    op.matrix_ = matrix;
    op.angle_ = phi;
    op.bound_ = bound * (1.0 + sampling.slack);
    op.p_ = fiber_p;
    op.eigen_ = spectrum;
    require(op.eigen_.vector_condition <= sampling.max_vector_condition, ErrorCode::NonDiagonalizable,
            "eigenvector condition number " + std::to_string(op.eigen_.vector_condition) +
                " exceeds " + std::to_string(sampling.max_vector_condition));
    return op;
}

PositiveOperator require_positive(const Matrix& matrix, double phi, const SectorSampling& sampling,
                                  Exponent fiber_p) {
    auto result = certify_positive(matrix, phi, sampling, fiber_p);
    if (auto* v = std::get_if<PositivityViolation>(&result)) {
        fail(ErrorCode::PositivityViolation,
             "resolvent bound fails at xi = (" + std::to_string(v->witness.real()) + ", " +
                 std::to_string(v->witness.imag()) + "), (1+|xi|)||R|| = " +
                 std::to_string(v->required_bound));
    }
    return std::get<PositiveOperator>(std::move(result));
}

Matrix fractional_power(const PositiveOperator& op, double theta) {
    require(theta >= -1.0 && theta <= 1.0, ErrorCode::InvalidArgument,
            "fractional power exponent must lie in [-1, 1]");
    const auto d = static_cast<Eigen::Index>(op.dim());
    if (theta == 0.0) return Matrix::Identity(d, d);
    if (theta == 1.0) return op.matrix();
    const auto& es = op.spectrum();
    Vector powered(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const cplx l = es.values(i);
        require(!(l.imag() == 0.0 && l.real() <= 0.0), ErrorCode::BranchCut,
                "eigenvalue " + std::to_string(l.real()) + " on the branch cut");
        powered(i) = l.imag() == 0.0 ? cplx{std::pow(l.real(), theta), 0.0} : std::pow(l, theta);
    }
    return es.vectors * powered.asDiagonal() * es.inverse_vectors;
}

double graph_norm(std::span<const cplx> v, const Matrix& power, Exponent p) {
    require(p.is_infinite() || p.value() >= 1.0, ErrorCode::InvalidArgument, "graph norm needs p >= 1");
    require(static_cast<Eigen::Index>(v.size()) == power.cols(), ErrorCode::DimensionMismatch,
            "vector does not match the operator");
    Eigen::Map<const Vector> x(v.data(), static_cast<Eigen::Index>(v.size()));
    const Vector ax = power * x;
    const double a = lp_norm(v, p);
    const double b = lp_norm(std::span<const cplx>(ax.data(), v.size()), p);
    if (p.is_infinite()) return std::max(a, b);
    const double pv = p.value();
    const double m = std::max(a, b);
    if (m == 0.0) return 0.0;
    return m * std::pow(std::pow(a / m, pv) + std::pow(b / m, pv), 1.0 / pv);
}

double graph_norm(std::span<const cplx> v, const PositiveOperator& op, double theta, Exponent p) {
    return graph_norm(v, fractional_power(op, theta), p);
}

std::vector<double> DiagonalScale::entries() const {
    require(d >= 1, ErrorCode::InvalidArgument, "diagonal scale needs d >= 1");
    std::vector<double> e(d);
    for (std::size_t i = 0; i < d; ++i) e[i] = std::exp2(sigma * static_cast<double>(i + 1));
    return e;
}

Matrix DiagonalScale::matrix() const {
    const auto e = entries();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = e[i];
    return m;
}

}  // namespace besov

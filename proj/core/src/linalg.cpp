#include "besov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "besov/error.hpp"

namespace besov {
namespace {

bool is_diagonal(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != cplx{}) return false;
    return true;
}

double vec_norm(const Vector& v, Exponent p) {
    return lp_norm(std::span<const cplx>(v.data(), static_cast<std::size_t>(v.size())), p);
}

cplx phase(cplx z) {
    const double a = std::abs(z);
    return a == 0.0 ? cplx{} : z / a;
}

// Vector w with ||w||_{p'} = 1 and <w, v> = ||v||_p.
Vector dual_direction(const Vector& v, Exponent p) {
    Vector w(v.size());
    const double nv = vec_norm(v, p);
    if (nv == 0.0) return Vector::Zero(v.size());
    if (p.is_infinite()) {
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        w.setZero();
        w(arg) = phase(v(arg));
        return w;
    }
    const double pv = p.value();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i)) / nv;
        w(i) = phase(v(i)) * (pv == 1.0 ? (a > 0 ? 1.0 : 0.0) : std::pow(a, pv - 1.0));
    }
    return w;
}

double boyd(const Matrix& m, Exponent p_in, Exponent p_out, Vector x) {
    const Exponent pc = p_in.conjugate();
    double best = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double nx = vec_norm(x, p_in);
        if (nx == 0.0) break;
        x /= nx;
        const Vector y = m * x;
        const double value = vec_norm(y, p_out);
        if (value <= best * (1.0 + 1e-13) && it > 2) {
            best = std::max(best, value);
            break;
        }
        best = std::max(best, value);
        const Vector z = m.adjoint() * dual_direction(y, p_out);
        x = dual_direction(z, pc);
    }
    return best;
}

}  // namespace

double operator_norm(const Matrix& m, Exponent p_in, Exponent p_out) {
    if (m.size() == 0) return 0.0;
    if (p_in == Exponent(2.0) && p_out == Exponent(2.0)) {
        if (is_diagonal(m)) return m.diagonal().cwiseAbs().maxCoeff();
        Eigen::JacobiSVD<Matrix> svd(m);
        return svd.singularValues()(0);
    }
    if (p_in == Exponent(1.0)) {
        double best = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, vec_norm(m.col(j), p_out));
        return best;
    }
    if (p_out.is_infinite()) {
        const Exponent pc = p_in.conjugate();
        double best = 0.0;
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            best = std::max(best, vec_norm(m.row(i).transpose(), pc));
        return best;
    }
    if (is_diagonal(m)) {
        const Vector d = m.diagonal();
        if (p_in.is_infinite() || p_in.value() <= p_out.value()) return d.cwiseAbs().maxCoeff();
        // ||diag(d)||_{p -> q} = ||d||_r with 1/r = 1/q - 1/p for p > q.
        const double inv_r = 1.0 / p_out.value() - (p_in.is_infinite() ? 0.0 : 1.0 / p_in.value());
        return vec_norm(d, Exponent(1.0 / inv_r));
    }
    double best = 0.0;
    Eigen::Index col = 0;
    double col_best = -1.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double c = vec_norm(m.col(j), p_out);
        if (c > col_best) { col_best = c; col = j; }
    }
    best = col_best;  // every unit vector is admissible
    best = std::max(best, boyd(m, p_in, p_out, Vector::Ones(m.cols())));
    best = std::max(best, boyd(m, p_in, p_out, Vector::Unit(m.cols(), col)));
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
    best = std::max(best, boyd(m, p_in, p_out, svd.matrixV().col(0)));
    return best;
}

double condition_number(const Matrix& m) {
    if (m.size() == 0) return 1.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    const double lo = s(s.size() - 1);
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / lo;
}

EigenSystem eigen_system(const Matrix& m) {
    require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "eigen_system needs a square matrix");
    EigenSystem es;
    const auto n = m.rows();
    if (is_diagonal(m)) {
        es.values = m.diagonal();
        es.vectors = Matrix::Identity(n, n);
        es.inverse_vectors = Matrix::Identity(n, n);
        es.vector_condition = 1.0;
        return es;
    }
    Eigen::ComplexEigenSolver<Matrix> solver(m, true);
    require(solver.info() == Eigen::Success, ErrorCode::NonDiagonalizable,
            "eigendecomposition did not converge");
    es.values = solver.eigenvalues();
    es.vectors = solver.eigenvectors();
    es.vector_condition = condition_number(es.vectors);
    if (std::isfinite(es.vector_condition)) es.inverse_vectors = es.vectors.inverse();
    return es;
}

}  // namespace besov

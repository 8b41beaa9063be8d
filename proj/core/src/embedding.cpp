#include "besov/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "besov/error.hpp"
#include "besov/fft.hpp"
#include "besov/parallel.hpp"

namespace besov {
namespace {

void check_shape(const EmbeddingSpec& s) {
    const auto n = s.l.size();
    require(n >= 1 && n <= 3, ErrorCode::InvalidArgument, "need one order per axis");
    require(static_cast<std::size_t>(s.alpha.dim()) == n, ErrorCode::DimensionMismatch,
            "multi-index rank does not match the orders");
    for (int lk : s.l) require(lk >= 1, ErrorCode::InvalidArgument, "orders l_k must be positive");
    require(s.r.empty() || s.r.size() == n, ErrorCode::DimensionMismatch, "r needs one entry per axis");
    for (double rk : s.r) require(rk >= 0, ErrorCode::InvalidArgument, "r_k must be nonnegative");
    require(s.t.empty() || s.t.size() == n, ErrorCode::DimensionMismatch, "t needs one entry per axis");
    for (double tk : s.t) require(tk > 0, ErrorCode::InvalidArgument, "t_k must be positive");
    require(s.mu >= 0, ErrorCode::HypothesisViolation, "mu must be >= 0");
}

}  // namespace

double EmbeddingSpec::kappa() const {
    double k = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double rk = r.empty() ? 0.0 : r[i];
        k += (alpha[static_cast<int>(i)] + rk) / l[i];
    }
    return k;
}

double EmbeddingSpec::nu() const {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int lk : l) {
        lo = std::min(lo, 1.0 / lk);
        hi = std::max(hi, 1.0 / lk);
    }
    return l.empty() ? 0.0 : hi - lo;
}

double EmbeddingSpec::eta(std::span<const double> tv) const {
    double e = 1.0;
    for (std::size_t i = 0; i < l.size(); ++i)
        e *= std::pow(tv[i], static_cast<double>(alpha[static_cast<int>(i)]) / l[i]);
    return e;
}

double EmbeddingSpec::eta() const {
    if (t.empty()) return 1.0;
    return eta(t);
}

void EmbeddingSpec::validate_symbol(bool diagnostic) const {
    check_shape(*this);
    if (diagnostic) return;
    const double k = kappa();
    require(k <= 1.0 + 1e-14, ErrorCode::HypothesisViolation,
            "kappa = " + std::to_string(k) + " exceeds 1");
    require(mu <= 1.0 - k + 1e-14, ErrorCode::HypothesisViolation,
            "mu = " + std::to_string(mu) + " exceeds 1 - kappa");
}

void EmbeddingSpec::validate_embedding() const {
    check_shape(*this);
    const double kn = kappa() + nu();
    require(kn > 0.0 && kn <= 1.0 + 1e-14, ErrorCode::HypothesisViolation,
            "kappa + nu(l) = " + std::to_string(kn) + " outside (0, 1]");
    require(mu <= 1.0 - kn + 1e-14, ErrorCode::HypothesisViolation,
            "mu = " + std::to_string(mu) + " exceeds 1 - kappa - nu(l)");
}

std::vector<double> geometric_lattice(double lo, double hi, std::size_t count) {
    require(lo > 0 && hi >= lo && count >= 1, ErrorCode::InvalidArgument, "bad geometric lattice");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

Matrix lemma_symbol(const PositiveOperator& op, const EmbeddingSpec& spec, const Matrix& power,
                    std::span<const double> xi, std::span<const double> t, double h) {
    const auto n = spec.l.size();
    cplx scalar = std::pow(h, -spec.mu);
    double eta = 1.0 / h;
    for (std::size_t k = 0; k < n; ++k) {
        const double rk = spec.r.empty() ? 0.0 : spec.r[k];
        const int ak = spec.alpha[static_cast<int>(k)];
        scalar *= std::pow(t[k], (ak + rk) / spec.l[k]);
        if (rk != 0.0) scalar *= std::pow(std::abs(xi[k]), rk);
        eta += t[k] * std::pow(std::abs(xi[k]), spec.l[k]);
    }
    scalar *= monomial(spec.alpha, xi);
    return scalar * power * op.resolvent(eta);
}

double lemma_symbol_sup(const PositiveOperator& op, const EmbeddingSpec& spec, const Grid& xi_grid,
                        const SymbolLattice& lattice, bool diagnostic) {
    spec.validate_symbol(diagnostic);
    require(xi_grid.dim() == spec.dim(), ErrorCode::DimensionMismatch,
            "frequency lattice dimension does not match the spec");
    const Matrix power = fractional_power(op, spec.power());
    const auto n = static_cast<std::size_t>(spec.dim());
    std::vector<double> sup(xi_grid.point_count(), 0.0);
    parallel_for(xi_grid.point_count(), [&](std::size_t j) {
        const auto xi = xi_grid.frequency(j);
        double best = 0.0;
        std::vector<double> t(n);
        for (double tv : lattice.t_values) {
            std::fill(t.begin(), t.end(), tv);
            for (double h : lattice.h_values) {
                const Matrix psi = lemma_symbol(op, spec, power, std::span<const double>(xi.data(), n), t, h);
                best = std::max(best, operator_norm(psi, op.fiber_p(), op.fiber_p()));
            }
        }
        sup[j] = best;
    });
    return *std::max_element(sup.begin(), sup.end());
}

namespace {

struct EmbeddingTerms {
    double lhs = 0.0;
    double lions = 0.0;
    double besov = 0.0;
};

EmbeddingTerms embedding_terms(const GridFunction& u, const PositiveOperator& op, const EmbeddingSpec& spec,
                               const BesovParams& params, const DyadicPartition& partition) {
    spec.validate_embedding();
    require(u.grid().dim() == spec.dim(), ErrorCode::DimensionMismatch, "function and spec dimensions differ");
    require(u.fiber_dim() == op.dim(), ErrorCode::DimensionMismatch,
            "operator dimension does not match the fiber");
    const Matrix power = fractional_power(op, spec.power());
    const Exponent p = u.fiber_p();
    const GridFunction du = spectral_derivative(u, spec.alpha);
    EmbeddingTerms t;
    t.lhs = spec.eta() * besov_norm(du, params, partition, [&](std::span<const cplx> v, std::size_t) {
                return graph_norm(v, power, p);
            });
    std::vector<double> scales = spec.t;
    t.lions = besov_lions_norm(u, params, partition, spec.l, op.matrix(), scales);
    t.besov = besov_norm(u, params, partition);
    return t;
}

}  // namespace

EmbeddingReport embedding_estimate_check(const GridFunction& u, const PositiveOperator& op,
                                         const EmbeddingSpec& spec, const BesovParams& params,
                                         const DyadicPartition& partition, double h) {
    require(h > 0, ErrorCode::InvalidArgument, "h must be positive");
    const auto t = embedding_terms(u, op, spec, params, partition);
    EmbeddingReport r;
    r.h = h;
    r.lhs = t.lhs;
    r.lions_norm = t.lions;
    r.besov_norm = t.besov;
    r.rhs = std::pow(h, spec.mu) * t.lions + std::pow(h, spec.mu - 1.0) * t.besov;
    r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
    return r;
}

double optimal_constant(double mu) {
    require(mu >= 0.0 && mu <= 1.0, ErrorCode::InvalidArgument, "mu must lie in [0, 1]");
    if (mu == 0.0 || mu == 1.0) return 1.0;
    return std::pow(mu, -mu) * std::pow(1.0 - mu, -(1.0 - mu));
}

EmbeddingReport embedding_estimate_optimal(const GridFunction& u, const PositiveOperator& op,
                                           const EmbeddingSpec& spec, const BesovParams& params,
                                           const DyadicPartition& partition) {
    const auto t = embedding_terms(u, op, spec, params, partition);
    EmbeddingReport r;
    r.lhs = t.lhs;
    r.lions_norm = t.lions;
    r.besov_norm = t.besov;
    const double mu = spec.mu;
    if (t.lions == 0.0 || t.besov == 0.0) {
        r.h = 1.0;
        r.rhs = t.lions + t.besov;
    } else if (mu == 0.0) {
        r.h = std::numeric_limits<double>::infinity();  // h^{-1} b -> 0
        r.rhs = t.lions;
    } else {
        r.h = (1.0 - mu) * t.besov / (mu * t.lions);
        r.rhs = optimal_constant(mu) * std::pow(t.lions, 1.0 - mu) * std::pow(t.besov, mu);
    }
    r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
    return r;
}

RatioReport multiplicative_estimate_check(const GridFunction& u, const PositiveOperator& op,
                                          const EmbeddingSpec& spec, const BesovParams& params,
                                          const DyadicPartition& partition) {
    const auto t = embedding_terms(u, op, spec, params, partition);
    require(t.besov > 0.0, ErrorCode::Degenerate, "multiplicative estimate needs u != 0");
    RatioReport r;
    r.lhs = t.lhs;
    r.rhs = std::pow(t.lions, 1.0 - spec.mu) * std::pow(t.besov, spec.mu);
    r.ratio = r.lhs / r.rhs;
    return r;
}

}  // namespace besov

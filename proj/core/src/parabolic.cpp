#include "besov/parabolic.hpp"

#include <cmath>
#include <numbers>

#include "besov/error.hpp"
#include "besov/fft.hpp"
#include "besov/parallel.hpp"

namespace besov {

namespace {

// sum_k (-z)^k / (k + shift)! for small |z|.
cplx phi_series(cplx z, int shift) {
    cplx term = 1.0;
    for (int k = 1; k <= shift; ++k) term /= static_cast<double>(k);
    cplx sum = term;
    for (int k = 1; k < 30; ++k) {
        term *= -z / static_cast<double>(k + shift);
        sum += term;
    }
    return sum;
}

// (1 - phi_1(z)) / z, the weight of the forcing in the exact step average.
cplx phi2(cplx z) {
    if (std::abs(z) < 0.5) return phi_series(z, 2);
    return (1.0 - phi1(z)) / z;
}

}  // namespace

cplx phi1(cplx z) {
    if (std::abs(z) < 0.5) return phi_series(z, 1);
    return (1.0 - std::exp(-z)) / z;
}

double discrete_time_norm(std::span<const double> values, double dt, Exponent q) {
    if (q.is_infinite()) {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }
    const double e = q.value();
    double s = 0.0;
    for (double v : values) s += dt * std::pow(v, e);
    return std::pow(s, 1.0 / e);
}

ParabolicSolution solve_cauchy(const ParabolicProblem& problem, std::span<const GridFunction> forcing,
                               bool with_report) {
    require(problem.steps >= 1 && problem.t_end > 0.0, ErrorCode::InvalidArgument,
            "time grid needs t_end > 0 and at least one step");
    require(forcing.size() == problem.steps, ErrorCode::DimensionMismatch,
            "forcing has " + std::to_string(forcing.size()) + " steps, expected " + std::to_string(problem.steps));
    const Grid& g = forcing.front().grid();
    const std::size_t d = problem.op.dim();
    for (const auto& f : forcing) {
        require(f.grid() == g, ErrorCode::DimensionMismatch, "forcing steps live on different grids");
        require(f.fiber_dim() == d, ErrorCode::DimensionMismatch, "forcing fiber dimension does not match A");
        f.check_finite();
    }
    require(g.dim() == problem.symbol.dim(), ErrorCode::DimensionMismatch, "grid and symbol dimensions differ");
    for (const auto& t : problem.lower) {
        require(!t.varies(), ErrorCode::Unsupported, "parabolic lower-order terms must be constant in x");
        require(t.alpha.dim() == g.dim() && t.alpha.order() < problem.symbol.order(), ErrorCode::InvalidArgument,
                "lower-order terms need |alpha| < 2l");
    }

    const double dt = problem.dt();
    const auto n = static_cast<std::size_t>(g.dim());
    const auto di = static_cast<Eigen::Index>(d);
    const Exponent p = problem.op.fiber_p();

    std::vector<GridFunction> spec;
    spec.reserve(forcing.size());
    for (const auto& f : forcing) spec.push_back(forward_transform(f));

    const std::size_t steps = problem.steps;
    std::vector<GridFunction> u_hat(steps + 1, GridFunction(g, d, p));
    std::vector<GridFunction> avg_hat(steps, GridFunction(g, d, p));
    std::vector<GridFunction> dt_hat(steps, GridFunction(g, d, p));

    std::vector<double> angle(g.point_count(), 0.0);
    std::vector<int> bad(g.point_count(), 0);
    parallel_for(g.point_count(), [&](std::size_t j) {
        const auto xi = g.frequency(j);
        const std::span<const double> xs(xi.data(), n);
        const cplx K = problem.symbol(xs);
        EigenSystem local;
        const EigenSystem* es = &problem.op.spectrum();
        Matrix B;
        if (!problem.lower.empty()) {
            B = problem.op.matrix();
            B.diagonal().array() += K;
            for (const auto& t : problem.lower) B += monomial(t.alpha, xs) * t.constant;
            local = eigen_system(B);
            if (local.vector_condition > 1e6) {
                bad[j] = 2;
                return;
            }
            es = &local;
        }
        Vector mu = es->values;
        if (problem.lower.empty()) mu.array() += K;
        for (Eigen::Index i = 0; i < di; ++i) {
            if (mu(i) == cplx{}) continue;
            const double a = std::abs(std::arg(mu(i)));
            angle[j] = std::max(angle[j], a);
            if (a >= std::numbers::pi / 2) bad[j] = 1;
        }
        if (bad[j]) return;
        Vector decay(di), w1(di), w2(di);
        for (Eigen::Index i = 0; i < di; ++i) {
            const cplx z = mu(i) * dt;
            decay(i) = std::exp(-z);
            w1(i) = phi1(z);
            w2(i) = phi2(z);
        }
        Vector y = Vector::Zero(di);
        for (std::size_t m = 0; m < steps; ++m) {
            const Vector gm = es->inverse_vectors * Eigen::Map<const Vector>(spec[m].at(j).data(), di);
            const Vector ybar = w1.cwiseProduct(y) + dt * w2.cwiseProduct(gm);
            y = decay.cwiseProduct(y) + dt * w1.cwiseProduct(gm);
            const Vector dy = gm - mu.cwiseProduct(y);
            Eigen::Map<Vector>(u_hat[m + 1].at(j).data(), di) = es->vectors * y;
            Eigen::Map<Vector>(avg_hat[m].at(j).data(), di) = es->vectors * ybar;
            Eigen::Map<Vector>(dt_hat[m].at(j).data(), di) = es->vectors * dy;
        }
    });
    for (std::size_t j = 0; j < bad.size(); ++j) {
        if (bad[j] == 2)
            fail(ErrorCode::NonDiagonalizable, "mode symbol is too ill-conditioned to diagonalize");
        if (bad[j] == 1)
            fail(ErrorCode::HypothesisViolation,
                 "a mode eigenvalue leaves the open right half-plane (|arg mu| = " + std::to_string(angle[j]) +
                     "); the Cauchy problem needs a sector angle above pi/2");
    }

    ParabolicSolution sol;
    sol.u.reserve(steps + 1);
    sol.u.emplace_back(g, d, p);
    for (std::size_t m = 1; m <= steps; ++m) sol.u.push_back(inverse_transform(u_hat[m]));
    for (std::size_t m = 0; m < steps; ++m) {
        sol.average.push_back(inverse_transform(avg_hat[m]));
        sol.time_derivative.push_back(inverse_transform(dt_hat[m]));
    }
    for (double a : angle) sol.report.max_symbol_angle = std::max(sol.report.max_symbol_angle, a);
    if (!with_report) return sol;

    const DyadicPartition partition(g, problem.profile);
    const Exponent q = problem.params.q;
    auto time_norm = [&](const std::function<GridFunction(std::size_t)>& at) {
        std::vector<double> v(steps);
        for (std::size_t m = 0; m < steps; ++m) v[m] = besov_norm(at(m), problem.params, partition);
        return discrete_time_norm(v, dt, q);
    };
    auto& r = sol.report;
    r.time_derivative_norm = time_norm([&](std::size_t m) { return sol.time_derivative[m]; });
    double sum = r.time_derivative_norm;
    for (const auto& alpha : multi_indices_of_order(g.dim(), problem.symbol.order())) {
        const double v = time_norm([&](std::size_t m) { return spectral_derivative(sol.u[m + 1], alpha); });
        r.derivative_norms.push_back(v);
        sum += v;
    }
    const Matrix& a = problem.op.matrix();
    r.operator_norm = time_norm([&](std::size_t m) {
        GridFunction out(g, d, p);
        const GridFunction& u = sol.u[m + 1];
        for (std::size_t j = 0; j < g.point_count(); ++j)
            Eigen::Map<Vector>(out.at(j).data(), di) = a * Eigen::Map<const Vector>(u.at(j).data(), di);
        return out;
    });
    sum += r.operator_norm;
    r.forcing_norm = time_norm([&](std::size_t m) { return forcing[m]; });
    r.ratio = r.forcing_norm > 0 ? sum / r.forcing_norm : 0.0;
    return sol;
}

ParabolicSolution solve_cauchy_degenerate(const ParabolicProblem& problem, const DegenerateMap& map,
                                          std::span<const GridFunction> forcing) {
    ParabolicProblem local = problem;
    if (!map.is_identity()) local.params.weight = map.tau_weight(problem.params.weight);
    std::vector<GridFunction> pushed;
    pushed.reserve(forcing.size());
    for (const auto& f : forcing) pushed.push_back(map.push(f));
    ParabolicSolution tau = solve_cauchy(local, pushed);
    ParabolicSolution out;
    out.report = tau.report;
    for (const auto& u : tau.u) out.u.push_back(map.pull(u));
    for (const auto& u : tau.average) out.average.push_back(map.pull(u));
    for (const auto& u : tau.time_derivative) out.time_derivative.push_back(map.pull(u));
    return out;
}

}  // namespace besov

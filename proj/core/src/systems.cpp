#include "besov/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "besov/error.hpp"

namespace besov {

namespace {

// Sector used when certifying the anchored diagonal; wide enough for the Cauchy problem.
constexpr double kSystemSector = 3.0 * std::numbers::pi / 4.0;

}  // namespace

TruncatedSystem TruncatedSystem::pow2(const Grid& grid, std::size_t d, double sigma,
                                      const std::function<double(std::span<const double>)>& modulation,
                                      Exponent p) {
    require(d >= 1, ErrorCode::InvalidArgument, "truncation size must be positive");
    TruncatedSystem s;
    s.grid = grid;
    s.d = d;
    s.p = p;
    s.diagonal.resize(grid.point_count() * d);
    const auto n = static_cast<std::size_t>(grid.dim());
    for (std::size_t j = 0; j < grid.point_count(); ++j) {
        const auto x = grid.position(j);
        const double mod = modulation ? modulation(std::span<const double>(x.data(), n)) : 1.0;
        for (std::size_t m = 0; m < d; ++m) s.diagonal[j * d + m] = std::exp2(sigma * static_cast<double>(m + 1)) * mod;
    }
    return s;
}

bool TruncatedSystem::x_independent() const {
    for (std::size_t j = 1; j < grid.point_count(); ++j)
        for (std::size_t m = 0; m < d; ++m)
            if (at(j, m) != at(0, m)) return false;
    return true;
}

double lpq_norm_at(const TruncatedSystem& system, std::span<const cplx> value, std::size_t point) {
    require(value.size() == system.d, ErrorCode::DimensionMismatch, "fiber dimension does not match the system");
    std::vector<cplx> w(system.d);
    for (std::size_t m = 0; m < system.d; ++m) w[m] = system.at(point, m) * value[m];
    return lp_norm(w, system.p);
}

FiberNorm lpq_fiber_norm(const TruncatedSystem& system) {
    return [&system](std::span<const cplx> value, std::size_t point) { return lpq_norm_at(system, value, point); };
}

GridFunction apply_q(const TruncatedSystem& system, const GridFunction& u) {
    require(u.fiber_dim() == system.d && u.grid() == system.grid, ErrorCode::DimensionMismatch,
            "function does not match the system shape");
    GridFunction out = u;
    for (std::size_t j = 0; j < u.point_count(); ++j) {
        auto v = out.at(j);
        for (std::size_t m = 0; m < system.d; ++m) v[m] *= system.at(j, m);
    }
    return out;
}

Comparability check_comparability(const TruncatedSystem& system, double max_ratio) {
    require(system.diagonal.size() == system.grid.point_count() * system.d, ErrorCode::DimensionMismatch,
            "diagonal table does not cover grid x channels");
    for (std::size_t j = 0; j < system.grid.point_count(); ++j) {
        for (std::size_t m = 0; m < system.d; ++m) {
            const double v = system.at(j, m);
            if (!(std::isfinite(v) && v > 0.0))
                fail(ErrorCode::PositivityViolation, "diagonal entry d_" + std::to_string(m + 1) + " = " +
                                                         std::to_string(v) + " at point " + std::to_string(j) +
                                                         " is not positive");
        }
    }
    Comparability c;
    c.c1 = std::numeric_limits<double>::infinity();
    c.c2 = 0.0;
    for (std::size_t j = 0; j < system.grid.point_count(); ++j) {
        for (std::size_t m = 0; m < system.d; ++m) {
            const double r = system.at(j, m) / system.at(c.anchor, m);
            c.c1 = std::min(c.c1, r);
            c.c2 = std::max(c.c2, r);
        }
    }
    require(c.c2 / c.c1 <= max_ratio, ErrorCode::ConditionViolation,
            "diagonal comparability ratio C2/C1 = " + std::to_string(c.c2 / c.c1) + " exceeds " +
                std::to_string(max_ratio));
    return c;
}

double coupling_bound(const TruncatedSystem& system, int order) {
    double best = 0.0;
    for (const auto& t : system.couplings) {
        const double e = 1.0 - static_cast<double>(t.alpha.order()) / order - t.mu;
        const std::size_t count = t.varies() ? t.field.size() : 1;
        for (std::size_t j = 0; j < count; ++j) {
            const Matrix& c = t.at(j);
            for (Eigen::Index m = 0; m < c.rows(); ++m) {
                double s = 0.0;
                for (Eigen::Index k = 0; k < c.cols(); ++k)
                    s += std::abs(c(m, k)) * std::pow(system.at(0, static_cast<std::size_t>(k)), -e);
                best = std::max(best, s);
            }
        }
    }
    return best;
}

EllipticProblem build_system_problem(const TruncatedSystem& system, const EllipticSymbol& symbol, cplx lambda,
                                     const BesovParams& params, Profile profile, double fold_mu) {
    const Comparability c = check_comparability(system);
    const auto d = static_cast<Eigen::Index>(system.d);
    Matrix anchor = Matrix::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) anchor(m, m) = system.at(c.anchor, static_cast<std::size_t>(m));
    EllipticProblem problem{symbol, require_positive(anchor, kSystemSector, {}, system.p), system.couplings, lambda,
                            params, profile};
    if (!system.x_independent()) {
        LowerTerm fold;
        fold.alpha = MultiIndex::zero(system.grid.dim());
        fold.mu = fold_mu;
        fold.field.reserve(system.grid.point_count());
        for (std::size_t j = 0; j < system.grid.point_count(); ++j) {
            Matrix diff = Matrix::Zero(d, d);
            for (Eigen::Index m = 0; m < d; ++m)
                diff(m, m) = system.at(j, static_cast<std::size_t>(m)) - anchor(m, m);
            fold.field.push_back(std::move(diff));
        }
        problem.lower.push_back(std::move(fold));
    }
    return problem;
}

double system_besov_norm(const TruncatedSystem& system, const GridFunction& u, const BesovParams& params,
                         const DyadicPartition& partition) {
    require(u.fiber_dim() == system.d, ErrorCode::DimensionMismatch, "fiber dimension does not match the system");
    return besov_norm(u, params, partition, lpq_fiber_norm(system));
}

TruncationStudy truncation_study(const std::function<TruncatedSystem(std::size_t)>& make_system,
                                 const std::function<GridFunction(std::size_t)>& forcing,
                                 std::span<const std::size_t> sizes, const EllipticSymbol& symbol, cplx lambda,
                                 const BesovParams& params, double factor, const NeumannOptions& options) {
    require(sizes.size() >= 2, ErrorCode::InvalidArgument, "a truncation study needs at least two sizes");
    TruncationStudy study;
    std::vector<GridFunction> solutions;
    std::vector<TruncatedSystem> systems;
    for (std::size_t d : sizes) {
        systems.push_back(make_system(d));
        const EllipticProblem problem = build_system_problem(systems.back(), symbol, lambda, params);
        solutions.push_back(solve_full(problem, forcing(d), options).u);
        study.sizes.push_back(d);
    }
    for (std::size_t i = 0; i + 1 < solutions.size(); ++i) {
        const GridFunction& small = solutions[i];
        const GridFunction& large = solutions[i + 1];
        GridFunction diff = large;
        for (std::size_t j = 0; j < diff.point_count(); ++j) {
            auto v = diff.at(j);
            const auto s = small.at(j);
            for (std::size_t m = 0; m < std::min(s.size(), v.size()); ++m) v[m] -= s[m];
        }
        const DyadicPartition partition(diff.grid(), Profile::Cos2);
        study.distances.push_back(system_besov_norm(systems[i + 1], diff, params, partition));
    }
    study.converging = true;
    for (std::size_t i = 0; i + 1 < study.distances.size(); ++i) {
        const double a = study.distances[i], b = study.distances[i + 1];
        if (a == 0.0 && b == 0.0) continue;
        if (a < factor * b) study.converging = false;
    }
    return study;
}

ResolventTable system_resolvent_sweep(const TruncatedSystem& system, const EllipticSymbol& symbol,
                                      std::span<const cplx> lambdas, const BesovParams& params,
                                      const ResolventOptions& options) {
    const EllipticProblem problem = build_system_problem(system, symbol, lambdas.empty() ? 1.0 : lambdas.front(),
                                                         params);
    ResolventOptions local = options;
    local.operator_image = [&system](const GridFunction& u) { return apply_q(system, u); };
    return resolvent_sweep(problem, lambdas, system.grid, local);
}

ParabolicSolution system_parabolic(const TruncatedSystem& system, const EllipticSymbol& symbol, double t_end,
                                   std::size_t steps, const BesovParams& params,
                                   std::span<const GridFunction> forcing) {
    require(system.x_independent(), ErrorCode::Unsupported, "the Cauchy solver needs an x-independent diagonal");
    for (const auto& t : system.couplings)
        require(!t.varies(), ErrorCode::Unsupported, "the Cauchy solver needs constant couplings");
    const EllipticProblem base = build_system_problem(system, symbol, 0.0, params);
    ParabolicProblem problem{base.symbol, base.op, base.lower, t_end, steps, params, base.profile};
    return solve_cauchy(problem, forcing);
}

}  // namespace besov

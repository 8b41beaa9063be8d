#include "besov/degenerate.hpp"

#include <algorithm>
#include <cmath>

#include "besov/error.hpp"
#include "besov/fft.hpp"

namespace besov {

namespace {

// Fritsch-Carlson limiter applied to exact node slopes.
std::vector<double> monotone_slopes(const std::vector<double>& t, const std::vector<double>& y,
                                    std::vector<double> slopes) {
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        const double secant = (y[j + 1] - y[j]) / (t[j + 1] - t[j]);
        for (std::size_t e : {j, j + 1}) slopes[e] = std::clamp(slopes[e], 0.0, 3.0 * secant);
    }
    return slopes;
}

double hermite(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& m,
               double at) {
    auto it = std::upper_bound(t.begin(), t.end(), at);
    std::size_t j = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    j = std::min(j, t.size() - 2);
    const double h = t[j + 1] - t[j];
    const double s = (at - t[j]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y[j] + (s3 - 2 * s2 + s) * h * m[j] + (-2 * s3 + 3 * s2) * y[j + 1] +
           (s3 - s2) * h * m[j + 1];
}

// Periodic 4-point cubic Lagrange resampling along one axis. `positions` are
// fractional source indices (units of the source spacing), one per target node.
GridFunction resample_axis(const GridFunction& f, const Grid& target, int axis, const std::vector<double>& positions) {
    const Grid& src = f.grid();
    const std::size_t d = f.fiber_dim();
    GridFunction out(target, d, f.fiber_p());
    const auto n_src = static_cast<long>(src.size(axis));
    const std::size_t n_tgt = target.size(axis);
    // Source stride along the axis (row-major, last axis fastest).
    std::size_t stride = 1;
    for (int k = src.dim() - 1; k > axis; --k) stride *= src.size(k);
    struct Stencil {
        std::array<long, 4> idx;
        std::array<double, 4> w;
    };
    std::vector<Stencil> stencils(n_tgt);
    for (std::size_t i = 0; i < n_tgt; ++i) {
        const double pos = positions[i];
        const double base = std::floor(pos);
        const double s = pos - base;
        auto& st = stencils[i];
        for (int q = 0; q < 4; ++q) {
            long j = static_cast<long>(base) - 1 + q;
            j %= n_src;
            if (j < 0) j += n_src;
            st.idx[static_cast<std::size_t>(q)] = j;
        }
        st.w = {-s * (s - 1) * (s - 2) / 6.0, (s + 1) * (s - 1) * (s - 2) / 2.0, -(s + 1) * s * (s - 2) / 2.0,
                (s + 1) * s * (s - 1) / 6.0};
    }
    for (std::size_t p = 0; p < target.point_count(); ++p) {
        auto ti = target.unflatten(p);
        const std::size_t i = ti[static_cast<std::size_t>(axis)];
        ti[static_cast<std::size_t>(axis)] = 0;
        const std::size_t base = src.flatten(std::span<const std::size_t>(ti.data(), static_cast<std::size_t>(src.dim())));
        auto dst = out.at(p);
        const auto& st = stencils[i];
        for (int q = 0; q < 4; ++q) {
            const auto v = f.at(base + static_cast<std::size_t>(st.idx[static_cast<std::size_t>(q)]) * stride);
            for (std::size_t c = 0; c < d; ++c) dst[c] += st.w[static_cast<std::size_t>(q)] * v[c];
        }
    }
    return out;
}

Grid replace_period(const Grid& g, int axis, double period) {
    auto periods = g.periods();
    periods[static_cast<std::size_t>(axis)] = period;
    return Grid(g.sizes(), periods);
}

}  // namespace

DegenerateMap::DegenerateMap(std::vector<AxisWeight> gamma, const Grid& x_grid, std::vector<double> origin,
                             std::size_t substeps)
    : gamma_(std::move(gamma)), x_grid_(x_grid), origin_(std::move(origin)) {
    const auto n = static_cast<std::size_t>(x_grid.dim());
    if (gamma_.size() == 1 && n > 1) gamma_.resize(n, gamma_.front());
    require(gamma_.size() == n, ErrorCode::DimensionMismatch, "one axis weight per dimension is required");
    if (origin_.empty()) origin_.assign(n, 0.0);
    require(origin_.size() == n, ErrorCode::DimensionMismatch, "origin needs one entry per dimension");
    require(substeps >= 1, ErrorCode::InvalidArgument, "substeps must be positive");

    std::vector<double> periods(n);
    identity_ = true;
    for (std::size_t k = 0; k < n; ++k) {
        const int axis = static_cast<int>(k);
        const std::size_t N = x_grid.size(axis);
        const double h = x_grid.spacing(axis);
        std::vector<double> tau(N + 1, 0.0), xs(N + 1), gam(N + 1);
        for (std::size_t j = 0; j <= N; ++j) {
            xs[j] = origin_[k] + static_cast<double>(j) * h;
            gam[j] = gamma_[k](xs[j]);
            require(std::isfinite(gam[j]) && gam[j] > 0.0, ErrorCode::Degenerate,
                    "axis weight must be positive and finite on the map range (x = " + std::to_string(xs[j]) + ")");
            if (gam[j] != 1.0) identity_ = false;
        }
        const double sub = h / static_cast<double>(substeps);
        for (std::size_t j = 0; j < N; ++j) {
            double acc = 0.0;
            double left = 1.0 / gam[j];
            for (std::size_t s = 1; s <= substeps; ++s) {
                const double x = s == substeps ? xs[j + 1] : xs[j] + static_cast<double>(s) * sub;
                const double g = s == substeps ? gam[j + 1] : gamma_[k](x);
                require(std::isfinite(g) && g > 0.0, ErrorCode::Degenerate,
                        "axis weight must be positive and finite on the map range (x = " + std::to_string(x) + ")");
                if (g != 1.0) identity_ = false;
                const double right = 1.0 / g;
                acc += 0.5 * (left + right) * sub;
                left = right;
            }
            tau[j + 1] = tau[j] + acc;
            require(std::isfinite(tau[j + 1]) && tau[j + 1] > tau[j], ErrorCode::Degenerate,
                    "tau table is not strictly increasing");
        }
        if (identity_) {
            for (std::size_t j = 0; j <= N; ++j) tau[j] = static_cast<double>(j) * h;
        }
        std::vector<double> inv(N + 1);
        for (std::size_t j = 0; j <= N; ++j) inv[j] = 1.0 / gam[j];
        slope_x_.push_back(monotone_slopes(tau, xs, gam));
        slope_tau_.push_back(monotone_slopes(xs, tau, inv));
        periods[k] = tau[N];
        tau_.push_back(std::move(tau));
        x_nodes_.push_back(std::move(xs));
    }
    if (identity_) periods = x_grid.periods();
    tau_grid_ = Grid(x_grid.sizes(), periods);
}

double DegenerateMap::x_at(int axis, std::size_t j) const {
    return origin_.at(static_cast<std::size_t>(axis)) + x_grid_.coordinate(axis, j);
}

double DegenerateMap::tau_of_x(int axis, double x) const {
    const auto k = static_cast<std::size_t>(axis);
    const double L = x_grid_.period(axis);
    const double T = tau_grid_.period(axis);
    const double shift = std::floor((x - origin_[k]) / L);
    const double local = x - shift * L;
    return shift * T + hermite(x_nodes_[k], tau_[k], slope_tau_[k], local);
}

double DegenerateMap::x_of_tau(int axis, double tau) const {
    const auto k = static_cast<std::size_t>(axis);
    const double L = x_grid_.period(axis);
    const double T = tau_grid_.period(axis);
    const double shift = std::floor(tau / T);
    const double local = tau - shift * T;
    return shift * L + hermite(tau_[k], x_nodes_[k], slope_x_[k], local);
}

GridFunction DegenerateMap::push(const GridFunction& f) const {
    require(f.grid() == x_grid_, ErrorCode::DimensionMismatch, "function does not live on the map's x-grid");
    if (identity_) return GridFunction(tau_grid_, f.fiber_dim(), f.fiber_p(), f.values());
    GridFunction cur = f;
    Grid g = x_grid_;
    for (int axis = 0; axis < x_grid_.dim(); ++axis) {
        const std::size_t N = x_grid_.size(axis);
        const double T = tau_grid_.period(axis);
        const double h = x_grid_.spacing(axis);
        std::vector<double> pos(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double tau = static_cast<double>(i) * T / static_cast<double>(N);
            pos[i] = (x_of_tau(axis, tau) - origin_[static_cast<std::size_t>(axis)]) / h;
        }
        g = replace_period(g, axis, T);
        cur = resample_axis(cur, g, axis, pos);
    }
    return cur;
}

GridFunction DegenerateMap::pull(const GridFunction& f) const {
    require(f.grid() == tau_grid_, ErrorCode::DimensionMismatch, "function does not live on the map's tau-grid");
    if (identity_) return GridFunction(x_grid_, f.fiber_dim(), f.fiber_p(), f.values());
    GridFunction cur = f;
    Grid g = tau_grid_;
    for (int axis = 0; axis < x_grid_.dim(); ++axis) {
        const std::size_t N = x_grid_.size(axis);
        const double dtau = tau_grid_.spacing(axis);
        std::vector<double> pos(N);
        for (std::size_t i = 0; i < N; ++i) pos[i] = tau_[static_cast<std::size_t>(axis)][i] / dtau;
        g = replace_period(g, axis, x_grid_.period(axis));
        cur = resample_axis(cur, g, axis, pos);
    }
    return cur;
}

GridFunction DegenerateMap::degenerate_derivative(const GridFunction& u, const MultiIndex& alpha) const {
    return degenerate_derivative_tau(push(u), alpha);
}

GridFunction DegenerateMap::degenerate_derivative_tau(const GridFunction& u_tau, const MultiIndex& alpha) const {
    return pull(spectral_derivative(u_tau, alpha));
}

Weight DegenerateMap::tau_weight(const Weight& x_weight) const {
    const auto n = static_cast<std::size_t>(x_grid_.dim());
    std::vector<double> values(tau_grid_.point_count());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const auto t = tau_grid_.position(j);
        std::array<double, 3> x{};
        double jac = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double xk = x_of_tau(static_cast<int>(k), t[k]);
            jac *= gamma_[k](xk);
            x[k] = xk - origin_[k];
        }
        values[j] = x_weight.at(std::span<const double>(x.data(), n), x_grid_).value_or(0.0) * jac;
    }
    return Weight::table(tau_grid_, std::move(values));
}

bool DegenerateMap::is_identity(double tolerance) const {
    if (identity_) return true;
    for (std::size_t k = 0; k < tau_.size(); ++k) {
        for (std::size_t j = 0; j < tau_[k].size(); ++j)
            if (std::abs(tau_[k][j] - (x_nodes_[k][j] - origin_[k])) > tolerance) return false;
    }
    return true;
}

namespace {

EllipticProblem conjugate(const EllipticProblem& problem, const DegenerateMap& map) {
    EllipticProblem local = problem;
    if (!map.is_identity()) local.params.weight = map.tau_weight(problem.params.weight);
    return local;
}

}  // namespace

DegenerateSolution solve_degenerate(const EllipticProblem& problem, const DegenerateMap& map, const GridFunction& f_x,
                                    const NeumannOptions& options) {
    const EllipticProblem local = conjugate(problem, map);
    const GridFunction f_tau = map.push(f_x);
    Solution s = solve_full(local, f_tau, options);
    DegenerateSolution out{map.pull(s.u), std::move(s.u), std::move(s.report)};
    return out;
}

ResolventTable degenerate_resolvent_sweep(const EllipticProblem& problem, const DegenerateMap& map,
                                          std::span<const cplx> lambdas, const ResolventOptions& options) {
    return resolvent_sweep(conjugate(problem, map), lambdas, map.tau_grid(), options);
}

}  // namespace besov

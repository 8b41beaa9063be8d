#include "besov/tools/oracles.hpp"

#include <cmath>
#include <numbers>

#include "besov/error.hpp"

namespace besov::tools {

namespace {

std::vector<double> wavenumbers(const Grid& g, std::size_t flat) {
    const auto idx = g.unflatten(flat);
    std::vector<double> xi(static_cast<std::size_t>(g.dim()));
    for (int k = 0; k < g.dim(); ++k) {
        const auto n = static_cast<long>(g.size(k));
        long m = static_cast<long>(idx[static_cast<std::size_t>(k)]);
        if (m >= n / 2) m -= n;
        xi[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * static_cast<double>(m) / g.period(k);
    }
    return xi;
}

std::vector<double> coordinates(const Grid& g, std::size_t flat) {
    const auto idx = g.unflatten(flat);
    std::vector<double> x(static_cast<std::size_t>(g.dim()));
    for (int k = 0; k < g.dim(); ++k)
        x[static_cast<std::size_t>(k)] = static_cast<double>(idx[static_cast<std::size_t>(k)]) * g.period(k) /
                                         static_cast<double>(g.size(k));
    return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

GridFunction transform(const GridFunction& f, double sign, double scale) {
    const Grid& g = f.grid();
    const std::size_t P = g.point_count(), d = f.fiber_dim();
    std::vector<std::vector<double>> xs(P), ks(P);
    for (std::size_t j = 0; j < P; ++j) {
        xs[j] = coordinates(g, j);
        ks[j] = wavenumbers(g, j);
    }
    GridFunction out(g, d, f.fiber_p());
    for (std::size_t a = 0; a < P; ++a) {
        for (std::size_t b = 0; b < P; ++b) {
            // sign < 0: a indexes frequencies, b points; sign > 0: the reverse.
            const double phase = sign < 0 ? -dot(ks[a], xs[b]) : dot(ks[b], xs[a]);
            const cplx e = std::polar(1.0, phase);
            const auto src = f.at(b);
            auto dst = out.at(a);
            for (std::size_t c = 0; c < d; ++c) dst[c] += e * src[c];
        }
        for (auto& v : out.at(a)) v *= scale;
    }
    return out;
}

}  // namespace

GridFunction direct_dft(const GridFunction& f) {
    return transform(f, -1.0, 1.0 / static_cast<double>(f.grid().point_count()));
}

GridFunction direct_synthesis(const GridFunction& spectrum) { return transform(spectrum, 1.0, 1.0); }

double oracle_cutoff(Profile profile, double t) {
    const double a = std::abs(t);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double x = a - 1.0;
    if (profile == Profile::Cos2) return std::pow(std::cos(std::numbers::pi * x / 2.0), 2);
    // 1 - (10 x^3 - 15 x^4 + 6 x^5)
    return 1.0 - 10.0 * std::pow(x, 3) + 15.0 * std::pow(x, 4) - 6.0 * std::pow(x, 5);
}

double oracle_besov_norm(const GridFunction& f, double s, Exponent q, Exponent r,
                         const std::vector<double>& weight_samples, Profile profile) {
    const Grid& g = f.grid();
    const std::size_t P = g.point_count(), d = f.fiber_dim();
    double nyquist = std::numeric_limits<double>::infinity();
    for (int k = 0; k < g.dim(); ++k)
        nyquist = std::min(nyquist, std::numbers::pi * static_cast<double>(g.size(k)) / g.period(k));
    const int k_max = static_cast<int>(std::floor(std::log2(nyquist))) - 1;
    std::vector<std::vector<double>> xs(P), ks(P);
    for (std::size_t j = 0; j < P; ++j) {
        xs[j] = coordinates(g, j);
        ks[j] = wavenumbers(g, j);
    }
    auto phi = [&](int k, double radius) {
        if (k == 0) return oracle_cutoff(profile, radius);
        return oracle_cutoff(profile, radius / std::exp2(k)) - oracle_cutoff(profile, radius / std::exp2(k - 1));
    };
    double cell = 1.0;
    for (int k = 0; k < g.dim(); ++k) cell *= g.period(k) / static_cast<double>(g.size(k));

    std::vector<double> terms;
    for (int k = 0; k <= k_max; ++k) {
        // Kernel at every lattice offset x_j: K_k(x_j) = (1/P) sum_xi phi_k(xi) e^{i xi x_j}.
        std::vector<cplx> kernel(P);
        for (std::size_t j = 0; j < P; ++j) {
            cplx acc{};
            for (std::size_t m = 0; m < P; ++m) {
                const double w = phi(k, norm2(ks[m]));
                if (w != 0.0) acc += w * std::polar(1.0, dot(ks[m], xs[j]));
            }
            kernel[j] = acc / static_cast<double>(P);
        }
        double acc = 0.0, sup = 0.0;
        for (std::size_t a = 0; a < P; ++a) {
            const auto ia = g.unflatten(a);
            std::vector<cplx> v(d);
            for (std::size_t b = 0; b < P; ++b) {
                // offset index (a - b) mod N per axis
                const auto ib = g.unflatten(b);
                std::array<std::size_t, 3> off{};
                for (int kk = 0; kk < g.dim(); ++kk) {
                    const auto n = g.size(kk);
                    const auto u = static_cast<std::size_t>(kk);
                    off[u] = (ia[u] + n - ib[u]) % n;
                }
                const cplx kv = kernel[g.flatten(std::span<const std::size_t>(off.data(), static_cast<std::size_t>(g.dim())))];
                const auto src = f.at(b);
                for (std::size_t c = 0; c < d; ++c) v[c] += kv * src[c];
            }
            const double fiber = lp_norm(v, f.fiber_p());
            if (q.is_infinite()) {
                sup = std::max(sup, fiber * weight_samples[a]);
            } else {
                acc += std::pow(fiber, q.value()) * weight_samples[a] * cell;
            }
        }
        const double block = q.is_infinite() ? sup : std::pow(acc, 1.0 / q.value());
        terms.push_back(std::exp2(s * k) * block);
    }
    if (r.is_infinite()) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double sum = 0.0;
    for (double t : terms) sum += std::pow(t, r.value());
    return std::pow(sum, 1.0 / r.value());
}

GridFunction oracle_elliptic_solve(const EllipticProblem& problem, const GridFunction& f) {
    for (const auto& t : problem.lower)
        require(!t.varies(), ErrorCode::Unsupported, "the dense oracle handles constant lower terms only");
    const Grid& g = f.grid();
    const GridFunction spec = direct_dft(f);
    GridFunction sol(g, f.fiber_dim(), f.fiber_p());
    const auto d = static_cast<Eigen::Index>(f.fiber_dim());
    for (std::size_t j = 0; j < g.point_count(); ++j) {
        const auto xi = wavenumbers(g, j);
        Matrix m = problem.op.matrix();
        cplx K{};
        for (const auto& [alpha, a] : problem.symbol.coefficients()) {
            cplx mono = 1.0;
            for (int k = 0; k < g.dim(); ++k) mono *= std::pow(cplx(0.0, xi[static_cast<std::size_t>(k)]), alpha[k]);
            K += a * mono;
        }
        m.diagonal().array() += problem.lambda + K;
        for (const auto& t : problem.lower) {
            cplx mono = 1.0;
            for (int k = 0; k < g.dim(); ++k) mono *= std::pow(cplx(0.0, xi[static_cast<std::size_t>(k)]), t.alpha[k]);
            m += mono * t.constant;
        }
        const Vector rhs = Eigen::Map<const Vector>(spec.at(j).data(), d);
        Eigen::Map<Vector>(sol.at(j).data(), d) = m.fullPivLu().solve(rhs);
    }
    return direct_synthesis(sol);
}

}  // namespace besov::tools

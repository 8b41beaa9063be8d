#include "besov/weights.hpp"

#include <algorithm>
#include <cmath>

#include "besov/error.hpp"
#include "besov/parallel.hpp"

namespace besov {
namespace {

double beta_at(const Weight::Power& w, int axis) {
    if (w.beta.size() == 1) return w.beta[0];
    return w.beta.at(static_cast<std::size_t>(axis));
}

double center_at(const Weight::Power& w, int axis) {
    return w.center.empty() ? 0.0 : w.center.at(static_cast<std::size_t>(axis));
}

// Signed offset of t from c reduced to [-L/2, L/2].
double periodic_offset(double t, double c, double period) {
    return std::remainder(t - c, period);
}

double power_factor(double eps, double dist, double beta) {
    if (beta == 0.0) return 1.0;
    return std::pow(eps + dist, beta);
}

}  // namespace

Weight Weight::constant(double value) {
    require(std::isfinite(value) && value > 0, ErrorCode::InvalidArgument,
            "constant weight must be positive");
    return Weight(Constant{value});
}

Weight Weight::power(std::vector<double> beta, double eps, std::vector<double> center) {
    require(!beta.empty(), ErrorCode::InvalidArgument, "power weight needs at least one exponent");
    require(std::isfinite(eps) && eps >= 0, ErrorCode::InvalidArgument,
            "power weight regulariser must be >= 0");
    for (double b : beta) require(std::isfinite(b), ErrorCode::InvalidArgument, "exponent must be finite");
    return Weight(Power{std::move(beta), eps, std::move(center)});
}

Weight Weight::table(Grid grid, std::vector<double> values) {
    require(values.size() == grid.point_count(), ErrorCode::DimensionMismatch,
            "weight table has " + std::to_string(values.size()) + " entries for " +
                std::to_string(grid.point_count()) + " points");
    for (double v : values)
        require(std::isfinite(v) && v > 0, ErrorCode::InvalidArgument,
                "tabulated weight must be positive and finite");
    return Weight(Table{std::move(grid), std::move(values)});
}

bool Weight::is_unit() const noexcept {
    if (const auto* c = std::get_if<Constant>(&kind_)) return c->value == 1.0;
    if (const auto* p = std::get_if<Power>(&kind_))
        return std::all_of(p->beta.begin(), p->beta.end(), [](double b) { return b == 0.0; });
    return false;
}

std::optional<double> Weight::at(std::span<const double> x, const Grid& grid) const {
    if (const auto* c = std::get_if<Constant>(&kind_)) return c->value;
    if (const auto* p = std::get_if<Power>(&kind_)) {
        double v = 1.0;
        for (int k = 0; k < grid.dim(); ++k) {
            const double b = beta_at(*p, k);
            if (b == 0.0) continue;
            const double dist =
                std::abs(periodic_offset(x[static_cast<std::size_t>(k)], center_at(*p, k), grid.period(k)));
            if (p->eps == 0.0 && dist == 0.0) return std::nullopt;
            v *= power_factor(p->eps, dist, b);
        }
        return v;
    }
    const auto& t = std::get<Table>(kind_);
    require(t.grid == grid, ErrorCode::DimensionMismatch, "weight table lives on another grid");
    // Nearest sample.
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int k = 0; k < grid.dim(); ++k) {
        const double h = grid.spacing(k);
        const auto n = static_cast<long>(grid.size(k));
        long j = std::lround(x[static_cast<std::size_t>(k)] / h) % n;
        if (j < 0) j += n;
        idx[static_cast<std::size_t>(k)] = static_cast<std::size_t>(j);
    }
    return t.values[grid.flatten(std::span(idx.data(), static_cast<std::size_t>(grid.dim())))];
}

std::optional<double> Weight::at_frequency(std::span<const double> xi) const {
    if (const auto* c = std::get_if<Constant>(&kind_)) return c->value;
    if (const auto* p = std::get_if<Power>(&kind_)) {
        double v = 1.0;
        for (std::size_t k = 0; k < xi.size(); ++k) {
            const double b = beta_at(*p, static_cast<int>(k));
            if (b == 0.0) continue;
            const double dist = std::abs(xi[k]);
            if (p->eps == 0.0 && dist == 0.0) return std::nullopt;
            v *= power_factor(p->eps, dist, b);
        }
        return v;
    }
    fail(ErrorCode::Unsupported, "tabulated weights cannot be evaluated on the frequency side");
}

std::vector<double> Weight::sample(const Grid& grid) const {
    std::vector<double> out(grid.point_count());
    if (const auto* c = std::get_if<Constant>(&kind_)) {
        std::fill(out.begin(), out.end(), c->value);
        return out;
    }
    if (const auto* t = std::get_if<Table>(&kind_)) {
        require(t->grid == grid, ErrorCode::DimensionMismatch, "weight table lives on another grid");
        return t->values;
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
        const auto x = grid.position(j);
        out[j] = at(std::span(x.data(), static_cast<std::size_t>(grid.dim())), grid).value_or(0.0);
    }
    return out;
}

std::vector<std::vector<double>> Weight::singular_points(const Grid& grid) const {
    const auto* p = std::get_if<Power>(&kind_);
    if (p == nullptr || p->eps > 0.0 || is_unit()) return {};
    std::vector<double> c(static_cast<std::size_t>(grid.dim()));
    for (int k = 0; k < grid.dim(); ++k) c[static_cast<std::size_t>(k)] = center_at(*p, k);
    return {c};
}

double weighted_lq_norm(std::span<const double> fiber_norms, const Grid& grid, Exponent q,
                        std::span<const double> weight_samples) {
    require(q.is_infinite() || q.value() >= 1.0, ErrorCode::InvalidArgument,
            "integrability exponent must be >= 1, got " + q.to_string());
    require(fiber_norms.size() == grid.point_count() && weight_samples.size() == grid.point_count(),
            ErrorCode::DimensionMismatch, "norm and weight tables must cover the grid");
    if (q.is_infinite()) {
        double m = 0.0;
        for (std::size_t j = 0; j < fiber_norms.size(); ++j)
            m = std::max(m, fiber_norms[j] * weight_samples[j]);
        return m;
    }
    const double qv = q.value();
    double scale = 0.0;
    for (double v : fiber_norms) scale = std::max(scale, v);
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    if (qv == 1.0) {
        for (std::size_t j = 0; j < fiber_norms.size(); ++j) s += fiber_norms[j] * weight_samples[j];
        return s * grid.cell_volume();
    }
    for (std::size_t j = 0; j < fiber_norms.size(); ++j)
        s += std::pow(fiber_norms[j] / scale, qv) * weight_samples[j];
    return scale * std::pow(s * grid.cell_volume(), 1.0 / qv);
}

double weighted_lq_norm(const GridFunction& f, Exponent q, const Weight& gamma) {
    std::vector<double> norms(f.point_count());
    for (std::size_t j = 0; j < norms.size(); ++j) norms[j] = f.fiber_norm(j);
    const auto w = gamma.sample(f.grid());
    return weighted_lq_norm(norms, f.grid(), q, w);
}

namespace {

// Integral of (eps + |t - c|_per)^b over [a, a + s] with the quadrature lattice
// c + j delta. Cells touching c are integrated analytically when eps = 0; for
// b <= -1 those cells are dropped.
double axis_integral(double a, double s, double c, double period, double eps, double b, double delta) {
    if (b == 0.0) return s;
    a -= period * std::round((a + 0.5 * s - c) / period);
    const double lo = (a - c) / delta;
    const double hi = (a + s - c) / delta;
    auto piece = [&](double u, double v) -> double {  // offsets from c, same side of 0
        const double mid = 0.5 * (u + v);
        const bool singular_cell = eps == 0.0 && std::abs(mid) < delta;
        if (singular_cell) {
            if (b <= -1.0) return 0.0;
            const double e = b + 1.0;
            return std::abs(std::pow(std::abs(v), e) - std::pow(std::abs(u), e)) / e;
        }
        const double dist = std::abs(std::remainder(mid, period));
        return (v - u) * std::pow(eps + dist, b);
    };
    double total = 0.0;
    double u = lo * delta;
    for (double j = std::floor(lo) + 1.0; u < hi * delta; j += 1.0) {
        const double v = std::min(j * delta, hi * delta);
        if (v > u) total += piece(u, v);
        u = v;
    }
    return total;
}

double table_average(const Weight::Table& t, std::span<const double> center, double side, double exponent) {
    const Grid& g = t.grid;
    const int n = g.dim();
    // Per-axis overlap of the cube with each cell [x_j - h/2, x_j + h/2), taken periodically.
    std::vector<std::vector<std::pair<std::size_t, double>>> overlaps(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double h = g.spacing(k);
        const auto N = static_cast<long>(g.size(k));
        const double a = center[static_cast<std::size_t>(k)] - 0.5 * side;
        const double b = a + side;
        const long j0 = static_cast<long>(std::floor(a / h + 0.5));
        const long j1 = static_cast<long>(std::floor(b / h + 0.5));
        for (long j = j0; j <= j1; ++j) {
            const double cl = (static_cast<double>(j) - 0.5) * h;
            const double len = std::min(b, cl + h) - std::max(a, cl);
            if (len <= 0) continue;
            long jj = j % N;
            if (jj < 0) jj += N;
            overlaps[static_cast<std::size_t>(k)].emplace_back(static_cast<std::size_t>(jj), len);
        }
    }
    double total = 0.0;
    std::array<std::size_t, 3> idx{0, 0, 0};
    auto rec = [&](auto&& self, int axis, double vol) -> void {
        if (axis == n) {
            const double v = t.values[g.flatten(std::span(idx.data(), static_cast<std::size_t>(n)))];
            total += vol * std::pow(v, exponent);
            return;
        }
        for (const auto& [j, len] : overlaps[static_cast<std::size_t>(axis)]) {
            idx[static_cast<std::size_t>(axis)] = j;
            self(self, axis + 1, vol * len);
        }
    };
    rec(rec, 0, 1.0);
    return total / std::pow(side, n);
}

}  // namespace

ApReport ap_constant(const Weight& gamma, const Grid& grid, double p, const ApSample& sample) {
    require(p > 1.0 && std::isfinite(p), ErrorCode::Unsupported,
            "A_p estimator supports 1 < p < inf, got p = " + std::to_string(p));
    require(!sample.scales.empty() && sample.positions_per_scale >= 1, ErrorCode::InvalidArgument,
            "A_p sample needs scales and positions");
    const int n = grid.dim();
    double min_period = grid.period(0);
    for (int k = 1; k < n; ++k) min_period = std::min(min_period, grid.period(k));
    for (double s : sample.scales)
        require(s > 0 && s <= min_period, ErrorCode::InvalidArgument,
                "cube side " + std::to_string(s) + " outside (0, period]");

    ApReport report;
    report.p = p;
    report.min_scale = *std::min_element(sample.scales.begin(), sample.scales.end());
    report.max_scale = *std::max_element(sample.scales.begin(), sample.scales.end());
    const double delta = sample.quadrature_cell > 0 ? sample.quadrature_cell : report.min_scale / 16.0;
    const double dual = -1.0 / (p - 1.0);

    if (gamma.is_table()) {
        for (int k = 0; k < n; ++k)
            require(report.min_scale >= grid.spacing(k), ErrorCode::InvalidArgument,
                    "cube scales below the table resolution");
    }

    // Cube list: lattice centres per scale plus singular centres.
    struct Cube {
        std::vector<double> center;
        double side;
    };
    std::vector<Cube> cubes;
    const auto singular = gamma.singular_points(grid);
    const std::size_t P = sample.positions_per_scale;
    std::size_t lattice = 1;
    for (int k = 0; k < n; ++k) lattice *= P;
    for (double s : sample.scales) {
        for (std::size_t m = 0; m < lattice; ++m) {
            std::vector<double> c(static_cast<std::size_t>(n));
            std::size_t rest = m;
            for (int k = n - 1; k >= 0; --k) {
                c[static_cast<std::size_t>(k)] =
                    static_cast<double>(rest % P) * grid.period(k) / static_cast<double>(P);
                rest /= P;
            }
            cubes.push_back({std::move(c), s});
        }
        for (const auto& c : singular) cubes.push_back({c, s});
    }

    std::vector<double> values(cubes.size());
    parallel_for(cubes.size(), [&](std::size_t i) {
        const auto& cube = cubes[i];
        double value = 1.0;
        if (gamma.is_constant()) {
            const double w = *gamma.at(cube.center, grid);
            value = w * std::pow(std::pow(w, dual), p - 1.0);
        } else if (const auto* pw = gamma.as_power()) {
            for (int k = 0; k < n; ++k) {
                const double b = beta_at(*pw, k);
                const double c = center_at(*pw, k);
                const double a = cube.center[static_cast<std::size_t>(k)] - 0.5 * cube.side;
                const double L = grid.period(k);
                const double avg = axis_integral(a, cube.side, c, L, pw->eps, b, delta) / cube.side;
                const double avg_dual = axis_integral(a, cube.side, c, L, pw->eps, b * dual, delta) / cube.side;
                value *= avg * std::pow(avg_dual, p - 1.0);
            }
        } else {
            const auto& t = *gamma.as_table();
            const double avg = table_average(t, cube.center, cube.side, 1.0);
            const double avg_dual = table_average(t, cube.center, cube.side, dual);
            value = avg * std::pow(avg_dual, p - 1.0);
        }
        values[i] = value;
    });

    report.cube_count = cubes.size();
    report.estimate = 0.0;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        if (values[i] > report.estimate) {
            report.estimate = values[i];
            report.cube_center = cubes[i].center;
            report.cube_side = cubes[i].side;
        }
    }
    return report;
}

}  // namespace besov

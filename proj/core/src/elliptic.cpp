#include "besov/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "besov/error.hpp"
#include "besov/fft.hpp"
#include "besov/multipliers.hpp"
#include "besov/parallel.hpp"

namespace besov {

EllipticSymbol::EllipticSymbol(int dim, int order, std::vector<std::pair<MultiIndex, cplx>> coefficients)
    : dim_(dim), order_(order), coefficients_(std::move(coefficients)) {
    require(dim >= 1 && dim <= 3, ErrorCode::InvalidArgument, "symbol dimension must be 1..3");
    require(order >= 2 && order % 2 == 0, ErrorCode::InvalidArgument,
            "symbol order must be even and >= 2, got " + std::to_string(order));
    for (const auto& [alpha, a] : coefficients_) {
        require(alpha.dim() == dim, ErrorCode::DimensionMismatch, "coefficient multi-index has wrong rank");
        require(alpha.order() == order, ErrorCode::InvalidArgument,
                "principal coefficients need |alpha| = " + std::to_string(order));
    }
}

EllipticSymbol EllipticSymbol::separable(int dim, int order, cplx c) {
    std::vector<std::pair<MultiIndex, cplx>> coeffs;
    for (int k = 0; k < dim; ++k) coeffs.emplace_back(MultiIndex::unit(dim, k, order), c);
    return EllipticSymbol(dim, order, std::move(coeffs));
}

cplx EllipticSymbol::operator()(std::span<const double> xi) const {
    cplx k{};
    for (const auto& [alpha, a] : coefficients_) k += a * monomial(alpha, xi);
    return k;
}

Ellipticity check_ellipticity(const EllipticSymbol& symbol, const Grid& grid, double tolerance) {
    require(grid.dim() == symbol.dim(), ErrorCode::DimensionMismatch, "grid and symbol dimensions differ");
    const bool zero = std::all_of(symbol.coefficients().begin(), symbol.coefficients().end(),
                                  [](const auto& c) { return c.second == cplx{}; });
    require(!zero, ErrorCode::Degenerate, "principal symbol is identically zero");
    Ellipticity e;
    e.m0 = std::numeric_limits<double>::infinity();
    const auto n = static_cast<std::size_t>(grid.dim());
    for (std::size_t j = 0; j < grid.point_count(); ++j) {
        const auto xi = grid.frequency(j);
        double denom = 0.0;
        for (std::size_t k = 0; k < n; ++k) denom += std::pow(xi[k], symbol.order());
        if (denom == 0.0) continue;
        const cplx K = symbol(std::span<const double>(xi.data(), n));
        const double ratio = std::abs(K) / denom;
        if (ratio < e.m0) {
            e.m0 = ratio;
            e.witness.assign(xi.begin(), xi.begin() + static_cast<long>(n));
        }
        if (K != cplx{}) e.sector_angle = std::max(e.sector_angle, std::abs(std::arg(K)));
    }
    e.satisfied = e.m0 > tolerance;
    return e;
}

std::vector<double> lower_term_bounds(const EllipticProblem& problem) {
    std::vector<double> out;
    const double order = problem.symbol.order();
    const Exponent p = problem.op.fiber_p();
    for (const auto& term : problem.lower) {
        const double e = 1.0 - term.alpha.order() / order - term.mu;
        const Matrix inv = fractional_power(problem.op, -e);
        double sup = 0.0;
        const std::size_t count = term.varies() ? term.field.size() : 1;
        for (std::size_t j = 0; j < count; ++j) sup = std::max(sup, operator_norm(term.at(j) * inv, p, p));
        out.push_back(sup);
    }
    return out;
}

namespace {

std::string describe(std::span<const double> xi) {
    std::ostringstream s;
    s << "(";
    for (std::size_t k = 0; k < xi.size(); ++k) s << (k ? ", " : "") << xi[k];
    s << ")";
    return s.str();
}

void check_problem(const EllipticProblem& problem, const GridFunction& f) {
    require(f.grid().dim() == problem.symbol.dim(), ErrorCode::DimensionMismatch,
            "grid and symbol dimensions differ");
    require(f.fiber_dim() == problem.op.dim(), ErrorCode::DimensionMismatch,
            "fiber dimension " + std::to_string(f.fiber_dim()) + " does not match the operator (" +
                std::to_string(problem.op.dim()) + ")");
    for (const auto& t : problem.lower) {
        require(t.alpha.dim() == problem.symbol.dim() && t.alpha.order() < problem.symbol.order(),
                ErrorCode::InvalidArgument, "lower-order terms need |alpha| < 2l");
        require(!t.varies() || t.field.size() == f.point_count(), ErrorCode::DimensionMismatch,
                "coefficient field does not cover the grid");
    }
}

double l2(const GridFunction& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(s);
}

GridFunction pointwise(const GridFunction& u, const std::function<const Matrix&(std::size_t)>& m) {
    GridFunction out(u.grid(), u.fiber_dim(), u.fiber_p());
    const auto d = static_cast<Eigen::Index>(u.fiber_dim());
    for (std::size_t j = 0; j < u.point_count(); ++j) {
        Eigen::Map<const Vector> in(u.at(j).data(), d);
        Eigen::Map<Vector> res(out.at(j).data(), d);
        res = m(j) * in;
    }
    return out;
}

}  // namespace

GridFunction apply_principal_resolvent(const EllipticProblem& problem, const GridFunction& f) {
    check_problem(problem, f);
    GridFunction spec = forward_transform(f);
    const Grid& g = f.grid();
    const auto n = static_cast<std::size_t>(g.dim());
    const auto& es = problem.op.spectrum();
    const auto d = static_cast<Eigen::Index>(f.fiber_dim());
    std::vector<int> singular(g.point_count(), 0);
    parallel_for(g.point_count(), [&](std::size_t j) {
        const auto xi = g.frequency(j);
        const cplx omega = problem.lambda + problem.symbol(std::span<const double>(xi.data(), n));
        double hi = 0.0, lo = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < d; ++i) {
            const double a = std::abs(es.values(i) + omega);
            hi = std::max(hi, a);
            lo = std::min(lo, a);
        }
        if (lo == 0.0 || es.vector_condition * hi / lo > 1e12) {
            singular[j] = 1;
            return;
        }
        Eigen::Map<Vector> v(spec.at(j).data(), d);
        Vector y = es.inverse_vectors * v;
        for (Eigen::Index i = 0; i < d; ++i) y(i) /= es.values(i) + omega;
        v = es.vectors * y;
    });
    for (std::size_t j = 0; j < singular.size(); ++j) {
        if (singular[j]) {
            const auto xi = g.frequency(j);
            fail(ErrorCode::SingularMode,
                 "A + lambda + K(xi) is numerically singular at xi = " + describe(std::span<const double>(xi.data(), n)));
        }
    }
    return inverse_transform(spec);
}

GridFunction apply_lower(const EllipticProblem& problem, const GridFunction& u) {
    check_problem(problem, u);
    GridFunction out(u.grid(), u.fiber_dim(), u.fiber_p());
    for (const auto& term : problem.lower) {
        const GridFunction du = spectral_derivative(u, term.alpha);
        out += pointwise(du, [&](std::size_t j) -> const Matrix& { return term.at(j); });
    }
    return out;
}

GridFunction apply_operator(const EllipticProblem& problem, const GridFunction& u) {
    check_problem(problem, u);
    GridFunction spec = forward_transform(u);
    const Grid& g = u.grid();
    const auto n = static_cast<std::size_t>(g.dim());
    scale_modes(spec, [&](std::size_t j) {
        const auto xi = g.frequency(j);
        return problem.symbol(std::span<const double>(xi.data(), n));
    });
    GridFunction out = inverse_transform(spec);
    const Matrix& a = problem.op.matrix();
    out += pointwise(u, [&](std::size_t) -> const Matrix& { return a; });
    GridFunction lam = u;
    lam *= problem.lambda;
    out += lam;
    if (!problem.lower.empty()) out += apply_lower(problem, u);
    return out;
}

double relative_residual(const EllipticProblem& problem, const GridFunction& u, const GridFunction& f) {
    GridFunction r = apply_operator(problem, u);
    r -= f;
    const double nf = l2(f);
    return nf > 0 ? l2(r) / nf : l2(r);
}

void fill_coercive_terms(SolveReport& report, const EllipticProblem& problem, const GridFunction& u,
                         const GridFunction& f, const DyadicPartition& partition) {
    // Filled on a copy so an out-of-band refusal leaves the report untouched.
    SolveReport out = report;
    const int n = u.grid().dim();
    out.top_alphas = multi_indices_of_order(n, problem.symbol.order());
    out.derivative_norms.clear();
    double sum = 0.0;
    for (const auto& alpha : out.top_alphas) {
        const double v = besov_norm(spectral_derivative(u, alpha), problem.params, partition);
        out.derivative_norms.push_back(v);
        sum += v;
    }
    const Matrix& a = problem.op.matrix();
    out.operator_norm =
        besov_norm(pointwise(u, [&](std::size_t) -> const Matrix& { return a; }), problem.params, partition);
    out.solution_norm = besov_norm(u, problem.params, partition);
    out.forcing_norm = besov_norm(f, problem.params, partition);
    out.coercive_ratio = out.forcing_norm > 0 ? (sum + out.operator_norm) / out.forcing_norm : 0.0;
    report = std::move(out);
}

Solution solve_principal(const EllipticProblem& problem, const GridFunction& f) {
    require(problem.lower.empty(), ErrorCode::InvalidArgument,
            "solve_principal handles problems without lower-order terms");
    Solution s{apply_principal_resolvent(problem, f), {}};
    s.report.residual = relative_residual(problem, s.u, f);
    const DyadicPartition partition(f.grid(), problem.profile);
    try {
        fill_coercive_terms(s.report, problem, s.u, f, partition);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::OutOfBand) throw;
    }
    return s;
}

double contraction_estimate(const EllipticProblem& problem, const Grid& grid, std::size_t fiber_dim,
                            std::uint64_t seed, int iterations) {
    if (problem.lower.empty()) return 0.0;
    GridFunction x = random_band_limited(grid, fiber_dim, problem.op.fiber_p(), grid.nyquist_radius() * 2.0,
                                         seed, 0);
    double q = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double nx = l2(x);
        if (nx == 0.0) return 0.0;
        x *= 1.0 / nx;
        GridFunction y = apply_lower(problem, apply_principal_resolvent(problem, x));
        q = l2(y);
        x = std::move(y);
    }
    return q;
}

namespace {

double iterate_distance(const GridFunction& a, const GridFunction& b, const BesovParams& params,
                        const DyadicPartition& partition) {
    const GridFunction diff = a - b;
    try {
        return besov_norm(diff, params, partition);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::OutOfBand) throw;
        return weighted_lq_norm(diff, params.q, params.weight);
    }
}

}  // namespace

Solution solve_full(const EllipticProblem& problem, const GridFunction& f, const NeumannOptions& options) {
    if (problem.lower.empty()) return solve_principal(problem, f);
    check_problem(problem, f);
    const double q = options.contraction >= 0.0
                         ? options.contraction
                         : contraction_estimate(problem, f.grid(), f.fiber_dim(), options.seed);
    require(q < 1.0, ErrorCode::NonContractive,
            "measured contraction " + std::to_string(q) + " >= 1; increase |lambda|");
    const DyadicPartition partition(f.grid(), problem.profile);
    Solution s{apply_principal_resolvent(problem, f), {}};
    s.report.contraction = q;
    double scale = 0.0;
    try {
        scale = besov_norm(s.u, problem.params, partition);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::OutOfBand) throw;
        scale = weighted_lq_norm(s.u, problem.params.q, problem.params.weight);
    }
    for (int it = 0; it < options.max_iterations; ++it) {
        GridFunction rhs = f;
        rhs -= apply_lower(problem, s.u);
        GridFunction next = apply_principal_resolvent(problem, rhs);
        const double dist = iterate_distance(next, s.u, problem.params, partition);
        s.report.iterate_distances.push_back(dist);
        s.u = std::move(next);
        s.report.iterations = it + 1;
        if (dist <= options.tolerance * std::max(scale, std::numeric_limits<double>::min())) break;
    }
    if (!options.with_report) return s;
    s.report.residual = relative_residual(problem, s.u, f);
    try {
        fill_coercive_terms(s.report, problem, s.u, f, partition);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::OutOfBand) throw;
    }
    return s;
}

std::vector<GridFunction> single_mode_probes(const Grid& grid, std::size_t fiber_dim, Exponent fiber_p,
                                             double band_radius) {
    std::vector<GridFunction> out;
    for (std::size_t j = 0; j < grid.point_count(); ++j) {
        if (grid.frequency_radius(j) > band_radius) continue;
        for (std::size_t c = 0; c < fiber_dim; ++c) {
            GridFunction spec(grid, fiber_dim, fiber_p);
            spec.at(j)[c] = 1.0;
            out.push_back(inverse_transform(spec));
        }
    }
    return out;
}

double ResolventTable::column_variation(std::size_t column) const {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : values) {
        lo = std::min(lo, row.at(column));
        hi = std::max(hi, row.at(column));
    }
    if (hi == 0.0) return 1.0;
    return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

double ResolventTable::max_column_variation() const {
    double v = 1.0;
    for (std::size_t c = 0; c < columns.size(); ++c) v = std::max(v, column_variation(c));
    return v;
}

ResolventTable resolvent_sweep(const EllipticProblem& problem, std::span<const cplx> lambdas, const Grid& grid,
                               const ResolventOptions& options) {
    require(!lambdas.empty(), ErrorCode::InvalidArgument, "lambda list is empty");
    const int n = grid.dim();
    const double order = problem.symbol.order();
    const DyadicPartition partition(grid, problem.profile);
    const std::size_t d = problem.op.dim();
    const Exponent p = problem.op.fiber_p();

    bool varying = false;
    for (const auto& t : problem.lower) varying = varying || t.varies();
    const double band = varying ? partition.band_radius() / 2.0 : partition.band_radius();

    std::vector<GridFunction> probes;
    if (options.single_mode_probes) {
        auto modes = single_mode_probes(grid, d, p, band);
        if (options.max_mode_probes > 0 && modes.size() > options.max_mode_probes) {
            const std::size_t stride = (modes.size() + options.max_mode_probes - 1) / options.max_mode_probes;
            for (std::size_t i = 0; i < modes.size(); i += stride) probes.push_back(std::move(modes[i]));
        } else {
            probes = std::move(modes);
        }
    }
    for (std::size_t i = 0; i < options.random_probes; ++i)
        probes.push_back(random_band_limited(grid, d, p, band, options.seed, i));

    ResolventTable table;
    const auto alphas = multi_indices_up_to(n, problem.symbol.order());
    for (const auto& a : alphas) {
        std::string name = "D^(";
        for (int k = 0; k < n; ++k) name += (k ? "," : "") + std::to_string(a[k]);
        table.columns.push_back(name + ")");
    }
    table.columns.emplace_back("A");

    const Matrix& amat = problem.op.matrix();
    auto image = options.operator_image ? options.operator_image : [&amat](const GridFunction& u) {
        return pointwise(u, [&](std::size_t) -> const Matrix& { return amat; });
    };

    for (const cplx lambda : lambdas) {
        EllipticProblem local = problem;
        local.lambda = lambda;
        const double mag = std::abs(lambda);
        NeumannOptions neumann = options.neumann;
        neumann.with_report = false;
        if (!local.lower.empty() && neumann.contraction < 0.0)
            neumann.contraction = contraction_estimate(local, grid, d, neumann.seed);
        std::vector<std::vector<double>> per_probe(probes.size());
        parallel_for(probes.size(), [&](std::size_t i) {
            const GridFunction& f = probes[i];
            const double fn = besov_norm(f, local.params, partition);
            auto& row = per_probe[i];
            row.assign(table.columns.size(), 0.0);
            if (fn == 0.0) return;
            const GridFunction u = local.lower.empty() ? apply_principal_resolvent(local, f)
                                                       : solve_full(local, f, neumann).u;
            for (std::size_t c = 0; c < alphas.size(); ++c) {
                const double scale = std::pow(mag, 1.0 - alphas[c].order() / order);
                row[c] = scale * besov_norm(spectral_derivative(u, alphas[c]), local.params, partition) / fn;
            }
            row.back() = besov_norm(image(u), local.params, partition) / fn;
        });
        std::vector<double> best(table.columns.size(), 0.0);
        for (const auto& row : per_probe)
            for (std::size_t c = 0; c < row.size(); ++c) best[c] = std::max(best[c], row[c]);
        table.lambdas.push_back(lambda);
        table.values.push_back(std::move(best));
    }
    return table;
}

}  // namespace besov

#include "besov/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "besov/error.hpp"
#include "besov/fft.hpp"
#include "besov/parallel.hpp"

namespace besov {

Symbol::Symbol(std::size_t d_in, Exponent p_in, std::size_t d_out, Exponent p_out, Eval eval,
               Derivative derivative, int derivative_depth)
    : d_in_(d_in), d_out_(d_out), p_in_(p_in), p_out_(p_out), eval_(std::move(eval)),
      derivative_(std::move(derivative)), depth_(derivative_depth) {
    require(d_in_ >= 1 && d_out_ >= 1, ErrorCode::InvalidArgument, "symbol fibers must be nonempty");
    require(static_cast<bool>(eval_), ErrorCode::InvalidArgument, "symbol needs an evaluator");
}

Symbol Symbol::square(std::size_t d, Exponent p, Eval eval, Derivative derivative, int derivative_depth) {
    return Symbol(d, p, d, p, std::move(eval), std::move(derivative), derivative_depth);
}

Matrix Symbol::operator()(std::span<const double> xi) const {
    Matrix m = eval_(xi);
    require(m.rows() == static_cast<Eigen::Index>(d_out_) && m.cols() == static_cast<Eigen::Index>(d_in_),
            ErrorCode::DimensionMismatch,
            "symbol returned a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                " matrix, expected " + std::to_string(d_out_) + "x" + std::to_string(d_in_));
    return m;
}

std::optional<Matrix> Symbol::derivative(std::span<const double> xi, const MultiIndex& alpha) const {
    if (alpha.order() == 0) return (*this)(xi);
    if (!derivative_ || alpha.order() > depth_) return std::nullopt;
    return derivative_(xi, alpha);
}

Symbol Symbol::dilated(double a) const {
    auto eval = [base = eval_, a](std::span<const double> xi) {
        std::array<double, 3> y{0, 0, 0};
        for (std::size_t k = 0; k < xi.size(); ++k) y[k] = a * xi[k];
        return base(std::span<const double>(y.data(), xi.size()));
    };
    Derivative deriv;
    if (derivative_) {
        deriv = [base = derivative_, a](std::span<const double> xi, const MultiIndex& alpha) {
            std::array<double, 3> y{0, 0, 0};
            for (std::size_t k = 0; k < xi.size(); ++k) y[k] = a * xi[k];
            Matrix m = base(std::span<const double>(y.data(), xi.size()), alpha);
            return Matrix(m * std::pow(a, alpha.order()));
        };
    }
    return Symbol(d_in_, p_in_, d_out_, p_out_, std::move(eval), std::move(deriv), depth_);
}

Symbol operator+(const Symbol& a, const Symbol& b) {
    require(a.d_in_ == b.d_in_ && a.d_out_ == b.d_out_, ErrorCode::DimensionMismatch,
            "symbol sum needs matching fibers");
    auto eval = [ea = a.eval_, eb = b.eval_](std::span<const double> xi) {
        return Matrix(ea(xi) + eb(xi));
    };
    Symbol::Derivative deriv;
    int depth = 0;
    if (a.derivative_ && b.derivative_) {
        deriv = [da = a.derivative_, db = b.derivative_](std::span<const double> xi, const MultiIndex& al) {
            return Matrix(da(xi, al) + db(xi, al));
        };
        depth = std::min(a.depth_, b.depth_);
    }
    return Symbol(a.d_in_, a.p_in_, a.d_out_, a.p_out_, std::move(eval), std::move(deriv), depth);
}

Symbol operator*(const Symbol& a, const Symbol& b) {
    require(a.d_in_ == b.d_out_, ErrorCode::DimensionMismatch, "symbol product needs matching inner fiber");
    auto eval = [ea = a.eval_, eb = b.eval_](std::span<const double> xi) {
        return Matrix(ea(xi) * eb(xi));
    };
    return Symbol(b.d_in_, b.p_in_, a.d_out_, a.p_out_, std::move(eval));
}

Symbol Symbol::scaled(std::function<double(std::span<const double>)> scale) const {
    auto eval = [base = eval_, scale = std::move(scale)](std::span<const double> xi) {
        return Matrix(base(xi) * scale(xi));
    };
    return Symbol(d_in_, p_in_, d_out_, p_out_, std::move(eval));
}

std::vector<Matrix> Symbol::tabulate(const Grid& grid) const {
    std::vector<Matrix> out(grid.point_count());
    const auto n = static_cast<std::size_t>(grid.dim());
    parallel_for(out.size(), [&](std::size_t j) {
        const auto xi = grid.frequency(j);
        out[j] = (*this)(std::span<const double>(xi.data(), n));
    });
    return out;
}

GridFunction apply_multiplier(const Symbol& m, const GridFunction& f) {
    require(f.fiber_dim() == m.d_in(), ErrorCode::DimensionMismatch,
            "function fiber " + std::to_string(f.fiber_dim()) + " does not match symbol domain " +
                std::to_string(m.d_in()));
    require(f.fiber_p() == m.p_in(), ErrorCode::DimensionMismatch,
            "function fiber exponent does not match the symbol domain");
    const GridFunction spec = forward_transform(f);
    GridFunction out(f.grid(), m.d_out(), m.p_out());
    const Grid& g = f.grid();
    const auto n = static_cast<std::size_t>(g.dim());
    const auto din = static_cast<Eigen::Index>(m.d_in());
    const auto dout = static_cast<Eigen::Index>(m.d_out());
    parallel_for(g.point_count(), [&](std::size_t j) {
        const auto xi = g.frequency(j);
        const Matrix mj = m(std::span<const double>(xi.data(), n));
        Eigen::Map<const Vector> in(spec.at(j).data(), din);
        Eigen::Map<Vector> res(out.at(j).data(), dout);
        res = mj * in;
    });
    return inverse_transform(out);
}

namespace {

double binomial(int a, int j) {
    double r = 1.0;
    for (int i = 1; i <= j; ++i) r = r * static_cast<double>(a - j + i) / static_cast<double>(i);
    return r;
}

// Central difference of order alpha with per-axis step h (stencil at half steps for odd orders).
Matrix central_difference(const Symbol& m, std::span<const double> xi, const MultiIndex& alpha,
                          std::span<const double> h) {
    const int n = alpha.dim();
    Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(m.d_out()), static_cast<Eigen::Index>(m.d_in()));
    std::array<int, 3> j{0, 0, 0};
    auto rec = [&](auto&& self, int axis, double coef) -> void {
        if (axis == n) {
            std::array<double, 3> y{0, 0, 0};
            for (int k = 0; k < n; ++k) {
                const auto uk = static_cast<std::size_t>(k);
                y[uk] = xi[uk] + (0.5 * alpha[k] - j[uk]) * h[uk];
            }
            acc += coef * m(std::span<const double>(y.data(), static_cast<std::size_t>(n)));
            return;
        }
        const int a = alpha[axis];
        for (int i = 0; i <= a; ++i) {
            j[static_cast<std::size_t>(axis)] = i;
            const double c = ((i % 2) ? -1.0 : 1.0) * binomial(a, i) /
                             std::pow(h[static_cast<std::size_t>(axis)], a);
            self(self, axis + 1, coef * c);
        }
    };
    rec(rec, 0, 1.0);
    return acc;
}

}  // namespace

MikhlinResult mikhlin_constant(const Symbol& m, const Grid& grid, int depth) {
    require(depth >= 0, ErrorCode::InvalidArgument, "derivative depth must be >= 0");
    require(depth <= std::max(m.analytic_depth(), kMaxDifferenceDepth), ErrorCode::InvalidArgument,
            "derivative depth " + std::to_string(depth) + " exceeds the available depth");
    const int n = grid.dim();
    const auto alphas = multi_indices_up_to(n, depth);
    std::vector<double> h(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) h[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi / grid.period(k);

    MikhlinResult result;
    result.finite_difference = depth > m.analytic_depth();
    std::vector<double> sup(grid.point_count(), 0.0);
    parallel_for(grid.point_count(), [&](std::size_t j) {
        const auto xi = grid.frequency(j);
        const std::span<const double> x(xi.data(), static_cast<std::size_t>(n));
        const double r = grid.frequency_radius(j);
        double best = 0.0;
        for (const auto& alpha : alphas) {
            const auto analytic = m.derivative(x, alpha);
            const Matrix d = analytic ? *analytic : central_difference(m, x, alpha, h);
            const double v = std::pow(1.0 + r, alpha.order()) * operator_norm(d, m.p_in(), m.p_out());
            best = std::max(best, v);
        }
        sup[j] = best;
    });
    result.value = *std::max_element(sup.begin(), sup.end());
    return result;
}

MikhlinGrowth mikhlin_growth(const Symbol& m, std::span<const Grid> grids, int depth, double tolerance) {
    require(grids.size() >= 2, ErrorCode::InvalidArgument, "growth sweep needs at least two grids");
    MikhlinGrowth g;
    for (const auto& grid : grids) g.values.push_back(mikhlin_constant(m, grid, depth).value);
    const double a = g.values[g.values.size() - 2];
    const double b = g.values.back();
    g.bounded = std::abs(b - a) <= tolerance * std::max(a, b);
    return g;
}

Grid SymbolGrid::grid() const {
    require(sizes.size() == spacing.size(), ErrorCode::DimensionMismatch, "symbol grid shape mismatch");
    std::vector<double> periods(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) periods[k] = static_cast<double>(sizes[k]) * spacing[k];
    return Grid(sizes, periods);
}

std::array<double, 3> SymbolGrid::xi(std::size_t flat) const {
    const Grid g = grid();
    const auto idx = g.unflatten(flat);
    std::array<double, 3> out{0, 0, 0};
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const auto n = static_cast<long>(sizes[k]);
        const long j = static_cast<long>(idx[k]);
        out[k] = static_cast<double>(j < n / 2 ? j : j - n) * spacing[k];
    }
    return out;
}

double besov_functional(const Symbol& m, Exponent p, const Weight& gamma, const SymbolGrid& symbol_grid,
                        std::span<const double> dilations, Profile profile) {
    require(!dilations.empty(), ErrorCode::InvalidArgument, "dilation grid is empty");
    require(!p.is_infinite() && p.value() >= 1.0, ErrorCode::InvalidArgument, "need 1 <= p < inf");
    const Grid g = symbol_grid.grid();
    const DyadicPartition partition(g, profile);
    const auto n = static_cast<std::size_t>(g.dim());
    const std::size_t din = m.d_in(), dout = m.d_out();
    BesovParams params;
    params.s = static_cast<double>(n) / p.value();
    params.q = p;
    params.r = Exponent(1.0);
    params.weight = gamma;

    // Points carry xi; fiber holds the matrix entries column-major.
    std::vector<std::array<double, 3>> xis(g.point_count());
    for (std::size_t j = 0; j < xis.size(); ++j) xis[j] = symbol_grid.xi(j);

    double best = std::numeric_limits<double>::infinity();
    for (double a : dilations) {
        require(a > 0, ErrorCode::InvalidArgument, "dilations must be positive");
        GridFunction table(g, din * dout, Exponent(2.0));
        parallel_for(g.point_count(), [&](std::size_t j) {
            std::array<double, 3> y{0, 0, 0};
            for (std::size_t k = 0; k < n; ++k) y[k] = a * xis[j][k];
            const Matrix v = m(std::span<const double>(y.data(), n));
            std::copy(v.data(), v.data() + v.size(), table.at(j).begin());
        });
        const auto rows = static_cast<Eigen::Index>(dout), cols = static_cast<Eigen::Index>(din);
        const FiberNorm norm = [&](std::span<const cplx> value, std::size_t) {
            Eigen::Map<const Matrix> mat(value.data(), rows, cols);
            return operator_norm(mat, m.p_in(), m.p_out());
        };
        try {
            best = std::min(best, besov_norm(table, params, partition, norm));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OutOfBand) throw;
        }
    }
    require(std::isfinite(best), ErrorCode::OutOfBand,
            "the dilated symbol leaves the representable band at every sampled dilation");
    return best;
}

std::vector<double> block_besov_functionals(const Symbol& m, Exponent p, const Weight& gamma,
                                            const SymbolGrid& symbol_grid, std::span<const double> dilations,
                                            int k_max, Profile profile) {
    require(k_max >= 0, ErrorCode::InvalidArgument, "k_max must be >= 0");
    // phi_k depends only on the profile, so any partition evaluates it.
    const DyadicPartition bumps(symbol_grid.grid(), profile);
    // The support of phi_k(a xi) has outer radius 2^{k+1} / a. Past the lattice
    // or inside a few lattice steps it samples as zero, so only dilations that
    // keep it between 8 steps and the lattice edge are used.
    double reach = std::numeric_limits<double>::infinity(), step = 0.0;
    for (std::size_t j = 0; j < symbol_grid.sizes.size(); ++j) {
        reach = std::min(reach, 0.5 * static_cast<double>(symbol_grid.sizes[j]) * symbol_grid.spacing[j]);
        step = std::max(step, symbol_grid.spacing[j]);
    }
    std::vector<double> out;
    for (int k = 0; k <= k_max; ++k) {
        std::vector<double> kept;
        for (double a : dilations) {
            const double outer = std::ldexp(1.0, k + 1) / a;
            if (outer >= 8.0 * step && outer <= reach) kept.push_back(a);
        }
        require(!kept.empty(), ErrorCode::OutOfBand,
                "block " + std::to_string(k) + " leaves the symbol lattice at every sampled dilation");
        const Symbol piece = m.scaled([&bumps, k](std::span<const double> xi) {
            double r2 = 0.0;
            for (double x : xi) r2 += x * x;
            return bumps.phi(k, std::sqrt(r2));
        });
        out.push_back(besov_functional(piece, p, gamma, symbol_grid, kept, profile));
    }
    return out;
}

std::vector<double> dilation_grid(double lo_exponent, double hi_exponent, double step) {
    require(step > 0 && hi_exponent >= lo_exponent, ErrorCode::InvalidArgument, "bad dilation grid");
    std::vector<double> out;
    for (double e = lo_exponent; e <= hi_exponent + 1e-12; e += step) out.push_back(std::exp2(e));
    return out;
}

GridFunction random_band_limited(const Grid& grid, std::size_t fiber_dim, Exponent fiber_p,
                                 double band_radius, std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    GridFunction spec(grid, fiber_dim, fiber_p);
    for (std::size_t j = 0; j < grid.point_count(); ++j) {
        if (grid.frequency_radius(j) > band_radius) continue;
        for (auto& v : spec.at(j)) {
            const double re = normal(rng);
            const double im = normal(rng);
            v = cplx{re, im};
        }
    }
    return inverse_transform(spec);
}

namespace {

double space_norm(const GridFunction& f, const NormSpace& space, const DyadicPartition* partition) {
    if (const auto* l = std::get_if<LebesgueSpace>(&space)) return weighted_lq_norm(f, l->q, l->weight);
    return besov_norm(f, std::get<BesovSpace>(space).params, *partition);
}

}  // namespace

double empirical_operator_norm(const Symbol& m, const Grid& grid, const NormSpace& space,
                               std::size_t probes, std::uint64_t seed) {
    std::optional<DyadicPartition> partition;
    double band = grid.nyquist_radius();
    if (const auto* b = std::get_if<BesovSpace>(&space)) {
        partition.emplace(grid, b->profile);
        band = partition->band_radius();
    }
    const auto n = static_cast<std::size_t>(grid.dim());

    // Single-mode, single-channel probes: T_m maps exp(i xi x) e_c to exp(i xi x) m(xi) e_c,
    // and both norms share the same spatial factor, so the ratio is ||m(xi) e_c||.
    std::vector<double> mode_best(grid.point_count(), 0.0);
    parallel_for(grid.point_count(), [&](std::size_t j) {
        if (partition && grid.frequency_radius(j) > band) return;
        const auto xi = grid.frequency(j);
        const Matrix mj = m(std::span<const double>(xi.data(), n));
        double best = 0.0;
        for (Eigen::Index c = 0; c < mj.cols(); ++c) {
            const Vector col = mj.col(c);
            best = std::max(best, lp_norm(std::span<const cplx>(col.data(), static_cast<std::size_t>(col.size())),
                                          m.p_out()));
        }
        mode_best[j] = best;
    });
    double result = *std::max_element(mode_best.begin(), mode_best.end());

    std::vector<double> ratios(probes, 0.0);
    const DyadicPartition* part = partition ? &*partition : nullptr;
    parallel_for(probes, [&](std::size_t i) {
        // Stay strictly inside the band so the image is representable.
        const GridFunction f = random_band_limited(grid, m.d_in(), m.p_in(), band, seed, i);
        const double denom = space_norm(f, space, part);
        if (denom == 0.0) return;
        ratios[i] = space_norm(apply_multiplier(m, f), space, part) / denom;
    });
    for (double r : ratios) result = std::max(result, r);
    return result;
}

double fourier_type_ratio(const GridFunction& f, Exponent p, const Weight& gamma) {
    const double denom = weighted_lq_norm(f, p, gamma);
    require(denom > 0.0, ErrorCode::Degenerate, "Fourier-type ratio needs f != 0");
    return frequency_lq_norm(forward_transform(f), p.conjugate(), gamma) / denom;
}

double fourier_type_constant(Exponent p, const Weight& gamma, const Grid& grid, std::size_t probes,
                             std::uint64_t seed) {
    require(!p.is_infinite() && p.value() >= 1.0 && p.value() <= 2.0, ErrorCode::InvalidArgument,
            "Fourier type needs p in [1, 2], got " + p.to_string());
    require(probes >= 1, ErrorCode::InvalidArgument, "need at least one probe");
    std::vector<double> ratios(probes);
    parallel_for(probes, [&](std::size_t i) {
        ratios[i] = fourier_type_ratio(random_band_limited(grid, 1, Exponent(2.0), grid.nyquist_radius(), seed, i),
                                       p, gamma);
    });
    return *std::max_element(ratios.begin(), ratios.end());
}

}  // namespace besov

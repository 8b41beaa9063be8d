#include "besov/tools/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "besov/degenerate.hpp"
#include "besov/elliptic.hpp"
#include "besov/embedding.hpp"
#include "besov/error.hpp"
#include "besov/fft.hpp"
#include "besov/io.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/multipliers.hpp"
#include "besov/operators.hpp"
#include "besov/parabolic.hpp"
#include "besov/systems.hpp"
#include "besov/weights.hpp"
#include "besov/tools/commands.hpp"
#include "besov/tools/oracles.hpp"
#include "besov/tools/scenarios.hpp"

namespace besov::tools {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSector = 3.0 * std::numbers::pi / 4.0;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

class Checks {
public:
    void expect(bool ok, const std::string& what) {
        lines_.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        passed_ = passed_ && ok;
    }
    void note(const std::string& what) { lines_.push_back("     " + what); }
    bool passed() const { return passed_; }
    std::vector<std::string>& lines() { return lines_; }

private:
    std::vector<std::string> lines_;
    bool passed_ = true;
};

struct Context {
    std::uint64_t seed;
    std::filesystem::path scratch;
};

Grid grid1(std::size_t n, double L = kTwoPi) { return Grid({n}, {L}); }

Matrix diag_matrix(const std::vector<double>& entries) {
    const auto d = static_cast<Eigen::Index>(entries.size());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return m;
}

std::vector<double> pow2_entries(double sigma, std::size_t d) {
    std::vector<double> e(d);
    for (std::size_t i = 0; i < d; ++i) e[i] = std::exp2(sigma * static_cast<double>(i + 1));
    return e;
}

PositiveOperator diag_operator(const std::vector<double>& entries, Exponent p = Exponent(2.0)) {
    return require_positive(diag_matrix(entries), kSector, {}, p);
}

EllipticSymbol laplacian(int n) { return EllipticSymbol::separable(n, 2, -1.0); }

GridFunction mode_function(const Grid& g, std::size_t d, std::span<const long> modes, std::size_t channel,
                           cplx amplitude = 1.0) {
    GridFunction spec(g, d);
    spec.at(g.mode_index(modes))[channel] = amplitude;
    return inverse_transform(spec);
}

double rel_diff(const GridFunction& a, const GridFunction& b) {
    const double scale = std::max(b.max_abs(), 1e-300);
    return a.max_abs_diff(b) / scale;
}

double l2_values(const GridFunction& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------

void partition_soundness(const Context&, Checks& c) {
    for (Profile profile : {Profile::Cos2, Profile::Polynomial}) {
        const std::string tag = std::string(to_string(profile));
        const std::vector<Grid> grids{grid1(64), Grid({32, 32}, {kTwoPi, kTwoPi}),
                                      Grid({16, 16, 16}, {kTwoPi, kTwoPi, kTwoPi}), grid1(128, 3.0)};
        double worst_sum = 0.0, worst_three = 0.0;
        bool support_ok = true;
        for (const auto& g : grids) {
            const DyadicPartition p(g, profile);
            const double band = p.band_radius();
            for (std::size_t j = 0; j < g.point_count(); ++j) {
                const double r = g.frequency_radius(j);
                double sum = 0.0;
                for (int k = 0; k <= p.k_max(); ++k) {
                    const double v = p.table(k)[j];
                    sum += v;
                    if (v != 0.0) {
                        const double lo = k == 0 ? 0.0 : std::ldexp(1.0, k - 1);
                        const double hi = std::ldexp(1.0, k + 1);
                        if (!(r < hi && (k == 0 || r > lo))) support_ok = false;
                        worst_three = std::max(worst_three, std::abs(p.psi_sum(k, r) - 1.0));
                    }
                }
                if (r <= band) worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
            }
            // Dense radius sweep, off the lattice.
            for (int i = 0; i <= 20000; ++i) {
                const double r = band * i / 20000.0;
                double sum = 0.0;
                for (int k = 0; k <= p.k_max(); ++k) sum += p.phi(k, r);
                worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
            }
        }
        c.expect(worst_sum <= 1e-12, tag + ": |sum phi_k - 1| below cutoff = " + num(worst_sum) + " (<= 1e-12)");
        c.expect(support_ok, tag + ": supp phi_k inside 2^{k-1} < |xi| < 2^{k+1}");
        c.expect(worst_three <= 1e-12,
                 tag + ": |phi_{k-1} + phi_k + phi_{k+1} - 1| on supp phi_k = " + num(worst_three) + " (<= 1e-12)");
    }
}

void besov_oracle(const Context& ctx, Checks& c) {
    const Grid g = grid1(64);
    struct Case {
        double s;
        Exponent q, r;
        Weight w;
        Profile profile;
        Exponent fiber;
    };
    const std::vector<Case> cases{
        {0.5, 2.0, 2.0, Weight::constant(1.0), Profile::Cos2, 2.0},
        {1.0, 3.0, 1.0, Weight::power({0.5}, 0.1), Profile::Polynomial, 2.0},
        {-0.5, 1.5, Exponent::infinity(), Weight::power({-0.3}, 0.05, {1.0}), Profile::Cos2, 3.0},
        {0.25, Exponent::infinity(), 2.0, Weight::power({0.5}, 0.0), Profile::Polynomial, 1.0},
        {0.0, 2.0, 1.5, Weight::constant(2.0), Profile::Cos2, Exponent::infinity()},
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
        const Case& cs = cases[i % cases.size()];
        const DyadicPartition part(g, cs.profile);
        const GridFunction f = random_band_limited(g, 2, cs.fiber, part.band_radius(), ctx.seed, i);
        const BesovParams params{cs.s, cs.q, cs.r, cs.w};
        const double spectral = besov_norm(f, params, part);
        const double oracle = oracle_besov_norm(f, cs.s, cs.q, cs.r, cs.w.sample(g), cs.profile);
        worst = std::max(worst, std::abs(spectral - oracle) / oracle);
    }
    c.expect(worst <= 1e-9, "20 functions, n=1, N=64: max relative gap to the convolution oracle = " + num(worst) +
                                " (<= 1e-9)");
    // The spectral transform itself against the direct DFT.
    const GridFunction f = random_band_limited(Grid({16, 8}, {1.0, 2.5}), 2, 2.0, 1e9, ctx.seed, 99);
    const double gap = forward_transform(f).max_abs_diff(direct_dft(f)) / direct_dft(f).max_abs();
    c.expect(gap <= 1e-12, "FFT vs direct DFT on a 16x8 grid: relative gap " + num(gap) + " (<= 1e-12)");
}

double partition_constant(std::size_t n, std::uint64_t seed, std::size_t count, double* lo, double* hi) {
    const Grid g = grid1(n);
    const DyadicPartition cos2(g, Profile::Cos2), poly(g, Profile::Polynomial);
    const BesovParams params{0.5, 2.0, 2.0, Weight::power({0.5}, 0.1)};
    double fit = 1.0;
    for (std::size_t i = 0; i < count; ++i) {
        const GridFunction f = random_band_limited(g, 2, 2.0, cos2.band_radius(), seed, i);
        const double ratio = besov_norm(f, params, cos2) / besov_norm(f, params, poly);
        *lo = std::min(*lo, ratio);
        *hi = std::max(*hi, ratio);
        fit = std::max({fit, ratio, 1.0 / ratio});
    }
    return fit;
}

void partition_independence(const Context& ctx, Checks& c) {
    double lo = 1e300, hi = 0.0;
    const double c64 = partition_constant(64, ctx.seed, 50, &lo, &hi);
    const double c128 = partition_constant(128, ctx.seed, 50, &lo, &hi);
    c.expect(lo >= 0.1 && hi <= 10.0, "cos2/polynomial norm ratio range [" + num(lo) + ", " + num(hi) +
                                          "] over 50 functions at N=64 and N=128 (within [0.1, 10])");
    const double change = std::abs(c128 / c64 - 1.0);
    c.expect(change < 0.25, "fitted equivalence constant " + num(c64) + " (N=64) -> " + num(c128) +
                                " (N=128), change " + num(100 * change) + "% (< 25%)");
}

std::vector<double> ap_levels(const Weight& w, const Grid& g, int levels) {
    std::vector<double> out;
    std::vector<double> scales;
    for (int j = 0; j < levels; ++j) {
        scales.push_back(g.period(0) / 4.0 * std::ldexp(1.0, -j));
        ApSample sample;
        sample.scales = scales;
        sample.positions_per_scale = 8;
        out.push_back(ap_constant(w, g, 2.0, sample).estimate);
    }
    return out;
}

void ap_estimator(const Context&, Checks& c) {
    const Grid g = grid1(256);
    const auto flat = ap_levels(Weight::constant(1.0), g, 7);
    double worst = 0.0;
    for (double v : flat) worst = std::max(worst, std::abs(v - 1.0));
    c.expect(worst <= 1e-12, "gamma = 1: |estimate - 1| = " + num(worst) + " over 7 scales (<= 1e-12)");

    const auto half = ap_levels(Weight::power({0.5}, 0.0), g, 7);
    const double last = std::abs(half[6] / half[5] - 1.0);
    std::string series;
    for (double v : half) series += num(v) + " ";
    c.expect(last < 0.05, "|x|^{1/2}, p=2: estimates " + series + "; last dyadic change " + num(100 * last) +
                              "% (< 5%)");

    const auto inv = ap_levels(Weight::power({-1.0}, 0.0), g, 7);
    int run = 0, best_run = 0;
    series.clear();
    for (std::size_t j = 0; j < inv.size(); ++j) {
        series += num(inv[j]) + " ";
        if (j > 0 && inv[j] > inv[j - 1] * 1.05) {
            best_run = std::max(best_run, ++run);
        } else if (j > 0) {
            run = 0;
        }
    }
    const double tail = inv[6] / inv[5] - 1.0;
    c.expect(best_run >= 4 && tail >= 0.05, "|x|^{-1}, p=2: estimates " + series + "; growing (> 5% per level) over " +
                                                std::to_string(best_run + 1) + " scales, last step " +
                                                num(100 * tail) + "%");
}

struct MultiplierFit {
    double c_fit = 0.0;
    double worst_lebesgue = 0.0;
};

MultiplierFit fit_multipliers(const std::vector<Symbol>& symbols, const std::vector<double>& besov_fn, std::size_t n,
                              std::uint64_t seed) {
    const Grid g = grid1(n);
    const Weight w = Weight::power({0.3}, 0.1);
    const NormSpace lebesgue = LebesgueSpace{2.0, w};
    const NormSpace besov = BesovSpace{BesovParams{0.5, 2.0, 2.0, w}, Profile::Cos2};
    MultiplierFit fit;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const double mik = mikhlin_constant(symbols[i], g, 1).value;
        const double el = empirical_operator_norm(symbols[i], g, lebesgue, 8, seed + i);
        const double eb = empirical_operator_norm(symbols[i], g, besov, 8, seed + i);
        fit.c_fit = std::max(fit.c_fit, std::max(el, eb) / std::min(mik, besov_fn[i]));
    }
    return fit;
}

void multiplier_theorem(const Context& ctx, Checks& c) {
    std::vector<Symbol> symbols;
    std::vector<double> besov_fn;
    const SymbolGrid sg{{256}, {0.125}};
    const auto dil = dilation_grid();
    for (std::size_t i = 0; i < 20; ++i) {
        symbols.push_back(random_mikhlin_symbol(2, 2.0, ctx.seed, i));
        besov_fn.push_back(besov_functional(symbols.back(), 2.0, Weight::constant(1.0), sg, dil));
    }
    const auto f64 = fit_multipliers(symbols, besov_fn, 64, ctx.seed);
    const auto f128 = fit_multipliers(symbols, besov_fn, 128, ctx.seed);
    c.expect(std::isfinite(f64.c_fit) && f64.c_fit > 0,
             "single C_fit over 20 symbols on L_{2,gamma} and B^{1/2}_{2,2,gamma}: " + num(f64.c_fit) + " (N=64)");
    const double ratio = f128.c_fit / f64.c_fit;
    c.expect(ratio >= 0.5 && ratio <= 2.0,
             "C_fit N=64 -> N=128: " + num(f64.c_fit) + " -> " + num(f128.c_fit) + " (factor " + num(ratio) + ", within 2)");

    std::vector<Grid> sweep;
    for (std::size_t n : {32, 64, 128, 256}) sweep.push_back(grid1(n));
    const auto lin = mikhlin_growth(linear_symbol(2, 2.0), sweep, 1);
    c.expect(!lin.bounded, "m(xi) = xi flagged as non-Mikhlin: constants " + num(lin.values.front()) + " ... " +
                               num(lin.values.back()) + " keep growing");
    const auto ok = mikhlin_growth(symbols.front(), sweep, 1);
    c.expect(ok.bounded, "a compliant symbol is not flagged: " + num(ok.values.front()) + " ... " + num(ok.values.back()));
}

void lemma_symbol_bound(const Context&, Checks& c) {
    const PositiveOperator op = diag_operator(pow2_entries(1.0, 8));
    {
        const EmbeddingSpec spec{{2}, MultiIndex({1}), {}, 0.25, {}};
        const double coarse = lemma_symbol_sup(op, spec, grid1(64));
        const double fine = lemma_symbol_sup(op, spec, grid1(256, 4 * kTwoPi));
        const double change = std::abs(fine / coarse - 1.0);
        c.expect(std::isfinite(coarse) && change <= 0.1, "n=1, l=2, alpha=1, mu=1/4, diag(2^i): sup " + num(coarse) +
                                                              " -> " + num(fine) + " under 4x xi refinement (" +
                                                              num(100 * change) + "%, <= 10%)");
    }
    {
        const EmbeddingSpec spec{{2, 4}, MultiIndex({1, 0}), {}, 0.1, {}};
        const double coarse = lemma_symbol_sup(op, spec, Grid({32, 32}, {kTwoPi, kTwoPi}));
        const double fine = lemma_symbol_sup(op, spec, Grid({64, 64}, {2 * kTwoPi, 2 * kTwoPi}));
        const double change = std::abs(fine / coarse - 1.0);
        c.expect(std::isfinite(coarse) && change <= 0.1, "n=2, l=(2,4), alpha=(1,0), mu=0.1: sup " + num(coarse) +
                                                              " -> " + num(fine) + " under 4x xi refinement (" +
                                                              num(100 * change) + "%, <= 10%)");
    }
    {
        const EmbeddingSpec spec{{2}, MultiIndex({3}), {}, 0.25, {}};
        std::vector<double> sups;
        for (std::size_t n : {32, 64, 128, 256}) sups.push_back(lemma_symbol_sup(op, spec, grid1(n), {}, true));
        bool monotone = true;
        for (std::size_t i = 1; i < sups.size(); ++i) monotone = monotone && sups[i] > 1.1 * sups[i - 1];
        c.expect(monotone, "diagnostic kappa = 3/2 > 1: sup grows with xi_max: " + num(sups[0]) + ", " + num(sups[1]) +
                               ", " + num(sups[2]) + ", " + num(sups[3]));
    }
}

double multiplicative_sup(const PositiveOperator& op, const EmbeddingSpec& spec, std::size_t n, std::uint64_t seed) {
    const Grid g = grid1(n);
    const DyadicPartition part(g);
    const BesovParams params{0.5, 2.0, 2.0, Weight::constant(1.0)};
    double sup = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        const GridFunction u = random_band_limited(g, op.dim(), 2.0, part.band_radius(), seed, i);
        sup = std::max(sup, multiplicative_estimate_check(u, op, spec, params, part).ratio);
    }
    return sup;
}

void embedding_estimates(const Context& ctx, Checks& c) {
    const PositiveOperator op = diag_operator(pow2_entries(1.0, 4));
    const EmbeddingSpec spec{{2}, MultiIndex({1}), {}, 0.25, {1.0}};
    const Grid g = grid1(64);
    const DyadicPartition part(g);
    const BesovParams params{0.5, 2.0, 2.0, Weight::constant(1.0)};

    // With q = 2 and gamma = 1, Plancherel bounds LHS / RHS by the sup of the
    // graph-norm symbol [I; A^{1-kappa-mu}] Psi, at most sqrt(2) sup ||Psi|| here
    // because A >= I.
    SymbolLattice lattice;
    lattice.t_values = {1.0};
    lattice.h_values = geometric_lattice(1e-4, 1e4, 161);
    const double c_mu = std::sqrt(2.0) * lemma_symbol_sup(op, spec, g, lattice);
    double worst = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        const GridFunction u = random_band_limited(g, 4, 2.0, part.band_radius(), ctx.seed, i);
        worst = std::max(worst, embedding_estimate_optimal(u, op, spec, params, part).ratio);
    }
    c.expect(worst <= c_mu, "LHS/RHS at the optimal h over 50 functions: max " + num(worst) + " <= C_mu = " + num(c_mu));

    const double m64 = multiplicative_sup(op, spec, 64, ctx.seed);
    const double m128 = multiplicative_sup(op, spec, 128, ctx.seed);
    const double f = m128 / m64;
    c.expect(std::isfinite(m64) && f >= 0.5 && f <= 2.0, "multiplicative ratio sup " + num(m64) + " (N=64) -> " +
                                                             num(m128) + " (N=128), factor " + num(f) + " (within 2)");

    double hom = 0.0;
    const cplx scale{3.7, -1.2};
    for (std::size_t i = 0; i < 5; ++i) {
        const GridFunction u = random_band_limited(g, 4, 2.0, part.band_radius(), ctx.seed, 100 + i);
        GridFunction v = u;
        v *= scale;
        const double a = embedding_estimate_optimal(u, op, spec, params, part).ratio;
        const double b = embedding_estimate_optimal(v, op, spec, params, part).ratio;
        const double ma = multiplicative_estimate_check(u, op, spec, params, part).ratio;
        const double mb = multiplicative_estimate_check(v, op, spec, params, part).ratio;
        hom = std::max({hom, std::abs(a - b) / a, std::abs(ma - mb) / ma});
    }
    c.expect(hom <= 1e-10, "ratios invariant under u -> (3.7 - 1.2i) u: max relative change " + num(hom) + " (<= 1e-10)");
}

EllipticProblem make_problem(EllipticSymbol symbol, PositiveOperator op, cplx lambda,
                             BesovParams params = {0.0, 2.0, 2.0, Weight::constant(1.0)}) {
    return EllipticProblem{std::move(symbol), std::move(op), {}, lambda, std::move(params), Profile::Cos2};
}

double coercive_fit(std::size_t n, std::uint64_t seed) {
    const Grid g = grid1(n, std::numbers::pi);
    const DyadicPartition part(g);
    EllipticProblem problem = make_problem(laplacian(1), diag_operator(pow2_entries(0.5, 8)), 1.0);
    double fit = 0.0;
    for (double lam : {1.0, 10.0, 100.0, 1000.0}) {
        problem.lambda = lam;
        for (std::size_t i = 0; i < 50; ++i) {
            const GridFunction f = random_band_limited(g, 8, 2.0, part.band_radius(), seed, i);
            fit = std::max(fit, solve_principal(problem, f).report.coercive_ratio);
        }
    }
    return fit;
}

void elliptic_solver(const Context& ctx, Checks& c) {
    // Single modes against (a_c + lambda + K(xi))^{-1}.
    {
        const Grid g({32, 32}, {kTwoPi, kTwoPi});
        const EllipticSymbol K(2, 2, {{MultiIndex({2, 0}), -1.0}, {MultiIndex({0, 2}), -1.0}, {MultiIndex({1, 1}), -1.0}});
        const std::vector<double> a{1.0, 2.0, 3.0};
        const cplx lambda{2.0, 1.0};
        const EllipticProblem problem = make_problem(K, diag_operator(a), lambda);
        double worst = 0.0;
        const std::vector<std::array<long, 2>> modes{{0, 0}, {3, -5}, {-7, 2}, {15, 15}, {-16, 4}};
        for (const auto& m : modes) {
            for (std::size_t ch = 0; ch < 3; ++ch) {
                const GridFunction f = mode_function(g, 3, m, ch);
                const double x1 = static_cast<double>(m[0]), x2 = static_cast<double>(m[1]);
                const cplx symbol = x1 * x1 + x2 * x2 + x1 * x2;
                GridFunction expected = f;
                expected *= 1.0 / (a[ch] + lambda + symbol);
                worst = std::max(worst, rel_diff(apply_principal_resolvent(problem, f), expected));
            }
        }
        c.expect(worst <= 1e-12, "single modes, K = xi1^2 + xi2^2 + xi1 xi2, A = diag(1,2,3): max relative error " +
                                     num(worst) + " (<= 1e-12)");
        const auto ell = check_ellipticity(K, g);
        c.expect(std::abs(ell.m0 - 0.5) <= 1e-12, "ellipticity constant of that symbol: " + num(ell.m0) + " (= 1/2)");

        double residual = 0.0;
        const DyadicPartition part(g);
        for (std::size_t i = 0; i < 10; ++i) {
            const GridFunction f = random_band_limited(g, 3, 2.0, part.band_radius(), ctx.seed, i);
            residual = std::max(residual, solve_principal(problem, f).report.residual);
        }
        c.expect(residual <= 1e-9, "relative residual on 10 random forcings: " + num(residual) + " (<= 1e-9)");
    }
    // Coercive ratio family.
    {
        const double c128 = coercive_fit(128, ctx.seed);
        const double c256 = coercive_fit(256, ctx.seed);
        const double f = c256 / c128;
        c.expect(std::isfinite(c128) && f >= 0.5 && f <= 2.0,
                 "coercive ratio over 50 forcings x lambda in {1,10,100,1000}: bound " + num(c128) + " (N=128), " +
                     num(c256) + " (N=256), factor " + num(f) + " (within 2)");
    }
    // Resolvent sweep.
    {
        const Grid g = grid1(128, std::numbers::pi);
        const std::vector<cplx> lambdas{1.0, 10.0, 100.0, 1000.0};
        const EllipticProblem problem = make_problem(laplacian(1), diag_operator(pow2_entries(0.5, 32)), 1.0);
        ResolventOptions opt;
        opt.seed = ctx.seed;
        const ResolventTable t = resolvent_sweep(problem, lambdas, g, opt);
        std::string cols;
        for (std::size_t k = 0; k < t.columns.size(); ++k) cols += t.columns[k] + ":" + num(t.column_variation(k)) + " ";
        c.expect(t.max_column_variation() <= 3.0,
                 "resolvent sweep, A = diag(2^{i/2}), d=32: column variation " + cols + "(<= 3)");

        // Scalar closed form, single modes only.
        const double a = 2.0;
        const EllipticProblem scalar = make_problem(laplacian(1), diag_operator({a}), 1.0);
        ResolventOptions only_modes;
        only_modes.random_probes = 0;
        const ResolventTable s = resolvent_sweep(scalar, lambdas, g, only_modes);
        const DyadicPartition part(g);
        double worst = 0.0;
        for (std::size_t li = 0; li < lambdas.size(); ++li) {
            for (int order = 0; order <= 2; ++order) {
                double best = 0.0;
                for (std::size_t j = 0; j < g.point_count(); ++j) {
                    const double xi = g.frequency(j)[0];
                    if (std::abs(xi) > part.band_radius()) continue;
                    best = std::max(best, std::pow(std::abs(lambdas[li]), 1.0 - order / 2.0) *
                                              std::pow(std::abs(xi), order) / std::abs(a + lambdas[li] + xi * xi));
                }
                worst = std::max(worst, std::abs(s.values[li][static_cast<std::size_t>(order)] - best) / best);
            }
        }
        c.expect(worst <= 1e-10, "scalar A = 2: table equals the exhaustive mode scan, max relative gap " + num(worst) +
                                     " (<= 1e-10)");
    }
    // Neumann iteration against the measured contraction.
    {
        const Grid g = grid1(64);
        const DyadicPartition part(g);
        EllipticProblem problem = make_problem(laplacian(1), diag_operator({1.0, 2.0, 4.0}), 2.0);
        LowerTerm term;
        term.alpha = MultiIndex({0});
        term.mu = 0.5;
        for (std::size_t j = 0; j < g.point_count(); ++j) {
            const double x = g.coordinate(0, j);
            term.field.push_back(Matrix::Identity(3, 3) * (0.6 * (1.0 + 0.5 * std::cos(x))));
        }
        problem.lower.push_back(term);
        const GridFunction f = random_band_limited(g, 3, 2.0, part.band_radius() / 2, ctx.seed, 7);
        const Solution s = solve_full(problem, f, {1e-13, 200, ctx.seed});
        const auto& d = s.report.iterate_distances;
        double rate = 0.0;
        const std::size_t a = 4, b = std::min<std::size_t>(d.size() - 1, 14);
        if (b > a) rate = std::pow(d[b] / d[a], 1.0 / static_cast<double>(b - a));
        const double q = s.report.contraction;
        c.expect(std::abs(rate - q) <= 0.1, "Neumann rate " + num(rate) + " vs measured contraction q = " + num(q) +
                                                " (within 0.1), " + std::to_string(s.report.iterations) + " iterations");
        c.expect(s.report.residual <= 1e-8, "full-problem residual " + num(s.report.residual) + " (<= 1e-8)");
        problem.lower.front().field.assign(g.point_count(), Matrix::Identity(3, 3) * 10.0);
        bool refused = false;
        try {
            solve_full(problem, f);
        } catch (const Error& e) {
            refused = e.code() == ErrorCode::NonContractive;
        }
        c.expect(refused, "q >= 1 is refused with NonContractive");
    }
    // Constant lower terms against the dense per-mode oracle.
    {
        const Grid g({16, 16}, {kTwoPi, kTwoPi});
        const DyadicPartition part(g);
        EllipticProblem problem = make_problem(laplacian(2), diag_operator({1.0, 2.0}), 5.0);
        std::mt19937_64 rng(ctx.seed);
        std::normal_distribution<double> normal(0.0, 0.3);
        auto draw = [&] {
            Matrix m(2, 2);
            for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = cplx(normal(rng), normal(rng));
            return m;
        };
        problem.lower.push_back(LowerTerm{MultiIndex({1, 0}), draw(), {}, 0.5});
        problem.lower.push_back(LowerTerm{MultiIndex({0, 0}), draw(), {}, 0.5});
        const GridFunction f = random_band_limited(g, 2, 2.0, part.band_radius(), ctx.seed, 3);
        const GridFunction u = solve_full(problem, f).u;
        const double gap = rel_diff(u, oracle_elliptic_solve(problem, f));
        c.expect(gap <= 1e-7, "constant lower terms: Neumann solve vs dense per-mode LU oracle, relative gap " + num(gap) +
                                  " (<= 1e-7)");
    }
}

void degenerate_substitution(const Context& ctx, Checks& c) {
    {
        const Grid g({32, 16}, {kTwoPi, 3.0});
        const DegenerateMap map({[](double) { return 1.0; }}, g);
        const GridFunction u = random_band_limited(g, 2, 2.0, 8.0, ctx.seed, 0);
        const bool same = map.push(u).values() == u.values() && map.pull(map.push(u)).values() == u.values();
        const double d1 = map.degenerate_derivative(u, MultiIndex({1, 0})).max_abs_diff(spectral_derivative(u, MultiIndex({1, 0})));
        const double d2 = map.degenerate_derivative(u, MultiIndex({1, 1})).max_abs_diff(spectral_derivative(u, MultiIndex({1, 1})));
        c.expect(map.is_identity() && same && d1 == 0.0 && d2 == 0.0,
                 "gamma = 1: tau = x, push/pull bit-identical, D^[alpha] = D^alpha exactly");
    }
    {
        auto gamma = [](double x) { return 1.0 + x * x; };
        const double w = 0.2;
        std::vector<double> errors;
        for (std::size_t n : {64, 128, 256}) {
            const Grid g = grid1(n, 2.0);
            const DegenerateMap map({gamma}, g, {-1.0});
            GridFunction u(g, 1), exact(g, 1);
            for (std::size_t j = 0; j < n; ++j) {
                const double x = map.x_at(0, j);
                const double v = std::exp(-(x / w) * (x / w));
                u.at(j)[0] = v;
                exact.at(j)[0] = gamma(x) * (-2.0 * x / (w * w)) * v;
            }
            errors.push_back(map.degenerate_derivative(u, MultiIndex({1})).max_abs_diff(exact));
        }
        const double o1 = std::log2(errors[0] / errors[1]);
        const double o2 = std::log2(errors[1] / errors[2]);
        c.expect(o1 >= 1.8 && o2 >= 1.8, "gamma = 1 + x^2 on [-1, 1): D^[1] errors " + num(errors[0]) + ", " +
                                             num(errors[1]) + ", " + num(errors[2]) + "; orders " + num(o1) + ", " +
                                             num(o2) + " (>= 1.8)");
    }
    {
        const Grid g = grid1(128, 2.0);
        const DegenerateMap map({[](double x) { return 1.0 + x * x; }}, g, {-1.0});
        const EllipticProblem problem = make_problem(laplacian(1), diag_operator(pow2_entries(0.5, 32)), 1.0);
        ResolventOptions opt;
        opt.seed = ctx.seed;
        const std::vector<cplx> lambdas{1.0, 10.0, 100.0, 1000.0};
        const ResolventTable t = degenerate_resolvent_sweep(problem, map, lambdas, opt);
        bool finite = true;
        for (const auto& row : t.values)
            for (double v : row) finite = finite && std::isfinite(v);
        std::string cols;
        for (std::size_t k = 0; k < t.columns.size(); ++k) cols += t.columns[k] + ":" + num(t.column_variation(k)) + " ";
        c.expect(finite && t.max_column_variation() <= 3.0, "degenerate coercive table finite, column variation " + cols +
                                                                 "(<= 3)");
    }
}

ParabolicProblem parabolic_problem(std::vector<double> a, std::size_t steps, double t_end = 1.0) {
    return ParabolicProblem{laplacian(1), diag_operator(a), {}, t_end, steps, BesovParams{0.0, 2.0, 2.0, Weight::constant(1.0)},
                            Profile::Cos2};
}

void parabolic_solver(const Context& ctx, Checks& c) {
    const Grid g = grid1(32);
    const DyadicPartition part(g);
    {
        const std::vector<double> a{1.0, 3.0};
        const ParabolicProblem problem = parabolic_problem(a, 16);
        double worst = 0.0;
        for (long m : {0L, 1L, -3L, 7L}) {
            for (std::size_t ch = 0; ch < 2; ++ch) {
                const std::array<long, 1> mode{m};
                const GridFunction f = mode_function(g, 2, mode, ch, cplx(0.5, -2.0));
                const std::vector<GridFunction> forcing(16, f);
                const auto sol = solve_cauchy(problem, forcing, false);
                const double mu = a[ch] + static_cast<double>(m * m);
                for (std::size_t s = 0; s <= 16; ++s) {
                    const double t = problem.dt() * static_cast<double>(s);
                    GridFunction expected = f;
                    expected *= (1.0 - std::exp(-mu * t)) / mu;
                    const double err = sol.u[s].max_abs_diff(expected) / f.max_abs();
                    worst = std::max(worst, err);
                }
            }
        }
        c.expect(worst <= 1e-10, "constant single-mode forcing vs (1 - e^{-mu t}) / mu at every step: max error " +
                                     num(worst) + " (<= 1e-10)");
    }
    const ParabolicProblem problem = parabolic_problem({1.0, 2.0, 4.0, 8.0}, 16);
    std::vector<GridFunction> forcing;
    for (std::size_t m = 0; m < 16; ++m) forcing.push_back(random_band_limited(g, 4, 2.0, part.band_radius(), ctx.seed, m));
    {
        const auto base = solve_cauchy(problem, forcing, false);
        std::vector<GridFunction> zero(16, GridFunction(g, 4));
        const auto none = solve_cauchy(problem, zero, false);
        bool all_zero = true;
        for (const auto& u : none.u) all_zero = all_zero && u.max_abs() == 0.0;
        c.expect(base.u[0].max_abs() == 0.0 && all_zero, "u(0) = 0 exactly; f = 0 gives u = 0 exactly");
        auto late = forcing;
        late[8] *= 3.0;
        const auto pert = solve_cauchy(problem, late, false);
        bool causal = true;
        for (std::size_t m = 0; m <= 8; ++m) causal = causal && pert.u[m].values() == base.u[m].values();
        c.expect(causal && pert.u[9].max_abs_diff(base.u[9]) > 0,
                 "changing f on step 8 leaves u_0..u_8 bit-identical and changes u_9");

        // Discrete residual with the exact step average.
        EllipticProblem spatial = make_problem(problem.symbol, problem.op, 0.0);
        double res = 0.0;
        for (std::size_t m = 0; m < 16; ++m) {
            GridFunction r = base.u[m + 1] - base.u[m];
            r *= 1.0 / problem.dt();
            r += apply_operator(spatial, base.average[m]);
            r -= forcing[m];
            res = std::max(res, l2_values(r) / l2_values(forcing[m]));
        }
        c.expect(res <= 1e-8, "(u_{m+1} - u_m)/dt + G avg_m - f_m: max relative residual " + num(res) + " (<= 1e-8)");

        // Decay once the forcing stops.
        auto stop = forcing;
        for (std::size_t m = 6; m < 16; ++m) stop[m] = GridFunction(g, 4);
        const auto dec = solve_cauchy(problem, stop, false);
        bool decays = true;
        for (std::size_t m = 7; m < 16; ++m) decays = decays && l2_values(dec.u[m + 1]) < l2_values(dec.u[m]);
        c.expect(decays, "with f = 0 after step 6, ||u_m|| decreases monotonically");
    }
    {
        double worst = 0.0, bound = 0.0;
        for (std::size_t i = 0; i < 20; ++i) {
            std::vector<GridFunction> f16, f32;
            for (std::size_t m = 0; m < 16; ++m) {
                f16.push_back(random_band_limited(g, 4, 2.0, part.band_radius(), ctx.seed + 1000 * (i + 1), m));
                f32.push_back(f16.back());
                f32.push_back(f16.back());
            }
            const double r16 = solve_cauchy(problem, f16).report.ratio;
            const double r32 = solve_cauchy(parabolic_problem({1.0, 2.0, 4.0, 8.0}, 32), f32).report.ratio;
            bound = std::max(bound, r16);
            worst = std::max(worst, std::max(r16 / r32, r32 / r16));
        }
        c.expect(std::isfinite(bound) && worst <= 2.0, "maximal-regularity ratio over 20 forcings: bound " + num(bound) +
                                                           ", worst step-halving factor " + num(worst) + " (<= 2)");
    }
}

TruncatedSystem coupled_system(const Grid& g, std::size_t d, double sigma, double c, bool decaying,
                               const std::function<double(std::span<const double>)>& modulation = {}) {
    TruncatedSystem s = TruncatedSystem::pow2(g, d, sigma, modulation);
    if (c != 0.0) {
        const auto di = static_cast<Eigen::Index>(d);
        Matrix m(di, di);
        for (Eigen::Index i = 0; i < di; ++i)
            for (Eigen::Index k = 0; k < di; ++k)
                m(i, k) = decaying ? c * std::exp2(-sigma * static_cast<double>(i + k + 2)) : c;
        s.couplings.push_back(LowerTerm{MultiIndex::zero(g.dim()), m, {}, 0.5});
    }
    return s;
}

void systems_checks(const Context& ctx, Checks& c) {
    const Grid g = grid1(64);
    const DyadicPartition part(g);
    const BesovParams params{0.0, 2.0, 2.0, Weight::constant(1.0)};
    {
        const TruncatedSystem sys = coupled_system(g, 8, 1.0, 0.0, true);
        const GridFunction f = random_band_limited(g, 8, 2.0, part.band_radius(), ctx.seed, 0);
        const GridFunction u = solve_full(build_system_problem(sys, laplacian(1), 1.0, params), f).u;
        double worst = 0.0;
        for (std::size_t m = 0; m < 8; ++m) {
            GridFunction fm(g, 1), um(g, 1);
            for (std::size_t j = 0; j < g.point_count(); ++j) {
                fm.at(j)[0] = f.at(j)[m];
                um.at(j)[0] = u.at(j)[m];
            }
            const EllipticProblem scalar = make_problem(laplacian(1), diag_operator({sys.at(0, m)}), 1.0, params);
            worst = std::max(worst, rel_diff(um, apply_principal_resolvent(scalar, fm)));
        }
        c.expect(worst <= 1e-10, "decoupled d=8 system equals channel-wise scalar solves: " + num(worst) + " (<= 1e-10)");
    }
    {
        const GridFunction lead = random_band_limited(g, 1, 2.0, part.band_radius(), ctx.seed, 1);
        auto forcing = [&](std::size_t d) {
            GridFunction f(g, d);
            for (std::size_t j = 0; j < g.point_count(); ++j) f.at(j)[0] = lead.at(j)[0];
            return f;
        };
        const std::vector<std::size_t> sizes{4, 8, 16};
        const auto conv = truncation_study([&](std::size_t d) { return coupled_system(g, d, 1.0, 0.5, true); }, forcing,
                                           sizes, laplacian(1), 1.0, params);
        c.expect(conv.converging, "sigma = 1, coupling 0.5 * 2^{-(m+k)}: distances d=4->8 " + num(conv.distances[0]) +
                                      ", 8->16 " + num(conv.distances[1]) + " (shrink >= 4x)");
        const auto flat = truncation_study([&](std::size_t d) { return coupled_system(g, d, 0.0, 0.02, false); }, forcing,
                                           sizes, laplacian(1), 10.0, params);
        c.expect(!flat.converging, "control sigma = 0, uniform coupling: distances " + num(flat.distances[0]) + ", " +
                                       num(flat.distances[1]) + " reported as non-convergent");
    }
    {
        const Grid gs = grid1(128, std::numbers::pi);
        auto modulation = [](std::span<const double> x) { return 1.0 + 0.1 * std::sin(2.0 * x[0]); };
        const TruncatedSystem sys = coupled_system(gs, 32, 0.5, 0.05, true, modulation);
        const Comparability cmp = check_comparability(sys);
        c.expect(std::abs(cmp.c1 - 0.9) <= 1e-12 && std::abs(cmp.c2 - 1.1) <= 1e-12,
                 "modulated diagonal 2^{m/2}(1 + 0.1 sin): C1 = " + num(cmp.c1) + ", C2 = " + num(cmp.c2));
        ResolventOptions opt;
        opt.seed = ctx.seed;
        opt.random_probes = 4;
        opt.max_mode_probes = 160;
        const std::vector<cplx> lambdas{1.0, 10.0, 100.0, 1000.0};
        const ResolventTable t = system_resolvent_sweep(sys, laplacian(1), lambdas, params, opt);
        std::string cols;
        for (std::size_t k = 0; k < t.columns.size(); ++k) cols += t.columns[k] + ":" + num(t.column_variation(k)) + " ";
        c.expect(t.max_column_variation() <= 3.0, "system resolvent sweep, d=32: column variation " + cols + "(<= 3)");
    }
    {
        TruncatedSystem sign = TruncatedSystem::pow2(g, 4, 1.0, [](std::span<const double> x) { return std::cos(x[0]); });
        ErrorCode got = ErrorCode::InvalidArgument;
        try {
            build_system_problem(sign, laplacian(1), 1.0, params);
        } catch (const Error& e) {
            got = e.code();
        }
        c.expect(got == ErrorCode::PositivityViolation, "sign-changing diagonal rejected with PositivityViolation");
        TruncatedSystem wide = TruncatedSystem::pow2(g, 4, 1.0, [](std::span<const double> x) {
            return std::exp(8.0 * std::sin(x[0]));
        });
        got = ErrorCode::InvalidArgument;
        try {
            build_system_problem(wide, laplacian(1), 1.0, params);
        } catch (const Error& e) {
            got = e.code();
        }
        c.expect(got == ErrorCode::ConditionViolation, "comparability ratio e^16 > 1e6 rejected with ConditionViolation");
    }
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int cli(const std::vector<std::string>& args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    if (err_text) *err_text = err.str();
    return code;
}

void infrastructure(const Context& ctx, Checks& c) {
    {
        bool exact = true;
        for (Exponent p : {Exponent(3.0), Exponent::infinity(), Exponent(1.5)}) {
            const GridFunction f = random_band_limited(Grid({16, 8}, {1.0, 2.5}), 3, p, 1e9, ctx.seed, 5);
            const auto bytes = encode_grid_function(f);
            const GridFunction g = decode_grid_function(bytes);
            exact = exact && g.grid() == f.grid() && g.fiber_p() == p && g.fiber_dim() == f.fiber_dim() &&
                    std::memcmp(g.values().data(), f.values().data(), f.values().size() * sizeof(cplx)) == 0;
            const auto path = ctx.scratch / "roundtrip.bsgf";
            write_grid_function(f, path);
            const GridFunction h = read_grid_function(path);
            exact = exact && std::memcmp(h.values().data(), f.values().data(), f.values().size() * sizeof(cplx)) == 0;
        }
        Matrix m = Matrix::Random(3, 3);
        exact = exact && decode_matrix(encode_matrix(m)) == m;
        c.expect(exact, "BSGF write/read round trip bit-exact (p = 3, inf, 3/2; matrices)");

        const GridFunction f = random_band_limited(grid1(8), 1, 2.0, 1e9, ctx.seed, 6);
        auto bytes = encode_grid_function(f);
        auto code_of = [](const std::vector<std::uint8_t>& b) {
            try {
                decode_grid_function(b);
            } catch (const Error& e) {
                return e.code();
            }
            return ErrorCode::InvalidArgument;
        };
        auto magic = bytes;
        magic[0] = 'X';
        auto version = bytes;
        version[4] = 9;
        auto cut = bytes;
        cut.resize(cut.size() - 8);
        c.expect(code_of(magic) == ErrorCode::BadMagic && code_of(version) == ErrorCode::VersionMismatch &&
                     code_of(cut) == ErrorCode::Truncated,
                 "bad magic, version mismatch and truncation raise distinct errors");
    }
    {
        const auto input = ctx.scratch / "sample.bsgf";
        write_grid_function(random_band_limited(grid1(64), 2, 2.0, 16.0, ctx.seed, 7), input);
        write_file(ctx.scratch / "norm.cfg", "input = " + input.string() + "\n[besov]\ns = 0.5\nq = 2\nr = 2\n");
        write_file(ctx.scratch / "sweep.cfg", "operator = diag:sigma=1,d=4\n[grid]\nsizes = 32\n[sweep]\nlambdas = 1, 10\n");
        bool same = true;
        for (const auto& [sub, cfg, csv] : {std::tuple{"besov-norm", "norm.cfg", "besov_norm.csv"},
                                            std::tuple{"sweep-resolvent", "sweep.cfg", "resolvent.csv"}}) {
            const auto a = ctx.scratch / "run_a", b = ctx.scratch / "run_b";
            const int ra = cli({sub, "--config", (ctx.scratch / cfg).string(), "--seed", "7", "--out", a.string()});
            const int rb = cli({sub, "--config", (ctx.scratch / cfg).string(), "--seed", "7", "--out", b.string()});
            const std::string ca = read_file(a / csv), cb = read_file(b / csv);
            same = same && ra == 0 && rb == 0 && !ca.empty() && ca == cb;
        }
        c.expect(same, "besov-norm and sweep-resolvent CSVs byte-identical across runs with the same seed");
    }
    {
        write_file(ctx.scratch / "bad.cfg", "[besov]\nq = 0.5\n");
        Matrix big = Matrix::Identity(1, 1) * 50.0;
        write_matrix(big, ctx.scratch / "big.bsgm");
        write_file(ctx.scratch / "diverge.cfg", "lower.0 = constant:" + (ctx.scratch / "big.bsgm").string() +
                                                    "\n[grid]\nsizes = 32\n");
        const int usage = cli({"no-such-command"});
        const int config = cli({"besov-norm", "--config", (ctx.scratch / "bad.cfg").string(), "--out",
                                (ctx.scratch / "o").string()});
        const int io = cli({"besov-norm", "--config", (ctx.scratch / "missing.cfg").string()});
        std::string numeric_err;
        const int numeric = cli({"solve-elliptic", "--config", (ctx.scratch / "diverge.cfg").string(), "--out",
                                 (ctx.scratch / "o").string()},
                                &numeric_err);
        const bool numeric_reason = numeric_err.find(to_string(ErrorCode::NonContractive)) != std::string::npos;
        const int ok = cli({"acceptance", "--criteria", "1", "--out", (ctx.scratch / "o").string()});
        c.expect(usage == 2 && config == 3 && io == 4 && numeric == 1 && numeric_reason && ok == 0,
                 "exit codes: unknown subcommand " + std::to_string(usage) + ", bad config " + std::to_string(config) +
                     ", missing file " + std::to_string(io) + ", non-contractive solve " + std::to_string(numeric) +
                     ", passing acceptance " + std::to_string(ok) + " (expected 2, 3, 4, 1, 0)");
    }
}

using Runner = void (*)(const Context&, Checks&);

struct Entry {
    const char* title;
    Runner run;
};

const Entry kEntries[kCriterionCount] = {
    {"partition soundness", partition_soundness},
    {"Besov norm vs convolution oracle", besov_oracle},
    {"partition independence", partition_independence},
    {"A_p estimator", ap_estimator},
    {"multiplier bounds", multiplier_theorem},
    {"symbol bound for the embedding", lemma_symbol_bound},
    {"embedding estimates", embedding_estimates},
    {"elliptic solver", elliptic_solver},
    {"degenerate substitution", degenerate_substitution},
    {"parabolic solver", parabolic_solver},
    {"truncated systems", systems_checks},
    {"infrastructure", infrastructure},
};

}  // namespace

std::string criterion_title(int id) {
    if (id < 1 || id > kCriterionCount) return "unknown";
    return kEntries[id - 1].title;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<int> ids = options.criteria;
    if (ids.empty())
        for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);

    std::filesystem::path scratch = options.scratch;
    bool owned = false;
    if (scratch.empty()) {
        std::random_device rd;
        scratch = std::filesystem::temp_directory_path() / ("besovkit-acceptance-" + std::to_string(rd()));
        owned = true;
    }
    std::filesystem::create_directories(scratch);
    const Context ctx{options.seed, scratch};

    std::vector<CriterionResult> results;
    for (int id : ids) {
        CriterionResult r;
        r.id = id;
        r.title = criterion_title(id);
        const auto start = std::chrono::steady_clock::now();
        Checks checks;
        if (id < 1 || id > kCriterionCount) {
            checks.expect(false, "no such criterion");
        } else {
            try {
                kEntries[id - 1].run(ctx, checks);
            } catch (const std::exception& e) {
                checks.expect(false, std::string("unexpected error: ") + e.what());
            }
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.passed = checks.passed();
        r.details = std::move(checks.lines());
        if (on_result) on_result(r);
        results.push_back(std::move(r));
    }
    if (owned) {
        std::error_code ec;
        std::filesystem::remove_all(scratch, ec);
    }
    return results;
}

}  // namespace besov::tools

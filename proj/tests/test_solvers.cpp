#include "support.hpp"

#include "besov/degenerate.hpp"
#include "besov/elliptic.hpp"
#include "besov/fft.hpp"
#include "besov/multipliers.hpp"
#include "besov/parabolic.hpp"
#include "besov/systems.hpp"
#include "besov/tools/oracles.hpp"

using namespace besov;
using namespace besov::test;

namespace {

constexpr double kSector = 3.0 * std::numbers::pi / 4.0;

EllipticProblem scalar_problem(int n, double a, cplx lambda) {
    return EllipticProblem{EllipticSymbol::separable(n, 2, -1.0), require_positive(diag({a}), kSector), {}, lambda,
                           BesovParams{}, Profile::Cos2};
}

}  // namespace

TEST_SUITE("elliptic") {
    TEST_CASE("symbols and ellipticity") {
        const EllipticSymbol lap = EllipticSymbol::separable(2, 2, -1.0);
        const std::array<double, 2> xi{1.0, 2.0};
        CHECK(std::abs(lap(xi) - 5.0) < 1e-14);
        CHECK(check_ellipticity(lap, Grid({16, 16}, {kTwoPi, kTwoPi})).m0 == doctest::Approx(1.0));
        // xi1^2 - xi2^2 is not elliptic.
        const EllipticSymbol wave(2, 2, {{MultiIndex({2, 0}), -1.0}, {MultiIndex({0, 2}), 1.0}});
        CHECK_FALSE(check_ellipticity(wave, Grid({16, 16}, {kTwoPi, kTwoPi})).satisfied);
        const EllipticSymbol zero(1, 2, {{MultiIndex({2}), 0.0}});
        CHECK(error_of([&] { check_ellipticity(zero, line(16)); }) == ErrorCode::Degenerate);
        CHECK(error_of([] { EllipticSymbol(1, 3, {}); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("principal solve inverts the operator") {
        const Grid g({16, 32}, {kTwoPi, 2.0});
        EllipticProblem p{EllipticSymbol::separable(2, 2, -1.0), require_positive(DiagonalScale{1.0, 3}.matrix(), kSector),
                          {}, cplx(0.5, 2.0), BesovParams{}, Profile::Cos2};
        const GridFunction f = random_band_limited(g, 3, 2.0, 3.5, 3, 0);
        const Solution s = solve_principal(p, f);
        CHECK(apply_operator(p, s.u).max_abs_diff(f) < 1e-11 * f.max_abs());
        CHECK(s.report.residual < 1e-12);
        CHECK(s.report.top_alphas.size() == 3);
        CHECK(s.report.coercive_ratio > 0);
        // Past the partition band the solve still runs; only the coercive terms are skipped.
        const GridFunction wide = random_band_limited(g, 3, 2.0, 8.0, 3, 0);
        const Solution w = solve_principal(p, wide);
        CHECK(w.report.residual < 1e-12);
        CHECK(w.report.top_alphas.empty());
    }

    TEST_CASE("singular modes are reported") {
        const Grid g = line(16);
        // a + lambda + xi^2 = 0 at xi = 0 for lambda = -a.
        const EllipticProblem p = scalar_problem(1, 2.0, -2.0);
        const GridFunction f = random_band_limited(g, 1, 2.0, 4.0, 1, 0);
        CHECK(error_of([&] { apply_principal_resolvent(p, f); }) == ErrorCode::SingularMode);
    }

    TEST_CASE("Neumann iteration agrees with the dense oracle for x-independent terms") {
        const Grid g = line(32);
        EllipticProblem p = scalar_problem(1, 1.0, 3.0);
        p.lower.push_back(LowerTerm{MultiIndex({1}), Matrix::Constant(1, 1, cplx(0.4, 0.1)), {}, 0.5});
        const GridFunction f = random_band_limited(g, 1, 2.0, 8.0, 4, 0);
        const Solution s = solve_full(p, f);
        CHECK(s.u.max_abs_diff(tools::oracle_elliptic_solve(p, f)) < 1e-9 * s.u.max_abs());
        CHECK(s.report.contraction < 1.0);
        CHECK(s.report.contraction > 0.0);
        // solve_principal refuses lower terms.
        CHECK(error_of([&] { solve_principal(p, f); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("x-dependent terms solve the full equation") {
        const Grid g = line(64);
        EllipticProblem p = scalar_problem(1, 2.0, 4.0);
        LowerTerm t{MultiIndex({0}), {}, {}, 0.5};
        for (std::size_t j = 0; j < g.point_count(); ++j)
            t.field.push_back(Matrix::Constant(1, 1, 0.8 * std::sin(g.coordinate(0, j))));
        p.lower.push_back(t);
        const GridFunction f = random_band_limited(g, 1, 2.0, 8.0, 5, 0);
        const Solution s = solve_full(p, f, {1e-14, 300, 1});
        CHECK(relative_residual(p, s.u, f) < 1e-10);
        CHECK(lower_term_bounds(p).front() == doctest::Approx(0.8 * std::pow(2.0, -0.5)).epsilon(1e-3));
    }

    TEST_CASE("resolvent table shape and the closed-form scalar column") {
        const Grid g = line(64);
        const EllipticProblem p = scalar_problem(1, 1.0, 1.0);
        const std::vector<cplx> lambdas{1.0, 100.0};
        ResolventOptions o;
        o.random_probes = 2;
        const ResolventTable t = resolvent_sweep(p, lambdas, g, o);
        CHECK(t.columns.size() == 4);
        CHECK(t.columns.back() == "A");
        CHECK(t.values.size() == 2);
        // For lambda = 100 the zeroth-order column is sup 100 / (101 + xi^2) = 100 / 101.
        CHECK(t.values[1][0] == doctest::Approx(100.0 / 101.0).epsilon(1e-12));
        CHECK(single_mode_probes(g, 2, 2.0, 4.0).size() == 2 * 9);
    }
}

TEST_SUITE("degenerate") {
    TEST_CASE("tau map inverts and stays monotone") {
        const Grid g = line(64, 2.0);
        const DegenerateMap map({[](double x) { return 1.0 + x * x; }}, g, {-1.0});
        // tau(x) = atan(x) - atan(-1) in closed form.
        CHECK(map.tau_grid().period(0) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-6));
        // Both directions are separate cubic Hermite tables: exact inverses at nodes, O(h^4) between them.
        double off_node = 0.0;
        for (double x = -1.0; x < 1.0; x += 0.0137) {
            CHECK(map.tau_of_x(0, x) == doctest::Approx(std::atan(x) + std::numbers::pi / 4).epsilon(1e-5));
            off_node = std::max(off_node, std::abs(map.x_of_tau(0, map.tau_of_x(0, x)) - x));
        }
        MESSAGE("off-node round trip error " << off_node);
        CHECK(off_node < 1e-7);
        for (std::size_t j = 0; j < 64; ++j)
            CHECK(std::abs(map.x_of_tau(0, map.tau_node(0, j)) - map.x_at(0, j)) < 1e-13);
        for (std::size_t j = 1; j < 64; ++j) CHECK(map.tau_node(0, j) > map.tau_node(0, j - 1));
        CHECK_FALSE(map.is_identity());
    }

    TEST_CASE("non-positive weights are refused") {
        const Grid g = line(32, 2.0);
        CHECK(error_of([&] { DegenerateMap({[](double x) { return x; }}, g, {-1.0}); }) == ErrorCode::Degenerate);
    }

    TEST_CASE("push and pull round trip smooth functions") {
        const Grid g = line(128, 2.0);
        const DegenerateMap map({[](double x) { return 1.5 + std::cos(std::numbers::pi * x); }}, g, {-1.0});
        GridFunction u(g, 1);
        for (std::size_t j = 0; j < 128; ++j) u.at(j)[0] = std::sin(std::numbers::pi * map.x_at(0, j));
        CHECK(map.pull(map.push(u)).max_abs_diff(u) < 1e-5);
    }

    TEST_CASE("degenerate solve satisfies the substituted equation") {
        const Grid g = line(64, 2.0);
        const DegenerateMap map({[](double x) { return 1.0 + 0.5 * x * x; }}, g, {-1.0});
        const EllipticProblem p = scalar_problem(1, 1.0, 2.0);
        const GridFunction f = random_band_limited(map.tau_grid(), 1, 2.0, 8.0, 1, 0);
        const DegenerateSolution s = solve_degenerate(p, map, map.pull(f));
        CHECK(s.u.grid() == g);
        CHECK(s.u_tau.grid() == map.tau_grid());
        CHECK(s.report.residual < 1e-6);
    }
}

TEST_SUITE("parabolic") {
    TEST_CASE("phi1 and the discrete time norm") {
        CHECK(std::abs(phi1(0.0) - 1.0) < 1e-15);
        for (double z : {1e-8, 1e-3, 0.3, 0.49, 0.51, 2.0, 40.0}) {
            CHECK(std::abs(phi1(z) + std::expm1(-z) / z) < 1e-15);
        }
        const std::vector<double> v{1.0, 2.0};
        CHECK(discrete_time_norm(v, 0.5, 2.0) == doctest::Approx(std::sqrt(0.5 * 5.0)));
        CHECK(discrete_time_norm(v, 0.5, Exponent::infinity()) == doctest::Approx(2.0));
    }

    TEST_CASE("shapes are validated and lower terms must be constant") {
        const Grid g = line(16);
        ParabolicProblem p{EllipticSymbol::separable(1, 2, -1.0), require_positive(diag({1.0}), kSector), {}, 1.0, 4,
                           BesovParams{}, Profile::Cos2};
        std::vector<GridFunction> f(3, GridFunction(g, 1));
        CHECK(error_of([&] { solve_cauchy(p, f); }) == ErrorCode::DimensionMismatch);
        f.emplace_back(g, 1);
        LowerTerm t{MultiIndex({0}), {}, std::vector<Matrix>(16, Matrix::Identity(1, 1)), 0.5};
        p.lower.push_back(t);
        CHECK(error_of([&] { solve_cauchy(p, f); }) == ErrorCode::Unsupported);
    }

    TEST_CASE("constant lower terms enter through the mode eigenvalues") {
        const Grid g = line(16);
        ParabolicProblem p{EllipticSymbol::separable(1, 2, -1.0), require_positive(diag({1.0}), kSector), {}, 2.0, 8,
                           BesovParams{}, Profile::Cos2};
        p.lower.push_back(LowerTerm{MultiIndex({0}), Matrix::Constant(1, 1, 0.5), {}, 0.5});
        const std::array<long, 1> mode{2};
        GridFunction s(g, 1);
        s.at(g.mode_index(mode))[0] = 1.0;
        const GridFunction f = inverse_transform(s);
        const auto sol = solve_cauchy(p, std::vector<GridFunction>(8, f), false);
        const double mu = 1.0 + 4.0 + 0.5;
        GridFunction expected = f;
        expected *= (1.0 - std::exp(-mu * 2.0)) / mu;
        CHECK(sol.u.back().max_abs_diff(expected) < 1e-12);
    }

    TEST_CASE("symbols outside the right half-plane are refused") {
        const Grid g = line(16);
        // A + lower = 1 - 3 < 0 on the zero mode.
        ParabolicProblem p{EllipticSymbol::separable(1, 2, -1.0), require_positive(diag({1.0}), kSector), {}, 1.0, 2,
                           BesovParams{}, Profile::Cos2};
        p.lower.push_back(LowerTerm{MultiIndex({0}), Matrix::Constant(1, 1, -3.0), {}, 0.5});
        std::vector<GridFunction> f(2, GridFunction(g, 1));
        CHECK(error_of([&] { solve_cauchy(p, f); }) == ErrorCode::HypothesisViolation);
    }
}

TEST_SUITE("systems") {
    TEST_CASE("pow2 diagonal, Q and the l_p(Q) fiber norm") {
        const Grid g = line(16);
        const TruncatedSystem s = TruncatedSystem::pow2(g, 3, 1.0);
        CHECK(s.at(5, 0) == doctest::Approx(2.0));
        CHECK(s.at(5, 2) == doctest::Approx(8.0));
        CHECK(s.x_independent());
        const std::vector<cplx> v{1.0, 1.0, 1.0};
        CHECK(lpq_norm_at(s, v, 0) == doctest::Approx(std::sqrt(4.0 + 16.0 + 64.0)));
        GridFunction u(g, 3);
        for (std::size_t j = 0; j < 16; ++j) u.at(j)[1] = 1.0;
        CHECK(apply_q(s, u).max_abs() == doctest::Approx(4.0));
    }

    TEST_CASE("comparability constants") {
        const Grid g = line(32);
        auto mod = [](std::span<const double> x) { return 1.0 + 0.5 * std::sin(x[0]); };
        const TruncatedSystem s = TruncatedSystem::pow2(g, 4, 0.5, mod);
        const Comparability c = check_comparability(s);
        CHECK(c.anchor == 0);
        CHECK(c.c1 == doctest::Approx(0.5));
        CHECK(c.c2 == doctest::Approx(1.5));
        CHECK_FALSE(s.x_independent());
        CHECK(error_of([&] { check_comparability(s, 2.0); }) == ErrorCode::ConditionViolation);
    }

    TEST_CASE("system Cauchy problem matches the per-channel closed form") {
        const Grid g = line(16);
        const TruncatedSystem s = TruncatedSystem::pow2(g, 2, 1.0);
        GridFunction f(g, 2);
        for (std::size_t j = 0; j < 16; ++j) f.at(j)[1] = 1.0;
        const auto sol = system_parabolic(s, EllipticSymbol::separable(1, 2, -1.0), 1.0, 4, BesovParams{},
                                          std::vector<GridFunction>(4, f));
        CHECK(sol.u.back().at(3)[1].real() == doctest::Approx((1.0 - std::exp(-4.0)) / 4.0).epsilon(1e-12));
        CHECK(std::abs(sol.u.back().at(3)[0]) < 1e-15);
    }
}

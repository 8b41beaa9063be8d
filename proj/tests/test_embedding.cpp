#include "support.hpp"

#include "besov/embedding.hpp"
#include "besov/multipliers.hpp"

using namespace besov;
using namespace besov::test;

namespace {
constexpr double kSector = 3.0 * std::numbers::pi / 4.0;
}

TEST_SUITE("embedding") {
    TEST_CASE("exponent bookkeeping") {
        const EmbeddingSpec s{{2, 4}, MultiIndex({1, 1}), {0.0, 1.0}, 0.1, {}};
        CHECK(s.kappa() == doctest::Approx(0.5 + 0.5));
        CHECK(s.nu() == doctest::Approx(0.25));
        CHECK(s.power() == doctest::Approx(-0.1));
        const std::vector<double> t{0.25, 16.0};
        CHECK(s.eta(t) == doctest::Approx(std::pow(0.25, 0.5) * std::pow(16.0, 0.25)));
        CHECK(error_of([&] { s.validate_embedding(); }) == ErrorCode::HypothesisViolation);
        const EmbeddingSpec ok{{2}, MultiIndex({1}), {}, 0.25, {}};
        ok.validate_symbol();
        ok.validate_embedding();
        const EmbeddingSpec big_mu{{2}, MultiIndex({1}), {}, 0.75, {}};
        CHECK(error_of([&] { big_mu.validate_symbol(); }) == ErrorCode::HypothesisViolation);
    }

    TEST_CASE("optimal constant matches a brute-force minimum") {
        for (double mu : {0.1, 0.25, 0.5, 0.9}) {
            const double a = 3.0, b = 0.7;
            double best = 1e300;
            for (double e = -8; e <= 8; e += 1e-4) {
                const double h = std::exp(e);
                best = std::min(best, std::pow(h, mu) * a + std::pow(h, mu - 1) * b);
            }
            CHECK(optimal_constant(mu) * std::pow(a, 1 - mu) * std::pow(b, mu) == doctest::Approx(best).epsilon(1e-6));
        }
    }

    TEST_CASE("scalar symbol sup has a closed form") {
        // n = 1, l = 2, alpha = 1, mu = 1/4, A = a: the sup over xi of
        // |xi| a^{1/4} h^{-1/4} / (a + xi^2 + 1/h) is a^{1/4} h^{-1/4} / (2 sqrt(a + 1/h)).
        const double a = 3.0, h = 0.5;
        const PositiveOperator op = require_positive(diag({a}), kSector);
        const EmbeddingSpec spec{{2}, MultiIndex({1}), {}, 0.25, {}};
        SymbolLattice lattice;
        lattice.t_values = {1.0};
        lattice.h_values = {h};
        const double sup = lemma_symbol_sup(op, spec, line(4096, 64 * kTwoPi), lattice);
        const double exact = std::pow(a, 0.25) * std::pow(h, -0.25) / (2.0 * std::sqrt(a + 1.0 / h));
        CHECK(sup == doctest::Approx(exact).epsilon(1e-4));
        CHECK(sup <= exact * (1 + 1e-12));
    }

    TEST_CASE("zeroth-order symbol sup is attained at the largest h") {
        // alpha = 0, mu = 0, A = a: Psi = a / (a + t |xi|^2 + 1/h), largest at xi = 0, h = h_max.
        const double a = 3.0;
        const PositiveOperator op = require_positive(diag({a}), kSector);
        const EmbeddingSpec spec{{2}, MultiIndex({0}), {}, 0.0, {}};
        const SymbolLattice lattice;
        const double sup = lemma_symbol_sup(op, spec, line(64), lattice);
        CHECK(sup == doctest::Approx(a / (a + 1.0 / lattice.h_values.back())).epsilon(1e-12));
    }

    TEST_CASE("symbol sup is nonincreasing in mu when every eigenvalue times h is at least one") {
        // A^{1-kappa-mu} h^{-mu} = A^{1-kappa} (A h)^{-mu}; eigenvalues are >= 2 and h >= 1/2.
        const PositiveOperator op = require_positive(DiagonalScale{1.0, 4}.matrix(), kSector);
        SymbolLattice lattice;
        lattice.h_values = geometric_lattice(0.5, 1.0, 5);
        double previous = 1e300;
        for (double mu : {0.0, 0.1, 0.25, 0.4, 0.5}) {
            const EmbeddingSpec spec{{2}, MultiIndex({1}), {}, mu, {}};
            const double sup = lemma_symbol_sup(op, spec, line(64), lattice);
            CHECK(sup <= previous * (1 + 1e-12));
            previous = sup;
        }
    }

    TEST_CASE("estimates are homogeneous and consistent at the optimal h") {
        const Grid g = line(64);
        const DyadicPartition part(g);
        const PositiveOperator op = require_positive(DiagonalScale{1.0, 3}.matrix(), kSector);
        const EmbeddingSpec spec{{2}, MultiIndex({1}), {}, 0.25, {1.0}};
        const BesovParams params{0.5, 2.0, 2.0, Weight::constant()};
        const GridFunction u = random_band_limited(g, 3, 2.0, part.band_radius(), 5, 0);
        GridFunction cu = u;
        cu *= 3.7;
        const auto e1 = embedding_estimate_check(u, op, spec, params, part, 0.3);
        const auto e2 = embedding_estimate_check(cu, op, spec, params, part, 0.3);
        CHECK(std::abs(e2.ratio / e1.ratio - 1.0) < 1e-10);
        const auto m1 = multiplicative_estimate_check(u, op, spec, params, part);
        const auto m2 = multiplicative_estimate_check(cu, op, spec, params, part);
        CHECK(std::abs(m2.ratio / m1.ratio - 1.0) < 1e-10);
        // lhs / (c(mu) a^{1-mu} b^mu) at h*, so the two ratios differ by exactly c(mu).
        const auto opt = embedding_estimate_optimal(u, op, spec, params, part);
        CHECK(std::abs(m1.ratio / (opt.ratio * optimal_constant(spec.mu)) - 1.0) < 1e-10);
    }

    TEST_CASE("zero input") {
        const Grid g = line(32);
        const DyadicPartition part(g);
        const PositiveOperator op = require_positive(DiagonalScale{1.0, 2}.matrix(), kSector);
        const EmbeddingSpec spec{{2}, MultiIndex({1}), {}, 0.25, {1.0}};
        const BesovParams params{0.5, 2.0, 2.0, Weight::constant()};
        const GridFunction zero(g, 2);
        const auto r = embedding_estimate_check(zero, op, spec, params, part, 0.5);
        CHECK(r.lhs == 0.0);
        CHECK(r.ratio == 0.0);
        CHECK(error_of([&] { multiplicative_estimate_check(zero, op, spec, params, part); }) == ErrorCode::Degenerate);
    }

    TEST_CASE("the optimal h minimises the right-hand side") {
        const Grid g = line(64);
        const DyadicPartition part(g);
        const PositiveOperator op = require_positive(DiagonalScale{1.0, 3}.matrix(), kSector);
        const EmbeddingSpec spec{{2}, MultiIndex({1}), {}, 0.3, {1.0}};
        const BesovParams params{0.5, 2.0, 2.0, Weight::constant()};
        for (std::size_t i = 0; i < 5; ++i) {
            const GridFunction u = random_band_limited(g, 3, 2.0, part.band_radius(), 13, i);
            const auto best = embedding_estimate_optimal(u, op, spec, params, part);
            for (double h : geometric_lattice(1e-3, 1e3, 25)) {
                const auto r = embedding_estimate_check(u, op, spec, params, part, h);
                CHECK(r.rhs >= best.rhs * (1 - 1e-12));
                CHECK(r.lhs == doctest::Approx(best.lhs));
            }
        }
    }

    TEST_CASE("geometric lattice endpoints") {
        const auto l = geometric_lattice(0.01, 100.0, 5);
        CHECK(l.size() == 5);
        CHECK(l.front() == doctest::Approx(0.01));
        CHECK(l[2] == doctest::Approx(1.0));
        CHECK(l.back() == doctest::Approx(100.0));
    }
}

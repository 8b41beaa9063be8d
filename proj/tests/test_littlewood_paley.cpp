#include "support.hpp"

#include "besov/fft.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/multipliers.hpp"
#include "besov/tools/oracles.hpp"

using namespace besov;
using namespace besov::test;

TEST_SUITE("littlewood_paley") {
    TEST_CASE("cutoff profiles") {
        for (Profile p : {Profile::Cos2, Profile::Polynomial}) {
            CHECK(cutoff(p, 0.0) == 1.0);
            CHECK(cutoff(p, 1.0) == 1.0);
            CHECK(cutoff(p, 2.0) == 0.0);
            CHECK(cutoff(p, 5.0) == 0.0);
            for (double t = 0.0; t < 3.0; t += 0.01) {
                CHECK(cutoff(p, t) == doctest::Approx(tools::oracle_cutoff(p, t)).epsilon(1e-14));
                CHECK(cutoff(p, t + 0.01) <= cutoff(p, t));
            }
        }
        CHECK(parse_profile("polynomial") == Profile::Polynomial);
        CHECK(to_string(Profile::Cos2) == "cos2");
        CHECK(error_of([] { parse_profile("gauss"); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("blocks reconstruct an in-band function") {
        const Grid g({32, 32}, {kTwoPi, 3.0});
        const DyadicPartition part(g, Profile::Polynomial);
        const GridFunction f = random_band_limited(g, 2, 2.0, part.band_radius(), 4, 0);
        GridFunction sum(g, 2);
        for (int k = 0; k <= part.k_max(); ++k) sum += block(f, part, k);
        CHECK(sum.max_abs_diff(f) < 1e-12 * f.max_abs());
        CHECK(out_of_band_fraction(f, part) < 1e-20);
    }

    TEST_CASE("out-of-band input is refused") {
        const Grid g = line(64);
        const DyadicPartition part(g);
        const std::array<long, 1> top{31};
        GridFunction s(g, 1);
        s.at(g.mode_index(top))[0] = 1.0;
        GridFunction f = inverse_transform(s);
        CHECK(out_of_band_fraction(f, part) == doctest::Approx(1.0));
        CHECK(error_of([&] { besov_norm(f, {}, part); }) == ErrorCode::OutOfBand);
    }

    TEST_CASE("single modes have closed-form norms") {
        // e^{i m x} with 2^{k} < m < 2^{k+1} and phi_k(m) + phi_{k+1}(m) = 1.
        const Grid g = line(64);
        const DyadicPartition part(g);
        const long m = 3;
        const std::array<long, 1> mode{m};
        GridFunction s(g, 1);
        s.at(g.mode_index(mode))[0] = 1.0;
        const GridFunction f = inverse_transform(s);
        const BesovParams params{0.5, 2.0, 1.0, Weight::constant()};
        const double p1 = part.phi(1, 3.0), p2 = part.phi(2, 3.0);
        const double expected = std::sqrt(kTwoPi) * (std::sqrt(2.0) * p1 + 2.0 * p2);
        CHECK(besov_norm(f, params, part) == doctest::Approx(expected).epsilon(1e-13));
    }

    TEST_CASE("spectral norm equals the convolution oracle across parameters") {
        const Grid g = line(32, 2.0);
        for (Profile profile : {Profile::Cos2, Profile::Polynomial}) {
            const DyadicPartition part(g, profile);
            const Weight w = Weight::power({0.4}, 0.2, {0.5});
            for (std::size_t i = 0; i < 4; ++i) {
                const GridFunction f = random_band_limited(g, 2, 3.0, part.band_radius(), 8, i);
                for (double s : {-1.0, 0.0, 1.5}) {
                    const BesovParams params{s, 1.5, Exponent::infinity(), w};
                    const double a = besov_norm(f, params, part);
                    const double b = tools::oracle_besov_norm(f, s, 1.5, Exponent::infinity(), w.sample(g), profile);
                    CHECK(a == doctest::Approx(b).epsilon(1e-10));
                }
            }
        }
    }

    TEST_CASE("norm axioms and monotonicity in s") {
        const Grid g = line(64);
        const DyadicPartition part(g);
        for (std::size_t i = 0; i < 10; ++i) {
            const GridFunction a = random_band_limited(g, 1, 2.0, part.band_radius(), 21, i);
            const GridFunction b = random_band_limited(g, 1, 2.0, part.band_radius(), 22, i);
            const BesovParams params{0.3, 2.5, 1.5, Weight::power({0.2}, 0.1)};
            const double na = besov_norm(a, params, part), nb = besov_norm(b, params, part);
            CHECK(besov_norm(a + b, params, part) <= (na + nb) * (1 + 1e-12));
            CHECK(besov_norm(cplx(2, 1) * a, params, part) == doctest::Approx(std::sqrt(5.0) * na).epsilon(1e-12));
            BesovParams higher = params;
            higher.s = 0.8;
            CHECK(besov_norm(a, higher, part) >= na);
            BesovParams r1 = params;
            r1.r = 1.0;
            CHECK(besov_norm(a, r1, part) >= na * (1 - 1e-12));
        }
    }

    TEST_CASE("combine_blocks") {
        const std::vector<double> b{1.0, 2.0, 3.0};
        CHECK(combine_blocks(b, 0.0, 1.0) == doctest::Approx(6.0));
        CHECK(combine_blocks(b, 1.0, Exponent::infinity()) == doctest::Approx(12.0));
        CHECK(combine_blocks(b, 0.0, 2.0) == doctest::Approx(std::sqrt(14.0)));
    }

    TEST_CASE("Hausdorff-Young and interpolation checks return finite ratios") {
        const Grid g = line(64);
        const DyadicPartition part(g);
        const GridFunction f = random_band_limited(g, 2, 2.0, part.band_radius(), 2, 0);
        const auto hy = hausdorff_young_check(f, {0.0, 2.0, 2.0, Weight::constant()}, part);
        CHECK(std::isfinite(hy.ratio));
        CHECK(hy.ratio > 0);
        const auto ii = interpolation_inequality_check(f, 2.0, Weight::constant(), 1);
        CHECK(std::isfinite(ii.ratio));
        CHECK(shell_index(0.5) == 0);
        CHECK(shell_index(1.0) == 1);
        CHECK(shell_index(3.0) == 2);
    }
}

#include "support.hpp"

#include "besov/fft.hpp"
#include "besov/multipliers.hpp"
#include "besov/tools/oracles.hpp"

using namespace besov;
using namespace besov::test;

TEST_SUITE("grid") {
    TEST_CASE("mode ordering is FFT-native") {
        const Grid g = line(8);
        CHECK(g.mode(0, 0) == 0);
        CHECK(g.mode(0, 3) == 3);
        CHECK(g.mode(0, 4) == -4);
        CHECK(g.mode(0, 7) == -1);
        CHECK(g.wavenumber(0, 7) == doctest::Approx(-1.0));
        CHECK(line(8, 1.0).wavenumber(0, 1) == doctest::Approx(kTwoPi));
    }

    TEST_CASE("flatten and unflatten are inverse") {
        const Grid g({8, 16, 8}, {1.0, 2.0, 3.0});
        for (std::size_t j = 0; j < g.point_count(); ++j) {
            const auto idx = g.unflatten(j);
            CHECK(g.flatten(std::span<const std::size_t>(idx.data(), 3)) == j);
        }
        const std::array<long, 3> modes{-1, 3, 0};
        const auto flat = g.mode_index(modes);
        const auto xi = g.frequency(flat);
        CHECK(xi[0] == doctest::Approx(-kTwoPi));
        CHECK(xi[1] == doctest::Approx(3.0 * kTwoPi / 2.0));
    }

    TEST_CASE("point budget and bad shapes are rejected") {
        CHECK(error_of([] { Grid({1024, 1024, 1024}, {1, 1, 1}); }) == ErrorCode::InvalidArgument);
        CHECK(error_of([] { Grid({8, 8}, {1.0}); }) == ErrorCode::DimensionMismatch);
        CHECK(error_of([] { Grid({12}, {1.0}); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("multi-index enumeration") {
        CHECK(multi_indices_of_order(2, 2).size() == 3);
        CHECK(multi_indices_up_to(2, 2).size() == 6);
        CHECK(multi_indices_of_order(3, 2).size() == 6);
        const MultiIndex a({2, 1});
        CHECK(a.order() == 3);
        const std::array<double, 2> xi{2.0, 3.0};
        // (i 2)^2 (i 3) = -4 * 3i
        CHECK(std::abs(monomial(a, xi) - cplx(0.0, -12.0)) < 1e-14);
    }

    TEST_CASE("grid function arithmetic and norms") {
        const Grid g = line(8);
        GridFunction f(g, 2, Exponent::infinity());
        f.at(1)[0] = cplx(3, 4);
        f.at(1)[1] = 2.0;
        CHECK(f.fiber_norm(1) == doctest::Approx(5.0));
        GridFunction h = f + f;
        CHECK(h.max_abs() == doctest::Approx(10.0));
        h -= f;
        CHECK(h.max_abs_diff(f) == 0.0);
        f.at(0)[0] = cplx(std::nan(""), 0);
        CHECK(error_of([&] { f.check_finite(); }) == ErrorCode::InvalidArgument);
    }
}

TEST_SUITE("fft") {
    TEST_CASE("forward transform matches the direct DFT") {
        for (const Grid& g : {line(16, 3.0), Grid({8, 16}, {1.0, 2.0}), Grid({8, 8, 8}, {1.0, 1.0, 1.0})}) {
            const GridFunction f = random_band_limited(g, 2, 2.0, 1e9, 11, 0);
            const GridFunction a = forward_transform(f);
            const GridFunction b = tools::direct_dft(f);
            CHECK(a.max_abs_diff(b) <= 1e-13 * b.max_abs());
            CHECK(inverse_transform(a).max_abs_diff(f) <= 1e-13 * f.max_abs());
            CHECK(tools::direct_synthesis(a).max_abs_diff(f) <= 1e-13 * f.max_abs());
        }
    }

    TEST_CASE("a single exponential maps to a unit coefficient") {
        const Grid g = line(16, 2.0);
        GridFunction f(g, 1);
        for (std::size_t j = 0; j < 16; ++j) f.at(j)[0] = std::exp(cplx(0, 3.0 * std::numbers::pi * g.coordinate(0, j)));
        const GridFunction s = forward_transform(f);
        const std::array<long, 1> m{3};
        CHECK(std::abs(s.at(g.mode_index(m))[0] - 1.0) < 1e-13);
    }

    TEST_CASE("Parseval with the unit-mode convention") {
        const Grid g({16, 8}, {1.0, 3.0});
        const GridFunction f = random_band_limited(g, 3, 2.0, 1e9, 5, 1);
        const GridFunction s = forward_transform(f);
        CHECK(l2(f) * l2(f) / static_cast<double>(g.point_count()) == doctest::Approx(l2(s) * l2(s)).epsilon(1e-12));
    }

    TEST_CASE("spectral derivative is exact on resolved trigonometric polynomials") {
        const Grid g({32, 16}, {kTwoPi, kTwoPi});
        GridFunction u(g, 1), exact(g, 1);
        for (std::size_t j = 0; j < g.point_count(); ++j) {
            const auto x = g.position(j);
            u.at(j)[0] = std::sin(3 * x[0]) * std::cos(2 * x[1]);
            exact.at(j)[0] = -6.0 * std::cos(3 * x[0]) * std::sin(2 * x[1]);
        }
        CHECK(spectral_derivative(u, MultiIndex({1, 1})).max_abs_diff(exact) < 1e-12);
    }

    TEST_CASE("backend reports a version") { CHECK(!fft_library_version().empty()); }
}

#include "support.hpp"

#include "besov/exponent.hpp"
#include "besov/linalg.hpp"
#include "besov/parallel.hpp"

#include <atomic>

using namespace besov;
using namespace besov::test;

TEST_SUITE("exponent") {
    TEST_CASE("rational storage and conjugates") {
        const Exponent p(1.5);
        CHECK(p.numerator() == 3);
        CHECK(p.denominator() == 2);
        CHECK(p.conjugate() == Exponent(3.0));
        CHECK(Exponent(1.0).conjugate().is_infinite());
        CHECK(Exponent::infinity().conjugate() == Exponent(1.0));
        CHECK(Exponent(2.0).conjugate() == Exponent(2.0));
        CHECK(Exponent::infinity().to_string() == "inf");
        CHECK(Exponent(1.5).to_string() == "3/2");
        CHECK(error_of([] { Exponent(-1.0); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("l_p norms") {
        const std::vector<cplx> v{cplx(3, 4), 1.0, -2.0};
        CHECK(lp_norm(v, 1.0) == doctest::Approx(8.0));
        CHECK(lp_norm(v, 2.0) == doctest::Approx(std::sqrt(30.0)));
        CHECK(lp_norm(v, Exponent::infinity()) == doctest::Approx(5.0));
        CHECK(lp_norm(v, 3.0) == doctest::Approx(std::cbrt(125.0 + 1.0 + 8.0)));
    }

    TEST_CASE("l_p norms are monotone decreasing in p") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n;
        for (int t = 0; t < 20; ++t) {
            std::vector<cplx> v(7);
            for (auto& z : v) z = cplx(n(rng), n(rng));
            double prev = lp_norm(v, 1.0);
            for (double p : {1.5, 2.0, 3.0, 7.0}) {
                const double cur = lp_norm(v, p);
                CHECK(cur <= prev * (1 + 1e-14));
                prev = cur;
            }
            CHECK(lp_norm(v, Exponent::infinity()) <= prev * (1 + 1e-14));
        }
    }
}

TEST_SUITE("linalg") {
    TEST_CASE("exact operator norms") {
        Matrix m(2, 2);
        m << cplx(1, 1), 2.0, -3.0, cplx(0, 0.5);
        CHECK(operator_norm(m, 1.0, Exponent::infinity()) == doctest::Approx(3.0));
        const double s = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
        CHECK(operator_norm(m, 2.0, 2.0) == doctest::Approx(s));
        // l_1 -> l_1 is the max column sum.
        CHECK(operator_norm(m, 1.0, 1.0) == doctest::Approx(std::sqrt(2.0) + 3.0).epsilon(1e-6));
    }

    TEST_CASE("iterative norms bound every sampled ratio") {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> n;
        for (int t = 0; t < 5; ++t) {
            Matrix m(3, 3);
            for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = cplx(n(rng), n(rng));
            for (double p : {1.5, 3.0}) {
                const double norm = operator_norm(m, p, p);
                for (int k = 0; k < 200; ++k) {
                    Vector v(3);
                    for (int i = 0; i < 3; ++i) v(i) = cplx(n(rng), n(rng));
                    const Vector w = m * v;
                    const double ratio = lp_norm({w.data(), 3}, p) / lp_norm({v.data(), 3}, p);
                    CHECK(ratio <= norm * (1 + 1e-6));
                }
            }
        }
    }

    TEST_CASE("eigen system reconstructs the matrix") {
        Matrix m(2, 2);
        m << 2.0, 1.0, 0.0, 3.0;
        const EigenSystem e = eigen_system(m);
        const Matrix back = e.vectors * e.values.asDiagonal() * e.inverse_vectors;
        CHECK((back - m).norm() < 1e-12);
        CHECK(condition_number(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
        CHECK(std::isinf(condition_number(Matrix::Zero(2, 2))));
    }
}

TEST_SUITE("parallel") {
    TEST_CASE("every index is visited once and the thread cap is honoured") {
        const unsigned saved = max_threads();
        set_max_threads(3);
        CHECK(max_threads() >= 1);
        CHECK(max_threads() <= 3);
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
        bool once = true;
        for (auto& h : hits) once = once && h.load() == 1;
        CHECK(once);
        CHECK_THROWS(parallel_for(10, [](std::size_t i) {
            if (i == 7) throw std::runtime_error("boom");
        }));
        set_max_threads(saved);
    }
}

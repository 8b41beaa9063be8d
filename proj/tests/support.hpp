#pragma once

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "besov/error.hpp"
#include "besov/grid.hpp"
#include "besov/linalg.hpp"

namespace besov::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Grid line(std::size_t n, double L = kTwoPi) { return Grid({n}, {L}); }

inline Matrix diag(std::initializer_list<double> entries) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (double e : entries) m(i, i) = e, ++i;
    return m;
}

inline double l2(const GridFunction& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(s);
}

template <class F>
ErrorCode error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a besov::Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace besov::test

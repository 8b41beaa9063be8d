#include "besov/tools/scenarios.hpp"

#include <cmath>
#include <random>

namespace besov::tools {

Symbol random_mikhlin_symbol(std::size_t d, Exponent p, std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> width(1.0, 4.0);
    const auto di = static_cast<Eigen::Index>(d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    auto draw = [&] {
        Matrix m(di, di);
        for (Eigen::Index c = 0; c < di; ++c)
            for (Eigen::Index r = 0; r < di; ++r) m(r, c) = scale * cplx(normal(rng), normal(rng));
        return m;
    };
    const Matrix b0 = draw(), b1 = draw(), b2 = draw();
    const double w = width(rng);

    auto eval = [=](std::span<const double> xi) {
        double r2 = 0.0;
        for (double x : xi) r2 += x * x;
        const double g = std::exp(-r2 / (2.0 * w * w));
        return Matrix(b0 + (b1 + b2 * (xi[0] / w)) * g);
    };
    auto deriv = [=](std::span<const double> xi, const MultiIndex& alpha) {
        // First derivatives only.
        double r2 = 0.0;
        for (double x : xi) r2 += x * x;
        const double g = std::exp(-r2 / (2.0 * w * w));
        int axis = 0;
        while (alpha[axis] == 0) ++axis;
        const double x = xi[static_cast<std::size_t>(axis)];
        const double dg = -x / (w * w) * g;
        Matrix out = (b1 + b2 * (xi[0] / w)) * dg;
        if (axis == 0) out += b2 * (g / w);
        return out;
    };
    return Symbol::square(d, p, eval, deriv, 1);
}

Symbol linear_symbol(std::size_t d, Exponent p) {
    const auto di = static_cast<Eigen::Index>(d);
    auto eval = [di](std::span<const double> xi) { return Matrix(Matrix::Identity(di, di) * xi[0]); };
    auto deriv = [di](std::span<const double>, const MultiIndex& alpha) -> Matrix {
        Matrix m = Matrix::Zero(di, di);
        if (alpha[0] == 1 && alpha.order() == 1) m.setIdentity();
        return m;
    };
    return Symbol::square(d, p, eval, deriv, 1);
}

}  // namespace besov::tools

#include "besov/exponent.hpp"

#include <algorithm>
#include <cmath>

#include "besov/error.hpp"

namespace besov {

Exponent::Exponent(double value) {
    if (std::isinf(value) && value > 0) {
        num_ = 0;
        den_ = 1;
        return;
    }
    require(std::isfinite(value) && value > 0, ErrorCode::InvalidArgument,
            "exponent must be positive, got " + std::to_string(value));
    // Continued-fraction convergents until the value is reproduced.
    std::uint64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double x = value;
    for (int i = 0; i < 40; ++i) {
        const double a = std::floor(x);
        const auto ai = static_cast<std::uint64_t>(a);
        const std::uint64_t h2 = ai * h1 + h0;
        const std::uint64_t k2 = ai * k1 + k0;
        if (h2 > 0xffffffffu || k2 > 0xffffffffu) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        const double approx = static_cast<double>(h1) / static_cast<double>(k1);
        if (std::abs(approx - value) <= 1e-15 * value) break;
        const double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    require(h1 > 0 && k1 > 0, ErrorCode::InvalidArgument,
            "exponent not representable: " + std::to_string(value));
    num_ = static_cast<std::uint32_t>(h1);
    den_ = static_cast<std::uint32_t>(k1);
}

Exponent Exponent::from_rational(std::uint32_t num, std::uint32_t den) {
    Exponent e;
    if (num == 0) {
        require(den == 1, ErrorCode::InvalidArgument, "infinite exponent must be stored as 0/1");
    } else {
        require(den > 0, ErrorCode::InvalidArgument, "exponent denominator must be positive");
    }
    e.num_ = num;
    e.den_ = den;
    return e;
}

Exponent Exponent::conjugate() const {
    if (is_infinite()) return Exponent::from_rational(1, 1);
    require(num_ >= den_, ErrorCode::InvalidArgument, "conjugate needs p >= 1");
    if (num_ == den_) return infinity();
    return from_rational(num_, num_ - den_);
}

std::string Exponent::to_string() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

double lp_norm(std::span<const cplx> v, Exponent p) {
    if (p.is_infinite()) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    const double pv = p.value();
    if (pv == 2.0) {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return std::sqrt(s);
    }
    if (pv == 1.0) {
        double s = 0.0;
        for (const auto& z : v) s += std::abs(z);
        return s;
    }
    // Scale by the max entry to keep z^p in range.
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& z : v) s += std::pow(std::abs(z) / m, pv);
    return m * std::pow(s, 1.0 / pv);
}

}  // namespace besov

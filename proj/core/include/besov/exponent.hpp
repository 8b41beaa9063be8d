#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

namespace besov {

using cplx = std::complex<double>;

/// An integrability exponent p in [1, inf] (or, for a few callers, any
/// positive value). Carried as a rational so it can be written to disk
/// exactly; infinity is the pair 0/1.
class Exponent {
public:
    Exponent() = default;
    Exponent(double value);  // NOLINT(google-explicit-constructor)

    static Exponent infinity() { return from_rational(0, 1); }
    static Exponent from_rational(std::uint32_t num, std::uint32_t den);

    bool is_infinite() const noexcept { return num_ == 0; }
    double value() const noexcept {
        return is_infinite() ? std::numeric_limits<double>::infinity()
                             : static_cast<double>(num_) / static_cast<double>(den_);
    }
    std::uint32_t numerator() const noexcept { return num_; }
    std::uint32_t denominator() const noexcept { return den_; }

    /// Hoelder conjugate p' with 1/p + 1/p' = 1.
    Exponent conjugate() const;

    std::string to_string() const;

    friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
        return static_cast<std::uint64_t>(a.num_) * b.den_ ==
               static_cast<std::uint64_t>(b.num_) * a.den_ &&
               a.is_infinite() == b.is_infinite();
    }

private:
    std::uint32_t num_ = 2;
    std::uint32_t den_ = 1;
};

/// l_p norm of a complex vector.
double lp_norm(std::span<const cplx> v, Exponent p);

}  // namespace besov

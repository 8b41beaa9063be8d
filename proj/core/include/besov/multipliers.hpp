#pragma once

#include <cstdint>
#include <array>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "besov/grid.hpp"
#include "besov/linalg.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/weights.hpp"

namespace besov {

/// Operator-valued symbol m : R^n -> B(E_1, E_2), E_i = (C^{d_i}, l_{p_i}).
/// Evaluated pointwise; derivative tables come either from an analytic
/// callback or from centred finite differences on the frequency lattice.
class Symbol {
public:
    using Eval = std::function<Matrix(std::span<const double> xi)>;
    using Derivative = std::function<Matrix(std::span<const double> xi, const MultiIndex& alpha)>;

    Symbol(std::size_t d_in, Exponent p_in, std::size_t d_out, Exponent p_out, Eval eval,
           Derivative derivative = {}, int derivative_depth = 0);

    /// d x d symbol acting on a single fiber space.
    static Symbol square(std::size_t d, Exponent p, Eval eval, Derivative derivative = {},
                         int derivative_depth = 0);

    std::size_t d_in() const noexcept { return d_in_; }
    std::size_t d_out() const noexcept { return d_out_; }
    Exponent p_in() const noexcept { return p_in_; }
    Exponent p_out() const noexcept { return p_out_; }
    int analytic_depth() const noexcept { return derivative_ ? depth_ : 0; }

    Matrix operator()(std::span<const double> xi) const;
    /// Analytic D^alpha m, or empty if unavailable for this alpha.
    std::optional<Matrix> derivative(std::span<const double> xi, const MultiIndex& alpha) const;

    /// m(a xi).
    Symbol dilated(double a) const;
    /// Pointwise sum / product (m1 m2 means m1(xi) * m2(xi)).
    friend Symbol operator+(const Symbol& a, const Symbol& b);
    friend Symbol operator*(const Symbol& a, const Symbol& b);
    /// xi -> scale(xi) m(xi) for a scalar function.
    Symbol scaled(std::function<double(std::span<const double>)> scale) const;

    /// m at every flat frequency index of a grid.
    std::vector<Matrix> tabulate(const Grid& grid) const;

private:
    std::size_t d_in_, d_out_;
    Exponent p_in_, p_out_;
    Eval eval_;
    Derivative derivative_;
    int depth_ = 0;
};

/// T_m f = F^{-1}[m(xi) F f(xi)].
GridFunction apply_multiplier(const Symbol& m, const GridFunction& f);

struct MikhlinResult {
    double value = 0.0;
    bool finite_difference = false;  // true if any derivative came from differencing
};

/// max_{|alpha| <= depth} sup_xi (1 + |xi|)^{|alpha|} ||D^alpha m(xi)||_{B(E_1,E_2)}
/// over the grid's frequency lattice.
/// Finite differences are available up to kMaxDifferenceDepth.
MikhlinResult mikhlin_constant(const Symbol& m, const Grid& grid, int depth);
inline constexpr int kMaxDifferenceDepth = 4;

struct MikhlinGrowth {
    std::vector<double> values;   // one per grid in the sweep
    bool bounded = false;         // last relative change below tolerance
};

/// Mikhlin constant over a sequence of grids with growing xi_max; a symbol
/// is reported as non-Mikhlin when the sup keeps growing.
MikhlinGrowth mikhlin_growth(const Symbol& m, std::span<const Grid> grids, int depth,
                             double tolerance = 0.1);

/// Grid on which a symbol is treated as a function of xi for its Besov norm:
/// point j carries xi = j h (wrapped to [-N h / 2, N h / 2)).
struct SymbolGrid {
    std::vector<std::size_t> sizes;
    std::vector<double> spacing;

    Grid grid() const;
    std::array<double, 3> xi(std::size_t flat) const;
};

/// min over sampled a > 0 of || xi -> m(a xi) ||_{B^{n/p}_{p,1,gamma}}, with the
/// fiber norm taken as the B(E_1,E_2) operator norm at each xi. Dilations whose
/// symbol leaves the representable band are skipped.
double besov_functional(const Symbol& m, Exponent p, const Weight& gamma,
                        const SymbolGrid& symbol_grid, std::span<const double> dilations,
                        Profile profile = Profile::Cos2);

/// besov_functional of xi -> phi_k(|xi|) m(xi) for k = 0..k_max, each with its
/// own minimum over the dilations that keep the support of phi_k(a xi) resolved
/// and inside the symbol lattice. The per-block condition asks for the maximum of these
/// to be finite.
std::vector<double> block_besov_functionals(const Symbol& m, Exponent p, const Weight& gamma,
                                            const SymbolGrid& symbol_grid, std::span<const double> dilations,
                                            int k_max, Profile profile = Profile::Cos2);

/// Geometric dilation grid 2^{lo}, 2^{lo+step}, ..., 2^{hi}.
std::vector<double> dilation_grid(double lo_exponent = -4, double hi_exponent = 4, double step = 1);

struct LebesgueSpace {
    Exponent q{2.0};
    Weight weight;
};
struct BesovSpace {
    BesovParams params;
    Profile profile = Profile::Cos2;
};
using NormSpace = std::variant<LebesgueSpace, BesovSpace>;

/// Seeded random band-limited probe number `index` (reproducible per index).
GridFunction random_band_limited(const Grid& grid, std::size_t fiber_dim, Exponent fiber_p,
                                 double band_radius, std::uint64_t seed, std::size_t index);

/// Lower bound on ||T_m|| over single-mode/single-channel probes at every
/// in-band frequency plus `probes` seeded random band-limited functions.
double empirical_operator_norm(const Symbol& m, const Grid& grid, const NormSpace& space,
                               std::size_t probes, std::uint64_t seed);

/// ||F f||_{L_{p'},gamma} / ||f||_{L_p,gamma} for one function.
double fourier_type_ratio(const GridFunction& f, Exponent p, const Weight& gamma);

/// sup over seeded random probes of fourier_type_ratio, p in [1, 2].
double fourier_type_constant(Exponent p, const Weight& gamma, const Grid& grid,
                             std::size_t probes, std::uint64_t seed);

struct MultiplierReport {
    double mikhlin_constant = 0.0;
    bool mikhlin_finite_difference = false;
    bool mikhlin_bounded = true;
    double besov_functional = 0.0;
    double empirical_lebesgue = 0.0;
    double empirical_besov = 0.0;
    std::size_t probe_count = 0;
};

}  // namespace besov

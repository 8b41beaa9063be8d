#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "besov/grid.hpp"

namespace besov {

/// A positive weight gamma on the torus.
///
/// Power weights are products over axes of (eps + |x_k - c_k|)^{beta_k},
/// where |.| is the distance to the nearest periodic image of the centre.
/// With eps = 0 the centre is a singular point; it is excluded from grid
/// quadrature (its sample is dropped) rather than evaluated.
class Weight {
public:
    struct Constant {
        double value = 1.0;
    };
    struct Power {
        std::vector<double> beta;    // one exponent per axis (a single entry broadcasts)
        double eps = 0.0;
        std::vector<double> center;  // defaults to the origin
    };
    struct Table {
        Grid grid;
        std::vector<double> values;
    };

    Weight() : kind_(Constant{}) {}
    static Weight constant(double value = 1.0);
    static Weight power(std::vector<double> beta, double eps, std::vector<double> center = {});
    static Weight table(Grid grid, std::vector<double> values);

    bool is_constant() const noexcept { return std::holds_alternative<Constant>(kind_); }
    bool is_power() const noexcept { return std::holds_alternative<Power>(kind_); }
    bool is_table() const noexcept { return std::holds_alternative<Table>(kind_); }
    const Power* as_power() const noexcept { return std::get_if<Power>(&kind_); }
    const Table* as_table() const noexcept { return std::get_if<Table>(&kind_); }
    bool is_unit() const noexcept;

    /// Grid samples used by every weighted norm; excluded singular points carry 0.
    std::vector<double> sample(const Grid& grid) const;

    /// Weight at an arbitrary point of the torus, or nullopt at an excluded
    /// singular point.
    std::optional<double> at(std::span<const double> x, const Grid& grid) const;

    /// Weight evaluated on the frequency side at xi (non-periodic distance).
    /// Tables cannot be evaluated there.
    std::optional<double> at_frequency(std::span<const double> xi) const;

    /// Singular points of power weights with eps = 0.
    std::vector<std::vector<double>> singular_points(const Grid& grid) const;

private:
    explicit Weight(std::variant<Constant, Power, Table> kind) : kind_(std::move(kind)) {}
    std::variant<Constant, Power, Table> kind_;
};

/// (sum_x ||f(x)||_E^q gamma(x) dx)^{1/q}; for q = inf, max_x ||f(x)||_E gamma(x).
double weighted_lq_norm(const GridFunction& f, Exponent q, const Weight& gamma);

/// Same quadrature with a caller-supplied fiber norm evaluated per point.
double weighted_lq_norm(std::span<const double> fiber_norms, const Grid& grid, Exponent q,
                        std::span<const double> weight_samples);

struct ApSample {
    std::vector<double> scales;        // cube side lengths
    std::size_t positions_per_scale = 8;  // lattice positions per axis
    /// Quadrature cell width; 0 selects min(scales) / 16.
    double quadrature_cell = 0.0;
};

struct ApReport {
    double p = 2.0;
    double estimate = 0.0;
    std::size_t cube_count = 0;
    double min_scale = 0.0;
    double max_scale = 0.0;
    std::vector<double> cube_center;  // argmax cube
    double cube_side = 0.0;
};

/// Sampled Muckenhoupt A_p constant:
///   max_Q (avg_Q gamma) (avg_Q gamma^{-1/(p-1)})^{p-1}
/// over cubes at the given scales placed on a uniform lattice plus cubes
/// centred at every singular point of the weight.
ApReport ap_constant(const Weight& gamma, const Grid& grid, double p, const ApSample& sample);

}  // namespace besov

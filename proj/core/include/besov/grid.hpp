#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "besov/exponent.hpp"

namespace besov {

inline constexpr std::size_t kDefaultPointBudget = std::size_t{1} << 24;

/// Uniform periodic grid on the torus prod_k [0, L_k). Points are stored
/// row-major (the last axis varies fastest). Frequency tables use the
/// FFT-native ordering: index j on an axis carries the mode j for
/// j < N/2 and j - N otherwise.
class Grid {
public:
    Grid() = default;
    Grid(std::vector<std::size_t> sizes, std::vector<double> periods,
         std::size_t point_budget = kDefaultPointBudget);

    int dim() const noexcept { return static_cast<int>(sizes_.size()); }
    std::size_t size(int axis) const { return sizes_.at(static_cast<std::size_t>(axis)); }
    double period(int axis) const { return periods_.at(static_cast<std::size_t>(axis)); }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    const std::vector<double>& periods() const noexcept { return periods_; }

    std::size_t point_count() const noexcept { return points_; }
    double spacing(int axis) const { return period(axis) / static_cast<double>(size(axis)); }
    double cell_volume() const noexcept;
    double volume() const noexcept;
    /// Frequency lattice spacing 2 pi / L_k on each axis, multiplied out.
    double frequency_cell_volume() const noexcept;

    /// Signed mode index on an axis for FFT-native position j.
    long mode(int axis, std::size_t j) const;
    double wavenumber(int axis, std::size_t j) const;
    double coordinate(int axis, std::size_t j) const;

    /// Per-axis indices of a flat point index.
    std::array<std::size_t, 3> unflatten(std::size_t flat) const;
    std::size_t flatten(std::span<const std::size_t> index) const;

    /// Wavenumber vector xi at a flat frequency index.
    std::array<double, 3> frequency(std::size_t flat) const;
    double frequency_radius(std::size_t flat) const;
    std::array<double, 3> position(std::size_t flat) const;

    /// Largest radius of a ball that fits in the frequency box.
    double nyquist_radius() const;

    /// Flat frequency index of the mode with the given signed indices.
    std::size_t mode_index(std::span<const long> modes) const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.sizes_ == b.sizes_ && a.periods_ == b.periods_;
    }

private:
    std::vector<std::size_t> sizes_;
    std::vector<double> periods_;
    std::size_t points_ = 0;
};

/// Multi-index alpha = (alpha_1, ..., alpha_n).
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> components);

    static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }
    static MultiIndex unit(int dim, int axis, int power = 1);

    int dim() const noexcept { return static_cast<int>(components_.size()); }
    int order() const noexcept { return order_; }
    int operator[](int axis) const { return components_.at(static_cast<std::size_t>(axis)); }
    const std::vector<int>& components() const noexcept { return components_; }

    MultiIndex operator+(const MultiIndex& other) const;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
        return a.components_ <=> b.components_;
    }

private:
    std::vector<int> components_;
    int order_ = 0;
};

/// All multi-indices of dimension `dim` with |alpha| == order.
std::vector<MultiIndex> multi_indices_of_order(int dim, int order);
/// All multi-indices with |alpha| <= order, sorted by order then lexicographically.
std::vector<MultiIndex> multi_indices_up_to(int dim, int order);

/// (i xi)^alpha for a frequency vector.
cplx monomial(const MultiIndex& alpha, std::span<const double> xi);

/// Fiber-valued (C^d with an l_p fiber norm) samples on a grid. Values are
/// fiber-major within a point: values[point * d + component].
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Grid grid, std::size_t fiber_dim, Exponent fiber_p = Exponent(2.0));
    GridFunction(Grid grid, std::size_t fiber_dim, Exponent fiber_p, std::vector<cplx> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t fiber_dim() const noexcept { return fiber_dim_; }
    Exponent fiber_p() const noexcept { return fiber_p_; }
    std::size_t point_count() const noexcept { return grid_.point_count(); }

    std::span<cplx> at(std::size_t point) {
        return {values_.data() + point * fiber_dim_, fiber_dim_};
    }
    std::span<const cplx> at(std::size_t point) const {
        return {values_.data() + point * fiber_dim_, fiber_dim_};
    }
    std::vector<cplx>& values() noexcept { return values_; }
    const std::vector<cplx>& values() const noexcept { return values_; }

    /// l_p fiber norm at one point.
    double fiber_norm(std::size_t point) const;

    /// Throws if any entry is NaN or infinite.
    void check_finite() const;
    bool same_shape(const GridFunction& other) const noexcept;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx scale);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

    /// Max absolute entrywise difference.
    double max_abs_diff(const GridFunction& other) const;
    double max_abs() const;

private:
    Grid grid_;
    std::size_t fiber_dim_ = 0;
    Exponent fiber_p_{2.0};
    std::vector<cplx> values_;
};

}  // namespace besov

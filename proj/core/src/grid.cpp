#include "besov/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "besov/error.hpp"

namespace besov {

Grid::Grid(std::vector<std::size_t> sizes, std::vector<double> periods, std::size_t point_budget)
    : sizes_(std::move(sizes)), periods_(std::move(periods)) {
    require(!sizes_.empty() && sizes_.size() <= 3, ErrorCode::InvalidArgument,
            "grid dimension must be 1, 2 or 3");
    require(sizes_.size() == periods_.size(), ErrorCode::DimensionMismatch,
            "grid needs one period per axis");
    points_ = 1;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        const std::size_t n = sizes_[k];
        require(n >= 8 && (n & (n - 1)) == 0, ErrorCode::InvalidArgument,
                "axis " + std::to_string(k) + ": size must be a power of two >= 8, got " +
                    std::to_string(n));
        require(std::isfinite(periods_[k]) && periods_[k] > 0, ErrorCode::InvalidArgument,
                "axis " + std::to_string(k) + ": period must be positive");
        require(points_ <= point_budget / n, ErrorCode::InvalidArgument,
                "grid exceeds the point budget of " + std::to_string(point_budget));
        points_ *= n;
    }
}

double Grid::cell_volume() const noexcept {
    double v = 1.0;
    for (int k = 0; k < dim(); ++k) v *= spacing(k);
    return v;
}

double Grid::volume() const noexcept {
    double v = 1.0;
    for (double l : periods_) v *= l;
    return v;
}

double Grid::frequency_cell_volume() const noexcept {
    double v = 1.0;
    for (double l : periods_) v *= 2.0 * std::numbers::pi / l;
    return v;
}

long Grid::mode(int axis, std::size_t j) const {
    const auto n = static_cast<long>(size(axis));
    const auto jj = static_cast<long>(j);
    return jj < n / 2 ? jj : jj - n;
}

double Grid::wavenumber(int axis, std::size_t j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(mode(axis, j)) / period(axis);
}

double Grid::coordinate(int axis, std::size_t j) const {
    return static_cast<double>(j) * spacing(axis);
}

std::array<std::size_t, 3> Grid::unflatten(std::size_t flat) const {
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int k = dim() - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = flat % sizes_[static_cast<std::size_t>(k)];
        flat /= sizes_[static_cast<std::size_t>(k)];
    }
    return idx;
}

std::size_t Grid::flatten(std::span<const std::size_t> index) const {
    require(index.size() == sizes_.size(), ErrorCode::DimensionMismatch, "index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < sizes_.size(); ++k) flat = flat * sizes_[k] + index[k];
    return flat;
}

std::array<double, 3> Grid::frequency(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::array<double, 3> xi{0, 0, 0};
    for (int k = 0; k < dim(); ++k)
        xi[static_cast<std::size_t>(k)] = wavenumber(k, idx[static_cast<std::size_t>(k)]);
    return xi;
}

double Grid::frequency_radius(std::size_t flat) const {
    const auto xi = frequency(flat);
    return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

std::array<double, 3> Grid::position(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::array<double, 3> x{0, 0, 0};
    for (int k = 0; k < dim(); ++k)
        x[static_cast<std::size_t>(k)] = coordinate(k, idx[static_cast<std::size_t>(k)]);
    return x;
}

double Grid::nyquist_radius() const {
    double r = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim(); ++k)
        r = std::min(r, std::numbers::pi * static_cast<double>(size(k)) / period(k));
    return r;
}

std::size_t Grid::mode_index(std::span<const long> modes) const {
    require(modes.size() == sizes_.size(), ErrorCode::DimensionMismatch, "mode rank mismatch");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        const auto n = static_cast<long>(sizes_[k]);
        require(modes[k] >= -n / 2 && modes[k] < n / 2, ErrorCode::OutOfBand,
                "axis " + std::to_string(k) + ": mode " + std::to_string(modes[k]) +
                    " not on the grid");
        const long j = modes[k] >= 0 ? modes[k] : modes[k] + n;
        flat = flat * sizes_[k] + static_cast<std::size_t>(j);
    }
    return flat;
}

MultiIndex::MultiIndex(std::vector<int> components) : components_(std::move(components)) {
    order_ = 0;
    for (int a : components_) {
        require(a >= 0, ErrorCode::InvalidArgument, "multi-index components must be nonnegative");
        order_ += a;
    }
}

MultiIndex MultiIndex::unit(int dim, int axis, int power) {
    std::vector<int> c(static_cast<std::size_t>(dim), 0);
    c.at(static_cast<std::size_t>(axis)) = power;
    return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    require(dim() == other.dim(), ErrorCode::DimensionMismatch, "multi-index rank mismatch");
    std::vector<int> c(components_);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += other.components_[k];
    return MultiIndex(std::move(c));
}

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
    std::vector<MultiIndex> out;
    std::vector<int> c(static_cast<std::size_t>(dim), 0);
    auto rec = [&](auto&& self, int axis, int remaining) -> void {
        if (axis == dim - 1) {
            c[static_cast<std::size_t>(axis)] = remaining;
            out.emplace_back(c);
            return;
        }
        for (int a = remaining; a >= 0; --a) {
            c[static_cast<std::size_t>(axis)] = a;
            self(self, axis + 1, remaining - a);
        }
    };
    rec(rec, 0, order);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int order) {
    std::vector<MultiIndex> out;
    for (int o = 0; o <= order; ++o) {
        auto level = multi_indices_of_order(dim, o);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

cplx monomial(const MultiIndex& alpha, std::span<const double> xi) {
    cplx v{1.0, 0.0};
    for (int k = 0; k < alpha.dim(); ++k) {
        const cplx f{0.0, xi[static_cast<std::size_t>(k)]};
        for (int a = 0; a < alpha[k]; ++a) v *= f;
    }
    return v;
}

GridFunction::GridFunction(Grid grid, std::size_t fiber_dim, Exponent fiber_p)
    : grid_(std::move(grid)), fiber_dim_(fiber_dim), fiber_p_(fiber_p) {
    require(fiber_dim_ >= 1, ErrorCode::InvalidArgument, "fiber dimension must be >= 1");
    require(fiber_p_.is_infinite() || fiber_p_.value() >= 1.0, ErrorCode::InvalidArgument,
            "fiber exponent must be >= 1");
    values_.assign(grid_.point_count() * fiber_dim_, cplx{});
}

GridFunction::GridFunction(Grid grid, std::size_t fiber_dim, Exponent fiber_p,
                           std::vector<cplx> values)
    : GridFunction(std::move(grid), fiber_dim, fiber_p) {
    require(values.size() == values_.size(), ErrorCode::DimensionMismatch,
            "expected " + std::to_string(values_.size()) + " values, got " +
                std::to_string(values.size()));
    values_ = std::move(values);
}

double GridFunction::fiber_norm(std::size_t point) const { return lp_norm(at(point), fiber_p_); }

void GridFunction::check_finite() const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        require(std::isfinite(values_[i].real()) && std::isfinite(values_[i].imag()),
                ErrorCode::InvalidArgument,
                "non-finite value at point " + std::to_string(i / fiber_dim_));
}

bool GridFunction::same_shape(const GridFunction& other) const noexcept {
    return grid_ == other.grid_ && fiber_dim_ == other.fiber_dim_ && fiber_p_ == other.fiber_p_;
}

namespace {
void require_same(const GridFunction& a, const GridFunction& b) {
    require(a.grid() == b.grid(), ErrorCode::DimensionMismatch, "grid functions live on different grids");
    require(a.fiber_dim() == b.fiber_dim(), ErrorCode::DimensionMismatch,
            "fiber dimensions differ: " + std::to_string(a.fiber_dim()) + " vs " +
                std::to_string(b.fiber_dim()));
    require(a.fiber_p() == b.fiber_p(), ErrorCode::DimensionMismatch, "fiber exponents differ");
}
}  // namespace

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx scale) {
    for (auto& v : values_) v *= scale;
    return *this;
}

double GridFunction::max_abs_diff(const GridFunction& other) const {
    require_same(*this, other);
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i] - other.values_[i]));
    return m;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace besov

#include "besov/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "besov/error.hpp"
#include "besov/fft.hpp"
#include "besov/parallel.hpp"

namespace besov {

Profile parse_profile(std::string_view name) {
    if (name == "cos2") return Profile::Cos2;
    if (name == "polynomial") return Profile::Polynomial;
    fail(ErrorCode::InvalidArgument, "unknown partition profile '" + std::string(name) +
                                         "' (expected cos2 or polynomial)");
}

std::string_view to_string(Profile profile) {
    return profile == Profile::Cos2 ? "cos2" : "polynomial";
}

double cutoff(Profile profile, double t) {
    const double x = std::abs(t) - 1.0;
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    if (profile == Profile::Cos2) {
        const double c = std::cos(0.5 * std::numbers::pi * x);
        return c * c;
    }
    return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

DyadicPartition::DyadicPartition(const Grid& grid, Profile profile) : grid_(grid), profile_(profile) {
    const double xi_max = grid_.nyquist_radius();
    k_max_ = static_cast<int>(std::floor(std::log2(xi_max))) - 1;
    require(k_max_ >= 2, ErrorCode::InvalidArgument,
            "grid too coarse for a dyadic partition: k_max = " + std::to_string(k_max_) +
                " (need >= 2)");
    tables_.resize(static_cast<std::size_t>(k_max_) + 1);
    for (int k = 0; k <= k_max_; ++k) {
        auto& t = tables_[static_cast<std::size_t>(k)];
        t.resize(grid_.point_count());
        for (std::size_t j = 0; j < t.size(); ++j) t[j] = phi(k, grid_.frequency_radius(j));
    }
}

double DyadicPartition::band_radius() const noexcept { return std::ldexp(1.0, k_max_); }

double DyadicPartition::phi(int k, double radius) const {
    if (k < 0) return 0.0;
    if (k == 0) return cutoff(profile_, radius);
    return cutoff(profile_, std::ldexp(radius, -k)) - cutoff(profile_, std::ldexp(radius, 1 - k));
}

double DyadicPartition::psi_sum(int k, double radius) const {
    return phi(k - 1, radius) + phi(k, radius) + phi(k + 1, radius);
}

const std::vector<double>& DyadicPartition::table(int k) const {
    require(k >= 0 && k <= k_max_, ErrorCode::InvalidArgument,
            "block index " + std::to_string(k) + " outside 0.." + std::to_string(k_max_));
    return tables_[static_cast<std::size_t>(k)];
}

namespace {

void require_partition_grid(const GridFunction& f, const DyadicPartition& partition) {
    require(f.grid() == partition.grid(), ErrorCode::DimensionMismatch,
            "function and partition live on different grids");
}

GridFunction block_from_spectrum(const GridFunction& spectrum, const DyadicPartition& partition, int k) {
    GridFunction s = spectrum;
    const auto& t = partition.table(k);
    scale_modes(s, [&](std::size_t j) { return cplx{t[j], 0.0}; });
    return inverse_transform(s);
}

double band_fraction(const GridFunction& spectrum, const DyadicPartition& partition) {
    const double band = partition.band_radius();
    const std::size_t d = spectrum.fiber_dim();
    double total = 0.0, outside = 0.0;
    for (std::size_t j = 0; j < spectrum.point_count(); ++j) {
        double e = 0.0;
        for (std::size_t c = 0; c < d; ++c) e += std::norm(spectrum.values()[j * d + c]);
        total += e;
        if (spectrum.grid().frequency_radius(j) > band) outside += e;
    }
    return total == 0.0 ? 0.0 : outside / total;
}

std::vector<double> point_norms(const GridFunction& f, const FiberNorm& norm) {
    std::vector<double> out(f.point_count());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = norm ? norm(f.at(j), j) : f.fiber_norm(j);
    return out;
}

}  // namespace

GridFunction block(const GridFunction& f, const DyadicPartition& partition, int k) {
    require_partition_grid(f, partition);
    return block_from_spectrum(forward_transform(f), partition, k);
}

double out_of_band_fraction(const GridFunction& f, const DyadicPartition& partition) {
    require_partition_grid(f, partition);
    return band_fraction(forward_transform(f), partition);
}

std::vector<double> block_norms(const GridFunction& f, const BesovParams& params,
                                const DyadicPartition& partition, const FiberNorm& norm) {
    require_partition_grid(f, partition);
    const GridFunction spectrum = forward_transform(f);
    const double frac = band_fraction(spectrum, partition);
    require(frac < kBandTolerance, ErrorCode::OutOfBand,
            "spectral energy fraction " + std::to_string(frac) + " above |xi| = " +
                std::to_string(partition.band_radius()));
    const auto weights = params.weight.sample(f.grid());
    std::vector<double> out(static_cast<std::size_t>(partition.k_max()) + 1);
    parallel_for(out.size(), [&](std::size_t k) {
        const GridFunction b = block_from_spectrum(spectrum, partition, static_cast<int>(k));
        out[k] = weighted_lq_norm(point_norms(b, norm), f.grid(), params.q, weights);
    });
    return out;
}

double combine_blocks(std::span<const double> norms, double s, Exponent r) {
    if (r.is_infinite()) {
        double m = 0.0;
        for (std::size_t k = 0; k < norms.size(); ++k)
            m = std::max(m, std::exp2(static_cast<double>(k) * s) * norms[k]);
        return m;
    }
    const double rv = r.value();
    require(rv >= 1.0, ErrorCode::InvalidArgument, "summation exponent must be >= 1");
    std::vector<double> terms(norms.size());
    double m = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        terms[k] = std::exp2(static_cast<double>(k) * s) * norms[k];
        m = std::max(m, terms[k]);
    }
    if (m == 0.0) return 0.0;
    double sum = 0.0;
    for (double t : terms) sum += std::pow(t / m, rv);
    return m * std::pow(sum, 1.0 / rv);
}

double besov_norm(const GridFunction& f, const BesovParams& params, const DyadicPartition& partition,
                  const FiberNorm& norm) {
    const auto b = block_norms(f, params, partition, norm);
    return combine_blocks(b, params.s, params.r);
}

double besov_lions_norm(const GridFunction& f, const BesovParams& params,
                        const DyadicPartition& partition, std::span<const int> orders,
                        const Eigen::MatrixXcd& operator_matrix, std::span<const double> axis_scales) {
    const int n = f.grid().dim();
    require(static_cast<int>(orders.size()) == n, ErrorCode::DimensionMismatch,
            "need one derivative order per axis");
    require(axis_scales.empty() || static_cast<int>(axis_scales.size()) == n,
            ErrorCode::DimensionMismatch, "need one scale per axis");
    require(operator_matrix.rows() == static_cast<Eigen::Index>(f.fiber_dim()) &&
                operator_matrix.cols() == static_cast<Eigen::Index>(f.fiber_dim()),
            ErrorCode::DimensionMismatch,
            "operator is " + std::to_string(operator_matrix.rows()) + "x" +
                std::to_string(operator_matrix.cols()) + ", fiber dimension " +
                std::to_string(f.fiber_dim()));
    GridFunction af(f.grid(), f.fiber_dim(), f.fiber_p());
    const auto d = static_cast<Eigen::Index>(f.fiber_dim());
    for (std::size_t j = 0; j < f.point_count(); ++j) {
        Eigen::Map<const Vector> in(f.at(j).data(), d);
        Eigen::Map<Vector> out(af.at(j).data(), d);
        out = operator_matrix * in;
    }
    double total = besov_norm(af, params, partition);
    for (int k = 0; k < n; ++k) {
        const double t = axis_scales.empty() ? 1.0 : axis_scales[static_cast<std::size_t>(k)];
        const auto dk = spectral_derivative(f, MultiIndex::unit(n, k, orders[static_cast<std::size_t>(k)]));
        total += t * besov_norm(dk, params, partition);
    }
    return total;
}

double frequency_lq_norm(const GridFunction& spectrum, Exponent q, const Weight& gamma,
                         const std::function<bool(std::size_t)>& mask) {
    require(q.is_infinite() || q.value() >= 1.0, ErrorCode::InvalidArgument,
            "integrability exponent must be >= 1");
    const Grid& g = spectrum.grid();
    const std::size_t n = static_cast<std::size_t>(g.dim());
    std::vector<double> norms(spectrum.point_count(), 0.0);
    std::vector<double> weights(spectrum.point_count(), 0.0);
    for (std::size_t j = 0; j < norms.size(); ++j) {
        if (mask && !mask(j)) continue;
        const auto xi = g.frequency(j);
        norms[j] = spectrum.fiber_norm(j);
        weights[j] = gamma.at_frequency(std::span(xi.data(), n)).value_or(0.0);
    }
    // Reuse the spatial quadrature with the cell volume swapped for the frequency measure.
    const double ratio = g.frequency_cell_volume() / g.cell_volume();
    if (q.is_infinite()) return weighted_lq_norm(norms, g, q, weights);
    for (auto& w : weights) w *= ratio;
    return weighted_lq_norm(norms, g, q, weights);
}

int shell_index(double radius) {
    if (radius < 1.0) return 0;
    return static_cast<int>(std::floor(std::log2(radius))) + 1;
}

RatioReport hausdorff_young_check(const GridFunction& f, const BesovParams& params,
                                  const DyadicPartition& partition) {
    RatioReport report;
    report.rhs = besov_norm(f, params, partition);
    require(report.rhs > 0.0, ErrorCode::Degenerate, "Hausdorff-Young check needs f != 0");
    const GridFunction spectrum = forward_transform(f);
    const Grid& g = f.grid();
    int m_max = 0;
    for (std::size_t j = 0; j < g.point_count(); ++j)
        m_max = std::max(m_max, shell_index(g.frequency_radius(j)));
    std::vector<double> shells(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        shells[static_cast<std::size_t>(m)] = frequency_lq_norm(spectrum, params.q, params.weight, [&](std::size_t j) {
            return shell_index(g.frequency_radius(j)) == m;
        });
    }
    report.lhs = combine_blocks(shells, 0.0, params.r);
    report.ratio = report.lhs / report.rhs;
    return report;
}

RatioReport interpolation_inequality_check(const GridFunction& f, Exponent p, const Weight& gamma, int j) {
    const int n = f.grid().dim();
    require(!p.is_infinite(), ErrorCode::InvalidArgument, "p must be finite");
    const double theta = static_cast<double>(n) / (static_cast<double>(j) * p.value());
    require(theta < 1.0, ErrorCode::HypothesisViolation,
            "need j > n/p, got j = " + std::to_string(j) + ", n/p = " +
                std::to_string(static_cast<double>(n) / p.value()));
    RatioReport report;
    report.lhs = frequency_lq_norm(forward_transform(f), Exponent(1.0), gamma);
    const double base = weighted_lq_norm(f, p, gamma);
    double top = 0.0;
    for (const auto& alpha : multi_indices_of_order(n, j))
        top += weighted_lq_norm(spectral_derivative(f, alpha), p, gamma);
    report.rhs = std::pow(base, 1.0 - theta) * std::pow(top, theta);
    require(report.rhs > 0.0, ErrorCode::Degenerate, "interpolation check needs a nonconstant f");
    report.ratio = report.lhs / report.rhs;
    return report;
}

}  // namespace besov

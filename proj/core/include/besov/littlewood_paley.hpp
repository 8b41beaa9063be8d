#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "besov/grid.hpp"
#include "besov/linalg.hpp"
#include "besov/weights.hpp"

namespace besov {

/// Shape of the radial cutoff psi: 1 on [0,1], 0 on [2, inf), smooth in between.
enum class Profile { Cos2, Polynomial };

Profile parse_profile(std::string_view name);
std::string_view to_string(Profile profile);

/// Radial cutoff psi(t) for the profile.
double cutoff(Profile profile, double t);

/// Dyadic partition of unity phi_k(xi) = psi(2^{-k} xi) - psi(2^{-k+1} xi),
/// phi_0 = psi, tabulated on a grid's frequency lattice for k = 0..k_max.
class DyadicPartition {
public:
    DyadicPartition(const Grid& grid, Profile profile = Profile::Cos2);

    const Grid& grid() const noexcept { return grid_; }
    Profile profile() const noexcept { return profile_; }
    int k_max() const noexcept { return k_max_; }
    /// Radius 2^{k_max} below which the tabulated bumps sum to one.
    double band_radius() const noexcept;

    /// phi_k at radius |xi| for any k >= 0 (including k_max + 1).
    double phi(int k, double radius) const;
    /// phi_{k-1} + phi_k + phi_{k+1} at radius |xi|.
    double psi_sum(int k, double radius) const;

    /// phi_k sampled at every flat frequency index.
    const std::vector<double>& table(int k) const;

private:
    Grid grid_;
    Profile profile_;
    int k_max_ = 0;
    std::vector<std::vector<double>> tables_;
};

/// Pointwise fiber norm hook: value at `point` -> nonnegative real.
using FiberNorm = std::function<double(std::span<const cplx> value, std::size_t point)>;

struct BesovParams {
    double s = 0.0;
    Exponent q{2.0};
    Exponent r{2.0};
    Weight weight;
};

/// F^{-1}[phi_k F f].
GridFunction block(const GridFunction& f, const DyadicPartition& partition, int k);

/// Fraction of spectral energy at |xi| > 2^{k_max}.
double out_of_band_fraction(const GridFunction& f, const DyadicPartition& partition);
inline constexpr double kBandTolerance = 1e-8;

/// Per-block weighted L_q norms ||phi_k^ * f||, k = 0..k_max. Throws
/// OutOfBand when the function is not band-limited to the partition.
std::vector<double> block_norms(const GridFunction& f, const BesovParams& params,
                                const DyadicPartition& partition, const FiberNorm& norm = {});

/// l_r combination of 2^{ks} * block norms.
double combine_blocks(std::span<const double> block_norms, double s, Exponent r);

/// ||{2^{ks} phi_k^ * f}||_{l_r(L_{q,gamma})}.
double besov_norm(const GridFunction& f, const BesovParams& params,
                  const DyadicPartition& partition, const FiberNorm& norm = {});

/// Norm of B^{l,s}(E(A), E):
///   besov_norm(A f) + sum_k besov_norm(t_k D_k^{l_k} f).
/// `operator_matrix` acts on the fiber; `axis_scales` (t) defaults to ones.
double besov_lions_norm(const GridFunction& f, const BesovParams& params,
                        const DyadicPartition& partition, std::span<const int> orders,
                        const Eigen::MatrixXcd& operator_matrix,
                        std::span<const double> axis_scales = {});

struct RatioReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Weighted L_q norm of a spectrum over frequency lattice points selected by `mask`,
/// with measure prod_k 2 pi / L_k and gamma evaluated at xi.
double frequency_lq_norm(const GridFunction& spectrum, Exponent q, const Weight& gamma,
                         const std::function<bool(std::size_t)>& mask = {});

/// Shell index m of a radius: J_0 = {|xi| < 1}, J_m = {2^{m-1} <= |xi| < 2^m}.
int shell_index(double radius);

/// lhs = ||{f^ chi_{J_m}}||_{l_r(L_{q,gamma})} on the frequency lattice,
/// rhs = besov_norm(f).
RatioReport hausdorff_young_check(const GridFunction& f, const BesovParams& params,
                                  const DyadicPartition& partition);

/// ||f^||_{L_1,gamma} / (||f||_{L_p,gamma}^{1-n/(jp)} (sum_{|a|=j} ||D^a f||_{L_p,gamma})^{n/(jp)}).
RatioReport interpolation_inequality_check(const GridFunction& f, Exponent p,
                                           const Weight& gamma, int j);

}  // namespace besov

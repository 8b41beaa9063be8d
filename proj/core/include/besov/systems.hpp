#pragma once

#include <cstdint>
#include <vector>

#include "besov/elliptic.hpp"
#include "besov/parabolic.hpp"

namespace besov {

/// Truncated infinite system: diagonal d_m(x) > 0, couplings A_alpha(x) = [d_{alpha k m}(x)].
struct TruncatedSystem {
    Grid grid;
    std::size_t d = 8;
    std::vector<double> diagonal;    // point-major: diagonal[point * d + m]
    std::vector<LowerTerm> couplings;
    Exponent p{2.0};

    /// d_m(x) = 2^{sigma m} * modulation(x), m = 1..d.
    static TruncatedSystem pow2(const Grid& grid, std::size_t d, double sigma,
                                const std::function<double(std::span<const double>)>& modulation = {},
                                Exponent p = Exponent(2.0));

    double at(std::size_t point, std::size_t m) const { return diagonal[point * d + m]; }
    bool x_independent() const;
};

/// (sum_m |d_m(x) u_m(x)|^p)^{1/p}.
FiberNorm lpq_fiber_norm(const TruncatedSystem& system);
double lpq_norm_at(const TruncatedSystem& system, std::span<const cplx> value, std::size_t point);

/// Pointwise Q(x) u(x).
GridFunction apply_q(const TruncatedSystem& system, const GridFunction& u);

struct Comparability {
    std::size_t anchor = 0;  // flat point index x_0
    double c1 = 1.0;         // min_x,m d_m(x)/d_m(x_0)
    double c2 = 1.0;         // max_x,m d_m(x)/d_m(x_0)
};

/// Throws PositivityViolation for d_m(x) <= 0 and ConditionViolation when
/// c2 / c1 exceeds `max_ratio`.
Comparability check_comparability(const TruncatedSystem& system, double max_ratio = 1e6);

/// max_alpha sup_x sup_m sum_k |d_{alpha m k}(x)| d_k(x_0)^{-(1 - |alpha|/(2l) - mu)}.
double coupling_bound(const TruncatedSystem& system, int order);

/// Problem with A = diag(d_m(x_0)) and the x-variation diag(d(x) - d(x_0))
/// folded in as an alpha = 0 lower term.
EllipticProblem build_system_problem(const TruncatedSystem& system, const EllipticSymbol& symbol,
                                     cplx lambda, const BesovParams& params,
                                     Profile profile = Profile::Cos2, double fold_mu = 0.5);

/// Besov norm with the l_p(Q) fiber norm.
double system_besov_norm(const TruncatedSystem& system, const GridFunction& u,
                         const BesovParams& params, const DyadicPartition& partition);

struct TruncationStudy {
    std::vector<std::size_t> sizes;
    std::vector<double> distances;  // ||u_{d_{i+1}} - u_{d_i}|| (zero padded), l_p(Q) of the larger system
    bool converging = false;        // each distance at least `factor` times the next
};

/// Solves the family produced by `make_system(d)` for each size, with forcing
/// `forcing(d)`, and reports successive distances.
TruncationStudy truncation_study(const std::function<TruncatedSystem(std::size_t)>& make_system,
                                 const std::function<GridFunction(std::size_t)>& forcing,
                                 std::span<const std::size_t> sizes, const EllipticSymbol& symbol,
                                 cplx lambda, const BesovParams& params, double factor = 4.0,
                                 const NeumannOptions& options = {});

/// resolvent_sweep with the operator column measured as ||Q u||.
ResolventTable system_resolvent_sweep(const TruncatedSystem& system, const EllipticSymbol& symbol,
                                      std::span<const cplx> lambdas, const BesovParams& params,
                                      const ResolventOptions& options = {});

/// Cauchy problem for an x-independent system.
ParabolicSolution system_parabolic(const TruncatedSystem& system, const EllipticSymbol& symbol,
                                   double t_end, std::size_t steps, const BesovParams& params,
                                   std::span<const GridFunction> forcing);

}  // namespace besov

#pragma once

#include <functional>
#include <vector>

#include "besov/elliptic.hpp"
#include "besov/grid.hpp"
#include "besov/weights.hpp"

namespace besov {

/// Coordinate change tau_k = int_{origin_k}^{x_k} gamma_k(y)^{-1} dy that turns
/// the degenerate derivative (gamma_k(x_k) d/dx_k)^i into d^i/dtau_k^i.
///
/// The x-grid covers [origin_k, origin_k + L_k); the tau-grid has the same point
/// counts and periods T_k = tau_k(origin_k + L_k). Functions move between the
/// grids by periodic cubic interpolation.
class DegenerateMap {
public:
    using AxisWeight = std::function<double(double)>;

    DegenerateMap(std::vector<AxisWeight> gamma, const Grid& x_grid,
                  std::vector<double> origin = {}, std::size_t substeps = 8);

    const Grid& x_grid() const noexcept { return x_grid_; }
    const Grid& tau_grid() const noexcept { return tau_grid_; }
    const std::vector<double>& origin() const noexcept { return origin_; }

    /// x coordinate of grid index j (origin included).
    double x_at(int axis, std::size_t j) const;
    /// tau at x-grid node j.
    double tau_node(int axis, std::size_t j) const { return tau_[static_cast<std::size_t>(axis)][j]; }
    double tau_of_x(int axis, double x) const;
    double x_of_tau(int axis, double tau) const;
    double gamma(int axis, double x) const { return gamma_[static_cast<std::size_t>(axis)](x); }

    /// x-space samples -> tau-space samples (u~(tau) = u(x(tau))).
    GridFunction push(const GridFunction& f) const;
    /// tau-space samples -> x-space samples.
    GridFunction pull(const GridFunction& f) const;

    /// D^{[alpha]} u computed as pull(d_tau^alpha push(u)).
    GridFunction degenerate_derivative(const GridFunction& u, const MultiIndex& alpha) const;
    /// Same for a function already in tau-space; result in x-space.
    GridFunction degenerate_derivative_tau(const GridFunction& u_tau, const MultiIndex& alpha) const;

    /// Tabulated tau-space weight gamma_w(x(tau)) prod_k gamma_k(x_k(tau_k)), so that
    /// weighted norms over tau equal the x-space norms with weight gamma_w.
    /// x_weight is read in x-grid coordinates (origin at 0).
    Weight tau_weight(const Weight& x_weight) const;

    bool is_identity(double tolerance = 1e-14) const;

private:
    std::vector<AxisWeight> gamma_;
    Grid x_grid_;
    Grid tau_grid_;
    std::vector<double> origin_;
    std::vector<std::vector<double>> tau_;  // tau at x nodes plus the endpoint
    std::vector<std::vector<double>> x_nodes_;
    std::vector<std::vector<double>> slope_x_;  // monotone cubic slopes of x(tau)
    std::vector<std::vector<double>> slope_tau_;  // monotone cubic slopes of tau(x)
    bool identity_ = false;
};

struct DegenerateSolution {
    GridFunction u;      // x-space
    GridFunction u_tau;  // tau-space
    SolveReport report;  // norms evaluated in tau-space with the pulled-back weight
};

/// Solves sum a_alpha D^{[alpha]} u + A u + lambda u + lower = f through the
/// substitution; lower-order fields, if any, are given on the tau-grid.
DegenerateSolution solve_degenerate(const EllipticProblem& problem, const DegenerateMap& map,
                                    const GridFunction& f_x, const NeumannOptions& options = {});

/// resolvent_sweep on the tau-grid with norms carrying the pulled-back weight.
ResolventTable degenerate_resolvent_sweep(const EllipticProblem& problem, const DegenerateMap& map,
                                          std::span<const cplx> lambdas,
                                          const ResolventOptions& options = {});

}  // namespace besov

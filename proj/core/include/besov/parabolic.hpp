#pragma once

#include <vector>

#include "besov/degenerate.hpp"
#include "besov/elliptic.hpp"

namespace besov {

/// du/dt + sum a_alpha D^alpha u + A u + sum_lower C_alpha D^alpha u = f, u(0) = 0,
/// with constant-coefficient lower terms and piecewise-constant forcing.
struct ParabolicProblem {
    EllipticSymbol symbol;
    PositiveOperator op;
    std::vector<LowerTerm> lower;  // constant matrices only
    double t_end = 1.0;
    std::size_t steps = 16;
    BesovParams params;
    Profile profile = Profile::Cos2;

    double dt() const { return t_end / static_cast<double>(steps); }
};

struct ParabolicReport {
    double time_derivative_norm = 0.0;
    std::vector<double> derivative_norms;  // |alpha| = 2l
    double operator_norm = 0.0;
    double forcing_norm = 0.0;
    double ratio = 0.0;
    double max_symbol_angle = 0.0;  // max |arg mu| over modes
};

struct ParabolicSolution {
    std::vector<GridFunction> u;                // steps + 1 states, u[0] = 0
    std::vector<GridFunction> average;          // exact step averages, one per step
    std::vector<GridFunction> time_derivative;  // f_m - G u_{m+1}, one per step
    ParabolicReport report;
};

/// phi_1(z) = (1 - e^{-z}) / z with the limit 1 at z = 0.
cplx phi1(cplx z);

/// Exponential integrator, exact per mode for piecewise-constant forcing:
/// y_{m+1} = e^{-mu dt} y_m + dt phi_1(mu dt) g_m.
/// Throws HypothesisViolation when a mode eigenvalue has |arg mu| >= pi/2.
/// `with_report` = false skips the norm evaluation.
ParabolicSolution solve_cauchy(const ParabolicProblem& problem,
                               std::span<const GridFunction> forcing, bool with_report = true);

/// Discrete time norm (sum_m dt ||X_m||^q)^{1/q} of per-step values.
double discrete_time_norm(std::span<const double> values, double dt, Exponent q);

/// Degenerate variant: push the forcing to tau-space, integrate, pull back.
/// Report norms are tau-space norms with the pulled-back weight.
ParabolicSolution solve_cauchy_degenerate(const ParabolicProblem& problem,
                                          const DegenerateMap& map,
                                          std::span<const GridFunction> forcing);

}  // namespace besov

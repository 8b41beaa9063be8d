#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "besov/grid.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/operators.hpp"

namespace besov {

/// Principal symbol K(xi) = sum_{|alpha| = 2l} a_alpha (i xi)^alpha.
class EllipticSymbol {
public:
    EllipticSymbol(int dim, int order, std::vector<std::pair<MultiIndex, cplx>> coefficients);

    /// a_alpha = c for alpha = order * e_k on every axis.
    static EllipticSymbol separable(int dim, int order, cplx c = -1.0);

    int dim() const noexcept { return dim_; }
    int order() const noexcept { return order_; }
    const std::vector<std::pair<MultiIndex, cplx>>& coefficients() const noexcept {
        return coefficients_;
    }
    cplx operator()(std::span<const double> xi) const;

private:
    int dim_;
    int order_;
    std::vector<std::pair<MultiIndex, cplx>> coefficients_;
};

struct Ellipticity {
    double m0 = 0.0;            // min |K(xi)| / sum_k xi_k^{2l} over xi != 0
    double sector_angle = 0.0;  // max |arg K(xi)|
    bool satisfied = false;     // m0 above tolerance
    std::vector<double> witness;  // frequency attaining the minimum
};

/// Scans every nonzero grid frequency. Throws Degenerate for the zero symbol.
Ellipticity check_ellipticity(const EllipticSymbol& symbol, const Grid& grid,
                              double tolerance = 1e-10);

/// Lower-order coupling A_alpha(x) D^alpha u with |alpha| < 2l.
struct LowerTerm {
    MultiIndex alpha;
    Matrix constant;               // used when `field` is empty
    std::vector<Matrix> field;     // one matrix per grid point
    double mu = 0.5;

    bool varies() const noexcept { return !field.empty(); }
    const Matrix& at(std::size_t point) const { return field.empty() ? constant : field[point]; }
};

struct EllipticProblem {
    EllipticSymbol symbol;
    PositiveOperator op;
    std::vector<LowerTerm> lower;
    cplx lambda{1.0, 0.0};
    BesovParams params;
    Profile profile = Profile::Cos2;
};

/// sup_x ||A_alpha(x) A^{-(1 - |alpha|/(2l) - mu)}|| for each lower term.
std::vector<double> lower_term_bounds(const EllipticProblem& problem);

/// u^(xi) = (A + lambda + K(xi))^{-1} f^(xi). Throws SingularMode when a mode
/// matrix has condition number above 1e12.
GridFunction apply_principal_resolvent(const EllipticProblem& problem, const GridFunction& f);

/// sum_alpha a_alpha D^alpha u + (A + lambda) u + sum_lower A_alpha(x) D^alpha u.
GridFunction apply_operator(const EllipticProblem& problem, const GridFunction& u);

/// sum_lower A_alpha(x) D^alpha u.
GridFunction apply_lower(const EllipticProblem& problem, const GridFunction& u);

struct SolveReport {
    double residual = 0.0;  // ||L u - f|| / ||f|| in the discrete l_2 sense
    std::vector<MultiIndex> top_alphas;
    std::vector<double> derivative_norms;  // ||D^alpha u||_B for |alpha| = 2l
    double operator_norm = 0.0;            // ||A u||_B
    double solution_norm = 0.0;            // ||u||_B
    double forcing_norm = 0.0;             // ||f||_B
    double coercive_ratio = 0.0;
    int iterations = 0;
    double contraction = 0.0;
    std::vector<double> iterate_distances;
};

/// Fills the coercive entries of a report from a solution.
void fill_coercive_terms(SolveReport& report, const EllipticProblem& problem,
                         const GridFunction& u, const GridFunction& f,
                         const DyadicPartition& partition);

/// Relative discrete l_2 residual of the full equation.
double relative_residual(const EllipticProblem& problem, const GridFunction& u,
                         const GridFunction& f);

struct Solution {
    GridFunction u;
    SolveReport report;
};

/// Exact per-mode solve; lower terms must be absent.
Solution solve_principal(const EllipticProblem& problem, const GridFunction& f);

/// Power-iteration estimate of ||L_1 (G_0 + lambda)^{-1}|| in L_2.
double contraction_estimate(const EllipticProblem& problem, const Grid& grid,
                            std::size_t fiber_dim, std::uint64_t seed, int iterations = 20);

struct NeumannOptions {
    double tolerance = 1e-12;
    int max_iterations = 200;
    std::uint64_t seed = 1;
    double contraction = -1.0;  // precomputed q; negative means measure it
    bool with_report = true;    // false skips residual and coercive norms
};

/// u_{m+1} = (G_0 + lambda)^{-1}(f - L_1 u_m). Throws NonContractive when the
/// measured contraction is >= 1.
Solution solve_full(const EllipticProblem& problem, const GridFunction& f,
                    const NeumannOptions& options = {});

struct ResolventOptions {
    std::size_t random_probes = 8;
    std::uint64_t seed = 1;
    bool single_mode_probes = true;
    std::size_t max_mode_probes = 0;  // 0 keeps every in-band mode; otherwise a strided subset
    /// Image used for the operator column; defaults to the pointwise A u.
    std::function<GridFunction(const GridFunction&)> operator_image;
    NeumannOptions neumann;
};

struct ResolventTable {
    std::vector<std::string> columns;  // "D^(a1,a2)" per |alpha| <= 2l, then "A"
    std::vector<cplx> lambdas;
    std::vector<std::vector<double>> values;  // [lambda][column]

    /// max / min over lambda of one column.
    double column_variation(std::size_t column) const;
    double max_column_variation() const;
};

/// For each lambda: sup over probes of |lambda|^{1-|alpha|/(2l)} ||D^alpha u||_B / ||f||_B
/// for every |alpha| <= 2l, and ||A u||_B / ||f||_B, with u = (G + lambda)^{-1} f.
ResolventTable resolvent_sweep(const EllipticProblem& problem, std::span<const cplx> lambdas,
                               const Grid& grid, const ResolventOptions& options = {});

/// In-band single-mode single-channel probes of a grid.
std::vector<GridFunction> single_mode_probes(const Grid& grid, std::size_t fiber_dim,
                                             Exponent fiber_p, double band_radius);

}  // namespace besov

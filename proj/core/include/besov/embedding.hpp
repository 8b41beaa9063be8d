#pragma once

#include <span>
#include <vector>

#include "besov/grid.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/operators.hpp"

namespace besov {

/// Parameters of the anisotropic embedding D^alpha B^{l,s}(E(A), E) -> B^s(E(A^{1-kappa-mu})).
struct EmbeddingSpec {
    std::vector<int> l;        // per-axis orders, positive
    MultiIndex alpha;
    std::vector<double> r;     // r_k in {0, b}; empty means zeros
    double mu = 0.0;
    std::vector<double> t;     // per-axis scales t_k in (0, T]; empty means ones

    int dim() const noexcept { return static_cast<int>(l.size()); }
    /// sum_k (alpha_k + r_k) / l_k.
    double kappa() const;
    /// max_{k,j} (1/l_k - 1/l_j).
    double nu() const;
    /// prod_k t_k^{alpha_k / l_k}.
    double eta(std::span<const double> t) const;
    double eta() const;
    /// 1 - kappa - mu, the fractional power taken of A.
    double power() const { return 1.0 - kappa() - mu; }

    /// Symbol-bound hypotheses: kappa <= 1 and 0 <= mu <= 1 - kappa.
    /// `diagnostic` only checks shapes and mu >= 0.
    void validate_symbol(bool diagnostic = false) const;
    /// Embedding hypotheses: 0 < kappa + nu <= 1 and 0 <= mu <= 1 - kappa - nu.
    void validate_embedding() const;
};

/// n-point geometric lattice from lo to hi inclusive.
std::vector<double> geometric_lattice(double lo, double hi, std::size_t count);

struct SymbolLattice {
    std::vector<double> t_values = geometric_lattice(1.0 / 16.0, 1.0, 9);
    std::vector<double> h_values = geometric_lattice(1.0 / 64.0, 1.0, 9);
};

/// Psi_{t,h,mu}(xi) = prod t_k^{(alpha_k+r_k)/l_k} |xi|^r (i xi)^alpha A^{1-kappa-mu} h^{-mu}
///                    [A + eta(t, xi)]^{-1},  eta(t, xi) = sum t_k |xi_k|^{l_k} + 1/h.
/// All axes share the sampled t value.
Matrix lemma_symbol(const PositiveOperator& op, const EmbeddingSpec& spec, const Matrix& power,
                    std::span<const double> xi, std::span<const double> t, double h);

/// sup over the frequency lattice of `xi_grid` and the (t, h) lattice of
/// ||Psi_{t,h,mu}(xi)|| in B(E).
double lemma_symbol_sup(const PositiveOperator& op, const EmbeddingSpec& spec,
                        const Grid& xi_grid, const SymbolLattice& lattice = {},
                        bool diagnostic = false);

struct EmbeddingReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double h = 0.0;
    double lions_norm = 0.0;  // ||u||_Y
    double besov_norm = 0.0;  // ||u||_{B^s(E)}
};

/// lhs = eta(t) ||D^alpha u||_{B^s(E(A^{1-kappa-mu}))}, rhs = h^mu ||u||_Y + h^{mu-1} ||u||_{B^s(E)}.
EmbeddingReport embedding_estimate_check(const GridFunction& u, const PositiveOperator& op,
                                         const EmbeddingSpec& spec, const BesovParams& params,
                                         const DyadicPartition& partition, double h);

/// Same with h at the minimiser h* = (1 - mu) ||u||_B / (mu ||u||_Y) of the right-hand side.
EmbeddingReport embedding_estimate_optimal(const GridFunction& u, const PositiveOperator& op,
                                           const EmbeddingSpec& spec, const BesovParams& params,
                                           const DyadicPartition& partition);

/// min_h (h^mu a + h^{mu-1} b) = c(mu) a^{1-mu} b^mu.
double optimal_constant(double mu);

/// lhs / (||u||_Y^{1-mu} ||u||_{B^s(E)}^mu).
RatioReport multiplicative_estimate_check(const GridFunction& u, const PositiveOperator& op,
                                          const EmbeddingSpec& spec, const BesovParams& params,
                                          const DyadicPartition& partition);

}  // namespace besov

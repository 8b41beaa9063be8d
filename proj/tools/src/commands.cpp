#include "besov/tools/commands.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "besov/elliptic.hpp"
#include "besov/embedding.hpp"
#include "besov/error.hpp"
#include "besov/fft.hpp"
#include "besov/io.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/multipliers.hpp"
#include "besov/operators.hpp"
#include "besov/parabolic.hpp"
#include "besov/parallel.hpp"
#include "besov/systems.hpp"
#include "besov/weights.hpp"
#include "besov/tools/acceptance.hpp"
#include "besov/tools/config.hpp"
#include "besov/tools/scenarios.hpp"

namespace besov::tools {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_exponent(Exponent e) { return e.is_infinite() ? "inf" : fmt(e.value()); }

/// Header cells are `name[unit]`; values are written with 17 significant digits.
class Csv {
public:
    explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) fail(ErrorCode::InvalidArgument, "CSV row width mismatch");
        rows_.push_back(std::move(cells));
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << quote(cells[i]);
            out << "\n";
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
    }

private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct Invocation {
    std::string subcommand;
    std::optional<std::filesystem::path> config_path;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::filesystem::path out_dir = ".";
    std::vector<int> criteria;
};

struct Context {
    const Invocation& inv;
    RunConfig cfg;
    std::ostream& out;
    std::vector<std::string> artifacts;

    std::filesystem::path path(const std::string& name) {
        artifacts.push_back(name);
        return inv.out_dir / name;
    }
    void write(const Csv& csv, const std::string& name) { csv.write(path(name)); }
};

// ---------------------------------------------------------------------------
// Problem assembly from a validated configuration.

PositiveOperator build_operator(const RunConfig& cfg) {
    Matrix m;
    if (cfg.op.kind == "identity") {
        m = Matrix::Identity(static_cast<Eigen::Index>(cfg.op.d), static_cast<Eigen::Index>(cfg.op.d));
    } else if (cfg.op.kind == "diag") {
        m = DiagonalScale{cfg.op.sigma, cfg.op.d}.matrix();
    } else {
        m = read_matrix(cfg.op.path);
    }
    return require_positive(m, cfg.op.angle, {}, cfg.fiber_p);
}

EllipticSymbol build_symbol(const RunConfig& cfg, int dim) {
    if (cfg.symbol_coeffs.empty()) return EllipticSymbol::separable(dim, cfg.symbol_order, -1.0);
    return EllipticSymbol(dim, cfg.symbol_order, cfg.symbol_coeffs);
}

Matrix matrix_at(const GridFunction& f, std::size_t point, std::size_t d) {
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const auto v = f.at(point);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[i * d + k];
    return m;
}

// A coefficient file is either a single matrix or a BSGF field of row-major
// d x d matrices on the working grid.
LowerTerm load_coefficient(const std::filesystem::path& path, const MultiIndex& alpha, double mu, std::size_t d,
                           const Grid& grid, bool allow_field) {
    LowerTerm term;
    term.alpha = alpha;
    term.mu = mu;
    std::optional<Matrix> single;
    try {
        single = read_matrix(path);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidArgument) throw;
    }
    if (single) {
        require(single->rows() == static_cast<Eigen::Index>(d), ErrorCode::DimensionMismatch,
                path.string() + ": expected a " + std::to_string(d) + " x " + std::to_string(d) + " matrix");
        term.constant = *single;
        return term;
    }
    const GridFunction f = read_grid_function(path);
    require(f.fiber_dim() == d * d, ErrorCode::DimensionMismatch,
            path.string() + ": expected fiber dimension " + std::to_string(d * d));
    require(allow_field, ErrorCode::Unsupported, path.string() + ": x-dependent coefficients are not supported here");
    require(f.grid() == grid, ErrorCode::DimensionMismatch, path.string() + ": field grid differs from the working grid");
    for (std::size_t j = 0; j < f.point_count(); ++j) term.field.push_back(matrix_at(f, j, d));
    return term;
}

std::vector<LowerTerm> build_lower(const RunConfig& cfg, std::size_t d, const Grid& grid, bool allow_field) {
    std::vector<LowerTerm> out;
    for (const auto& spec : cfg.lower) {
        LowerTerm t = load_coefficient(spec.path, spec.alpha, spec.mu, d, grid, allow_field);
        require(spec.field || !t.varies(), ErrorCode::InvalidArgument,
                spec.path.string() + ": 'constant:' needs a single-matrix file");
        out.push_back(std::move(t));
    }
    return out;
}

// d = 0 accepts any fiber dimension from an input file and uses fiber.d otherwise.
GridFunction input_or_random(const RunConfig& cfg, std::size_t d, std::uint64_t seed) {
    if (cfg.input) {
        GridFunction f = read_grid_function(*cfg.input);
        require(d == 0 || f.fiber_dim() == d, ErrorCode::DimensionMismatch,
                cfg.input->string() + ": fiber dimension " + std::to_string(f.fiber_dim()) + ", expected " +
                    std::to_string(d));
        return f;
    }
    const Grid g = cfg.grid();
    const DyadicPartition part(g, cfg.profile);
    return random_band_limited(g, d == 0 ? cfg.fiber_d : d, cfg.fiber_p, part.band_radius(), seed, 0);
}

EllipticProblem build_problem(const RunConfig& cfg, const Grid& grid) {
    PositiveOperator op = build_operator(cfg);
    const std::size_t d = op.dim();
    return EllipticProblem{build_symbol(cfg, grid.dim()), std::move(op), build_lower(cfg, d, grid, true), cfg.lambda,
                           cfg.besov(), cfg.profile};
}

NeumannOptions neumann(const RunConfig& cfg) {
    NeumannOptions o;
    o.tolerance = cfg.neumann_tolerance;
    o.max_iterations = cfg.neumann_max_iterations;
    o.seed = cfg.seed;
    return o;
}

ResolventOptions resolvent_options(const RunConfig& cfg) {
    ResolventOptions o;
    o.random_probes = cfg.sweep_random_probes;
    o.seed = cfg.seed;
    o.single_mode_probes = cfg.sweep_single_mode;
    o.max_mode_probes = cfg.sweep_max_mode_probes;
    o.neumann = neumann(cfg);
    return o;
}

std::vector<cplx> sweep_lambdas(const RunConfig& cfg) {
    return {cfg.sweep_lambdas.begin(), cfg.sweep_lambdas.end()};
}

TruncatedSystem build_system(const RunConfig& cfg) {
    const Grid g = cfg.grid();
    const std::size_t d = cfg.system_d;
    TruncatedSystem s;
    if (cfg.system_diagonal == "pow2") {
        std::function<double(std::span<const double>)> modulation;
        if (cfg.system_modulation != 0.0) {
            const double m = cfg.system_modulation, L = g.period(0);
            modulation = [m, L](std::span<const double> x) { return 1.0 + m * std::sin(2.0 * std::numbers::pi * x[0] / L); };
        }
        s = TruncatedSystem::pow2(g, d, cfg.system_sigma, modulation, cfg.fiber_p);
    } else {
        const GridFunction t = read_grid_function(cfg.system_diagonal_path);
        require(t.fiber_dim() == d && t.grid() == g, ErrorCode::DimensionMismatch,
                cfg.system_diagonal_path.string() + ": diagonal table needs fiber system.d on the configured grid");
        s.grid = g;
        s.d = d;
        s.p = cfg.fiber_p;
        for (const auto& v : t.values()) s.diagonal.push_back(v.real());
    }
    for (const auto& [alpha, path] : cfg.system_couplings)
        s.couplings.push_back(load_coefficient(path, alpha, cfg.system_coupling_mu, d, g, true));
    if (cfg.system_coupling_scale != 0.0) {
        const auto di = static_cast<Eigen::Index>(d);
        Matrix m(di, di);
        for (Eigen::Index i = 0; i < di; ++i)
            for (Eigen::Index k = 0; k < di; ++k)
                m(i, k) = cfg.system_coupling_scale * std::exp2(-cfg.system_sigma * static_cast<double>(i + k + 2));
        s.couplings.push_back(LowerTerm{MultiIndex::zero(g.dim()), m, {}, cfg.system_coupling_mu});
    }
    return s;
}

std::string column_label(const std::string& column) { return column + "[scaled norm ratio]"; }

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_besov_norm(Context& c) {
    const GridFunction f = input_or_random(c.cfg, 0, c.cfg.seed);
    const DyadicPartition part(f.grid(), c.cfg.profile);
    const BesovParams params = c.cfg.besov();
    const auto blocks = block_norms(f, params, part);
    const double norm = combine_blocks(blocks, params.s, params.r);

    Csv csv({"points[count]", "fiber_dim[count]", "fiber_p[exponent]", "s[smoothness]", "q[exponent]",
             "r[exponent]", "profile[name]", "k_max[level]", "band_radius[1/length]", "besov_norm[norm]"});
    csv.row({std::to_string(f.point_count()), std::to_string(f.fiber_dim()), fmt_exponent(f.fiber_p()),
             fmt(params.s), fmt_exponent(params.q), fmt_exponent(params.r), std::string(to_string(c.cfg.profile)),
             std::to_string(part.k_max()), fmt(part.band_radius()), fmt(norm)});
    c.write(csv, "besov_norm.csv");

    Csv detail({"k[level]", "block_norm[weighted L_q norm]", "scaled_block_norm[2^{ks} x block norm]"});
    for (std::size_t k = 0; k < blocks.size(); ++k)
        detail.row({std::to_string(k), fmt(blocks[k]), fmt(std::pow(2.0, params.s * static_cast<double>(k)) * blocks[k])});
    c.write(detail, "besov_blocks.csv");
    c.out << "besov_norm = " << fmt(norm) << "\n";
    return kExitSuccess;
}

int cmd_check_ap(Context& c) {
    const Grid g = c.cfg.grid();
    std::vector<double> scales = c.cfg.ap_scales;
    if (scales.empty())
        for (int j = 0; j < 6; ++j) scales.push_back(g.period(0) / 4.0 * std::ldexp(1.0, -j));
    std::sort(scales.begin(), scales.end(), std::greater<>());

    Csv csv({"level[index]", "max_scale[length]", "min_scale[length]", "cubes[count]", "estimate[A_p constant]",
             "relative_change[fraction]"});
    std::vector<double> used;
    double previous = 0.0;
    for (std::size_t j = 0; j < scales.size(); ++j) {
        used.push_back(scales[j]);
        ApSample sample;
        sample.scales = used;
        sample.positions_per_scale = c.cfg.ap_positions;
        const ApReport r = ap_constant(c.cfg.weight, g, c.cfg.ap_p, sample);
        const double change = j == 0 ? 0.0 : r.estimate / previous - 1.0;
        csv.row({std::to_string(j), fmt(r.max_scale), fmt(r.min_scale), std::to_string(r.cube_count), fmt(r.estimate),
                 fmt(change)});
        previous = r.estimate;
        c.out << "level " << j << ": A_p estimate " << fmt(r.estimate) << "\n";
    }
    c.write(csv, "ap.csv");
    return kExitSuccess;
}

std::vector<Grid> refinement_sweep(const Grid& g) {
    std::vector<Grid> grids;
    for (std::size_t factor : {1, 2, 4}) {
        std::vector<std::size_t> sizes = g.sizes();
        for (auto& n : sizes) n *= factor;
        grids.emplace_back(sizes, g.periods());
    }
    return grids;
}

int cmd_multiplier_check(Context& c) {
    const Grid g = c.cfg.grid();
    const std::size_t d = c.cfg.multiplier_d;
    const Exponent p = c.cfg.fiber_p;
    const NormSpace lebesgue = LebesgueSpace{c.cfg.besov_q, c.cfg.weight};
    const NormSpace besov_space = BesovSpace{c.cfg.besov(), c.cfg.profile};
    const SymbolGrid sg{std::vector<std::size_t>(static_cast<std::size_t>(g.dim()), 256),
                        std::vector<double>(static_cast<std::size_t>(g.dim()), 0.125)};
    const auto dilations = dilation_grid();
    const auto sweep = refinement_sweep(g);

    struct Row {
        std::string kind;
        double mikhlin = 0.0, besov = 0.0, lebesgue = 0.0, besov_norm = 0.0, ratio = 0.0;
        bool bounded = true;
    };
    std::vector<Row> rows;
    std::vector<Symbol> symbols;
    for (std::size_t i = 0; i < c.cfg.multiplier_count; ++i) symbols.push_back(random_mikhlin_symbol(d, p, c.cfg.seed, i));
    if (c.cfg.multiplier_extra == "linear") symbols.push_back(linear_symbol(d, p));

    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const bool extra = i >= c.cfg.multiplier_count;
        Row r;
        r.kind = extra ? "linear" : "random_mikhlin";
        const auto growth = mikhlin_growth(symbols[i], sweep, 1);
        r.mikhlin = growth.values.front();
        r.bounded = growth.bounded;
        try {
            r.besov = besov_functional(symbols[i], p, Weight::constant(1.0), sg, dilations);
        } catch (const Error&) {
            r.besov = std::numeric_limits<double>::infinity();
        }
        r.lebesgue = empirical_operator_norm(symbols[i], g, lebesgue, c.cfg.multiplier_probes, c.cfg.seed + i);
        r.besov_norm = empirical_operator_norm(symbols[i], g, besov_space, c.cfg.multiplier_probes, c.cfg.seed + i);
        r.ratio = std::max(r.lebesgue, r.besov_norm) / std::min(r.mikhlin, r.besov);
        rows.push_back(r);
    }
    double calibration = c.cfg.multiplier_calibration;
    if (calibration == 0.0)
        for (const auto& r : rows)
            if (r.kind != "linear") calibration = std::max(calibration, r.ratio);

    Csv csv({"symbol[index]", "kind[name]", "mikhlin_constant[sup norm]", "mikhlin_bounded[bool]",
             "besov_functional[norm]", "empirical_lebesgue[operator norm]", "empirical_besov[operator norm]",
             "ratio[empirical / min bound]", "calibration[C]", "pass[bool]"});
    bool all = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        const bool pass = r.kind == "linear" ? !r.bounded : (r.bounded && r.ratio <= calibration * (1.0 + 1e-12));
        all = all && pass;
        csv.row({std::to_string(i), r.kind, fmt(r.mikhlin), r.bounded ? "true" : "false", fmt(r.besov), fmt(r.lebesgue),
                 fmt(r.besov_norm), fmt(r.ratio), fmt(calibration), pass ? "true" : "false"});
    }
    c.write(csv, "multiplier.csv");
    c.out << "calibrated constant " << fmt(calibration) << "; " << (all ? "all symbols consistent" : "violations found")
          << "\n";
    return kExitSuccess;
}

int cmd_embed_check(Context& c) {
    const Grid g = c.cfg.grid();
    const PositiveOperator op = build_operator(c.cfg);
    const auto n = static_cast<std::size_t>(g.dim());
    require(c.cfg.embed_l.size() == n, ErrorCode::DimensionMismatch, "embed.l needs one order per grid axis");
    std::vector<double> r = c.cfg.embed_r;
    if (r.size() == 1 && n > 1) r.assign(n, r.front());
    require(r.size() == n, ErrorCode::DimensionMismatch, "embed.r needs one value per grid axis");
    const DyadicPartition part(g, c.cfg.profile);
    const BesovParams params = c.cfg.besov();

    Csv csv({"row[lattice or summary]", "mu[exponent]", "t[axis scale]", "h[scale]", "symbol_sup[operator norm]",
             "ratio_max[LHS / RHS at optimal h]", "multiplicative_max[LHS / (Y^(1-mu) B^mu)]"});
    const SymbolLattice defaults;
    for (double mu : c.cfg.embed_mu) {
        EmbeddingSpec spec{c.cfg.embed_l, MultiIndex(c.cfg.embed_alpha), r, mu, std::vector<double>(n, c.cfg.embed_t)};
        double sup = 0.0;
        for (double t : defaults.t_values) {
            for (double h : defaults.h_values) {
                SymbolLattice one;
                one.t_values = {t * c.cfg.embed_t};
                one.h_values = {h};
                const double v = lemma_symbol_sup(op, spec, g, one);
                sup = std::max(sup, v);
                csv.row({"lattice", fmt(mu), fmt(t * c.cfg.embed_t), fmt(h), fmt(v), "nan", "nan"});
            }
        }
        double ratio = 0.0, mult = 0.0;
        for (std::size_t i = 0; i < c.cfg.embed_count; ++i) {
            const GridFunction u = random_band_limited(g, op.dim(), c.cfg.fiber_p, part.band_radius(), c.cfg.seed, i);
            ratio = std::max(ratio, embedding_estimate_optimal(u, op, spec, params, part).ratio);
            mult = std::max(mult, multiplicative_estimate_check(u, op, spec, params, part).ratio);
        }
        csv.row({"summary", fmt(mu), fmt(c.cfg.embed_t), "nan", fmt(sup), fmt(ratio), fmt(mult)});
        c.out << "mu = " << fmt(mu) << ": symbol sup " << fmt(sup) << ", fitted ratio " << fmt(ratio) << "\n";
    }
    c.write(csv, "embed.csv");
    return kExitSuccess;
}

std::vector<std::string> report_header(const std::vector<MultiIndex>& alphas, const std::string& unit) {
    std::vector<std::string> h;
    for (const auto& a : alphas) h.push_back("D^(" + format_alpha(a) + ")[" + unit + "]");
    return h;
}

int cmd_solve_elliptic(Context& c) {
    const std::optional<GridFunction> given =
        c.cfg.input ? std::optional<GridFunction>(read_grid_function(*c.cfg.input)) : std::nullopt;
    const Grid g = given ? given->grid() : c.cfg.grid();
    const EllipticProblem problem = build_problem(c.cfg, g);
    const GridFunction f = input_or_random(c.cfg, problem.op.dim(), c.cfg.seed);
    const Solution s = problem.lower.empty() ? solve_principal(problem, f) : solve_full(problem, f, neumann(c.cfg));
    write_grid_function(s.u, c.path("solution.bsgf"));

    std::vector<std::string> header{"residual[relative l2]", "iterations[count]", "contraction[q]",
                                    "solution_norm[B norm]", "forcing_norm[B norm]", "operator_norm[B norm of Au]"};
    for (auto& h : report_header(s.report.top_alphas, "B norm")) header.push_back(h);
    header.push_back("coercive_ratio[sum / forcing]");
    Csv csv(header);
    std::vector<std::string> row{fmt(s.report.residual),      std::to_string(s.report.iterations),
                                 fmt(s.report.contraction),   fmt(s.report.solution_norm),
                                 fmt(s.report.forcing_norm),  fmt(s.report.operator_norm)};
    for (double v : s.report.derivative_norms) row.push_back(fmt(v));
    row.push_back(fmt(s.report.coercive_ratio));
    csv.row(row);
    c.write(csv, "solve_report.csv");

    if (!s.report.iterate_distances.empty()) {
        Csv it({"iteration[index]", "distance[B norm of update]"});
        for (std::size_t i = 0; i < s.report.iterate_distances.size(); ++i)
            it.row({std::to_string(i + 1), fmt(s.report.iterate_distances[i])});
        c.write(it, "neumann_history.csv");
    }
    c.out << "residual " << fmt(s.report.residual) << ", coercive ratio " << fmt(s.report.coercive_ratio) << "\n";
    return kExitSuccess;
}

void write_resolvent(Context& c, const ResolventTable& t, const std::string& name) {
    std::vector<std::string> header{"lambda_re[spectral parameter]", "lambda_im[spectral parameter]"};
    for (const auto& col : t.columns) header.push_back(column_label(col));
    Csv csv(header);
    for (std::size_t i = 0; i < t.lambdas.size(); ++i) {
        std::vector<std::string> row{fmt(t.lambdas[i].real()), fmt(t.lambdas[i].imag())};
        for (double v : t.values[i]) row.push_back(fmt(v));
        csv.row(row);
    }
    c.write(csv, name + ".csv");
    Csv var({"column[name]", "variation[max / min over lambda]"});
    for (std::size_t k = 0; k < t.columns.size(); ++k) var.row({t.columns[k], fmt(t.column_variation(k))});
    c.write(var, name + "_variation.csv");
    c.out << "max column variation " << fmt(t.max_column_variation()) << "\n";
}

int cmd_sweep_resolvent(Context& c) {
    const Grid g = c.cfg.grid();
    const EllipticProblem problem = build_problem(c.cfg, g);
    const auto lambdas = sweep_lambdas(c.cfg);
    write_resolvent(c, resolvent_sweep(problem, lambdas, g, resolvent_options(c.cfg)), "resolvent");
    return kExitSuccess;
}

std::vector<GridFunction> parabolic_forcing(const RunConfig& cfg, const Grid& g, std::size_t d) {
    std::vector<GridFunction> out;
    if (cfg.forcing.kind == "constant") {
        const GridFunction f = read_grid_function(cfg.forcing.path);
        require(f.grid() == g && f.fiber_dim() == d, ErrorCode::DimensionMismatch,
                cfg.forcing.path.string() + ": forcing must match the configured grid and fiber");
        out.assign(cfg.steps, f);
    } else if (cfg.forcing.kind == "dir") {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(cfg.forcing.path))
            if (e.path().extension() == ".bsgf") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        require(files.size() == cfg.steps, ErrorCode::DimensionMismatch,
                cfg.forcing.path.string() + ": found " + std::to_string(files.size()) + " step files, expected " +
                    std::to_string(cfg.steps));
        for (const auto& p : files) {
            out.push_back(read_grid_function(p));
            require(out.back().grid() == g && out.back().fiber_dim() == d, ErrorCode::DimensionMismatch,
                    p.string() + ": forcing must match the configured grid and fiber");
        }
    } else {
        const DyadicPartition part(g, cfg.profile);
        for (std::size_t m = 0; m < cfg.steps; ++m)
            out.push_back(random_band_limited(g, d, cfg.fiber_p, part.band_radius(), cfg.seed, m));
    }
    return out;
}

double l2_values(const GridFunction& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(s * f.grid().cell_volume());
}

void write_parabolic(Context& c, const ParabolicSolution& s, double dt, const std::string& prefix,
                     const std::vector<MultiIndex>& alphas) {
    for (std::size_t m = 0; m < s.u.size(); ++m) {
        char name[64];
        std::snprintf(name, sizeof name, "%s%04zu.bsgf", prefix.c_str(), m);
        write_grid_function(s.u[m], c.path(name));
    }
    const ParabolicReport& r = s.report;
    std::vector<std::string> header{"steps[count]", "dt[time]", "time_derivative_norm[L_q(0,T;B)]"};
    for (auto& h : report_header(alphas, "L_q(0,T;B)")) header.push_back(h);
    for (const char* h : {"operator_norm[L_q(0,T;B) of Au]", "forcing_norm[L_q(0,T;B)]", "ratio[sum / forcing]",
                          "max_symbol_angle[rad]"})
        header.push_back(h);
    Csv csv(header);
    std::vector<std::string> row{std::to_string(s.u.size() - 1), fmt(dt), fmt(r.time_derivative_norm)};
    for (double v : r.derivative_norms) row.push_back(fmt(v));
    for (double v : {r.operator_norm, r.forcing_norm, r.ratio, r.max_symbol_angle}) row.push_back(fmt(v));
    csv.row(row);
    c.write(csv, "parabolic_report.csv");
    Csv traj({"step[index]", "time[t]", "l2_norm[L_2 of u]"});
    for (std::size_t m = 0; m < s.u.size(); ++m) traj.row({std::to_string(m), fmt(dt * m), fmt(l2_values(s.u[m]))});
    c.write(traj, "parabolic_trajectory.csv");
    c.out << "maximal-regularity ratio " << fmt(r.ratio) << "\n";
}

int cmd_solve_parabolic(Context& c) {
    const Grid g = c.cfg.grid();
    PositiveOperator op = build_operator(c.cfg);
    const std::size_t d = op.dim();
    const ParabolicProblem problem{build_symbol(c.cfg, g.dim()), std::move(op), build_lower(c.cfg, d, g, false),
                                   c.cfg.t_end, c.cfg.steps, c.cfg.besov(), c.cfg.profile};
    const auto forcing = parabolic_forcing(c.cfg, g, d);
    const ParabolicSolution s = solve_cauchy(problem, forcing);
    write_parabolic(c, s, problem.dt(), "u_", multi_indices_of_order(g.dim(), problem.symbol.order()));
    return kExitSuccess;
}

int cmd_solve_system(Context& c) {
    const TruncatedSystem sys = build_system(c.cfg);
    const Comparability cmp = check_comparability(sys);
    const EllipticSymbol symbol = build_symbol(c.cfg, sys.grid.dim());
    const EllipticProblem problem = build_system_problem(sys, symbol, c.cfg.lambda, c.cfg.besov(), c.cfg.profile);
    const GridFunction f = input_or_random(c.cfg, sys.d, c.cfg.seed);
    require(f.grid() == sys.grid, ErrorCode::DimensionMismatch, "forcing grid differs from the configured grid");
    const Solution s = problem.lower.empty() ? solve_principal(problem, f) : solve_full(problem, f, neumann(c.cfg));
    write_grid_function(s.u, c.path("system_solution.bsgf"));
    const DyadicPartition part(sys.grid, c.cfg.profile);
    // x-dependent coefficients spread the solution past the partition band; report nan there.
    auto norm_or_nan = [&](const GridFunction& v) {
        try {
            return system_besov_norm(sys, v, c.cfg.besov(), part);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OutOfBand) throw;
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    Csv csv({"channels[count]", "c1[min diagonal ratio]", "c2[max diagonal ratio]", "coupling_bound[scaled sup]",
             "residual[relative l2]", "iterations[count]", "contraction[q]", "solution_norm[B norm with l_p(Q) fiber]",
             "forcing_norm[B norm with l_p(Q) fiber]", "solution_out_of_band[energy fraction]",
             "coercive_ratio[sum / forcing]"});
    csv.row({std::to_string(sys.d), fmt(cmp.c1), fmt(cmp.c2), fmt(coupling_bound(sys, symbol.order())),
             fmt(s.report.residual), std::to_string(s.report.iterations), fmt(s.report.contraction),
             fmt(norm_or_nan(s.u)), fmt(norm_or_nan(f)), fmt(out_of_band_fraction(s.u, part)),
             fmt(s.report.coercive_ratio)});
    c.write(csv, "system_report.csv");
    c.out << "residual " << fmt(s.report.residual) << "\n";
    return kExitSuccess;
}

int cmd_sweep_system(Context& c) {
    const TruncatedSystem sys = build_system(c.cfg);
    const auto lambdas = sweep_lambdas(c.cfg);
    write_resolvent(c,
                    system_resolvent_sweep(sys, build_symbol(c.cfg, sys.grid.dim()), lambdas, c.cfg.besov(),
                                           resolvent_options(c.cfg)),
                    "system_resolvent");
    return kExitSuccess;
}

int cmd_acceptance(Context& c) {
    AcceptanceOptions options;
    if (c.inv.seed) options.seed = *c.inv.seed;
    options.criteria = c.inv.criteria;
    Csv csv({"criterion[id]", "title[name]", "passed[bool]", "seconds[wall time]"});
    bool all = true;
    run_acceptance(options, [&](const CriterionResult& r) {
        c.out << (r.passed ? "PASS" : "FAIL") << " " << r.id << " " << r.title << " (" << fmt(r.seconds) << " s)\n";
        for (const auto& line : r.details) c.out << "    " << line << "\n";
        c.out.flush();
        all = all && r.passed;
        csv.row({std::to_string(r.id), r.title, r.passed ? "true" : "false", fmt(r.seconds)});
    });
    c.write(csv, "acceptance.csv");
    return all ? kExitSuccess : kExitNumeric;
}

void write_manifest(Context& c, double seconds) {
    std::ofstream m(c.inv.out_dir / "manifest.txt", std::ios::binary);
    if (!m) fail(ErrorCode::Io, "cannot write manifest in " + c.inv.out_dir.string());
    m << "besovkit " << kVersion << "\n";
    m << "subcommand = " << c.inv.subcommand << "\n";
    m << "seed = " << c.cfg.seed << "\n";
    m << "threads = " << max_threads() << "\n";
    m << "eigen = " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION << "\n";
    m << "fft = " << fft_library_version() << "\n";
    m << "wall_time_s = " << fmt(seconds) << "\n";
    m << "config = " << (c.inv.config_path ? c.inv.config_path->string() : "<defaults>") << "\n";
    m << "artifacts = ";
    for (std::size_t i = 0; i < c.artifacts.size(); ++i) m << (i ? ", " : "") << c.artifacts[i];
    m << "\n\n[warnings]\n";
    for (const auto& w : c.cfg.warnings) m << w << "\n";
    m << "\n[effective configuration]\n" << c.cfg.echo();
}

using Handler = int (*)(Context&);

struct SubcommandInfo {
    const char* name;
    const char* help;
    Handler handler;
};

const SubcommandInfo kSubcommands[] = {
    {"besov-norm", "Besov norm of a BSGF file (or a seeded random function)", cmd_besov_norm},
    {"check-ap", "Sampled Muckenhoupt A_p constant of the configured weight", cmd_check_ap},
    {"multiplier-check", "Mikhlin, Besov-functional and empirical bounds for random symbols", cmd_multiplier_check},
    {"embed-check", "Symbol sup and embedding ratios on a (t, h, mu) lattice", cmd_embed_check},
    {"solve-elliptic", "Solve the elliptic problem and write the coercive report", cmd_solve_elliptic},
    {"sweep-resolvent", "Lambda sweep of the scaled resolvent norms", cmd_sweep_resolvent},
    {"solve-parabolic", "Exponential-integrator solve of the Cauchy problem", cmd_solve_parabolic},
    {"solve-system", "Solve a truncated infinite system", cmd_solve_system},
    {"sweep-system", "Lambda sweep for a truncated infinite system", cmd_sweep_system},
    {"acceptance", "Run the acceptance criteria; nonzero exit on any failure", cmd_acceptance},
};

int dispatch(Invocation& inv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        if (inv.config_path) {
            cfg = validate_config(load_config(*inv.config_path));
        } else {
            cfg = validate_config(parse_config_text(""));
        }
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.is_io() ? kExitIo : kExitConfig;
    }
    if (inv.seed) cfg.seed = *inv.seed;
    for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";

    const unsigned saved_threads = max_threads();
    if (inv.threads) set_max_threads(inv.threads);
    Context ctx{inv, std::move(cfg), out, {}};
    int code = kExitSuccess;
    try {
        std::filesystem::create_directories(inv.out_dir);
        const auto start = std::chrono::steady_clock::now();
        for (const auto& s : kSubcommands)
            if (inv.subcommand == s.name) code = s.handler(ctx);
        write_manifest(ctx, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        code = e.is_io() ? kExitIo : kExitNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        code = kExitIo;
    }
    if (inv.threads) set_max_threads(saved_threads);
    return code;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"besovkit: weighted Besov norms, multipliers and Fourier-spectral solvers", "besovkit"};
    app.require_subcommand(1, 1);
    Invocation inv;
    std::string config, out_dir = ".";
    std::uint64_t seed = 0;
    app.add_option("--config", config, "Configuration file (sectioned key = value)");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for every random draw");
    app.add_option("--threads", inv.threads, "Worker thread cap (0 = hardware)");
    app.add_option("--out", out_dir, "Output directory");
    for (const auto& s : kSubcommands) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();
        sub->callback([&inv, name = s.name] { inv.subcommand = name; });
        if (std::string(s.name) == "acceptance")
            sub->add_option("--criteria", inv.criteria, "Run only these criteria")->group("");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }
    if (!config.empty()) inv.config_path = config;
    if (seed_opt->count()) inv.seed = seed;
    inv.out_dir = out_dir;
    return dispatch(inv, out, err);
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_command(args, std::cout, std::cerr);
}

}  // namespace besov::tools

#include "besov/tools/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "besov/error.hpp"
#include "besov/io.hpp"

namespace besov::tools {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    return std::all_of(k.begin(), k.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    });
}

std::optional<double> parse_double(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) return std::nullopt;
    // Multiples of pi: "pi", "2pi", "0.5*pi".
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        std::string head = s.substr(0, s.size() - 2);
        if (!head.empty() && head.back() == '*') head.pop_back();
        if (head.empty()) return std::numbers::pi;
        const auto h = parse_double(head);
        if (!h) return std::nullopt;
        return *h * std::numbers::pi;
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
    const std::string s = trim(text);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno == ERANGE) return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

std::optional<Exponent> parse_exponent(std::string_view text) {
    const std::string s = trim(text);
    if (s == "inf" || s == "infinity") return Exponent::infinity();
    const auto v = parse_double(s);
    if (!v) return std::nullopt;
    return Exponent(*v);
}

std::optional<cplx> parse_complex(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() > 2) return std::nullopt;
    const auto re = parse_double(parts[0]);
    if (!re) return std::nullopt;
    double im = 0.0;
    if (parts.size() == 2) {
        const auto v = parse_double(parts[1]);
        if (!v) return std::nullopt;
        im = *v;
    }
    return cplx(*re, im);
}

std::optional<bool> parse_bool(std::string_view text) {
    const std::string s = trim(text);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    return std::nullopt;
}

// key=value options after a "kind:" prefix.
std::map<std::string, std::string> parse_options(std::string_view text) {
    std::map<std::string, std::string> out;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) {
            out[part] = "";
        } else {
            out[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
    return s;
}

std::string fmt_exponent(const Exponent& e) { return e.is_infinite() ? "inf" : fmt(e.value()); }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error([&] {
          std::string s = "invalid configuration:";
          for (const auto& m : messages) s += "\n  " + m;
          return s;
      }()),
      messages_(std::move(messages)) {}

std::optional<MultiIndex> parse_alpha(std::string_view text) {
    std::vector<int> comps;
    for (const auto& p : split(text, '_')) {
        const auto v = parse_u64(p);
        if (!v || *v > 64) return std::nullopt;
        comps.push_back(static_cast<int>(*v));
    }
    if (comps.empty() || comps.size() > 3) return std::nullopt;
    return MultiIndex(comps);
}

std::string format_alpha(const MultiIndex& alpha) {
    std::string s;
    for (int k = 0; k < alpha.dim(); ++k) s += (k ? "_" : "") + std::to_string(alpha[k]);
    return s;
}

RawConfig parse_config_text(std::string_view text, std::string source) {
    RawConfig cfg;
    cfg.source = std::move(source);
    std::vector<std::string> errors;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const std::string where = "line " + std::to_string(number);
        if (body.front() == '[') {
            if (body.back() != ']') {
                errors.push_back(where + ": unterminated section header");
                continue;
            }
            section = trim(body.substr(1, body.size() - 2));
            if (!section.empty() && !valid_key(section)) errors.push_back(where + ": bad section name '" + section + "'");
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(body.substr(0, eq));
        if (!valid_key(key)) {
            errors.push_back(where + ": bad key '" + key + "'");
            continue;
        }
        const std::string full = section.empty() ? key : section + "." + key;
        const std::string value = trim(body.substr(eq + 1));
        if (auto it = cfg.entries.find(full); it != cfg.entries.end()) {
            cfg.warnings.push_back(where + ": duplicate key '" + full + "' (first set at line " +
                                   std::to_string(it->second.line) + "); the last value wins");
        }
        cfg.entries[full] = ConfigEntry{value, number};
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

RawConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

Grid RunConfig::grid() const {
    std::vector<double> periods = grid_periods;
    if (periods.size() == 1 && grid_sizes.size() > 1) periods.assign(grid_sizes.size(), periods.front());
    return Grid(grid_sizes, periods);
}

BesovParams RunConfig::besov() const { return BesovParams{besov_s, besov_q, besov_r, weight}; }

std::string RunConfig::echo() const {
    std::ostringstream o;
    auto line = [&](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
    line("seed", std::to_string(seed));
    line("grid.sizes", join<std::size_t>(grid_sizes, [](const std::size_t& v) { return std::to_string(v); }));
    line("grid.periods", join<double>(grid_periods, [](const double& v) { return fmt(v); }));
    line("partition.profile", std::string(to_string(profile)));
    line("weight", weight_text);
    line("besov.s", fmt(besov_s));
    line("besov.q", fmt_exponent(besov_q));
    line("besov.r", fmt_exponent(besov_r));
    line("fiber.d", std::to_string(fiber_d));
    line("fiber.p", fmt_exponent(fiber_p));
    line("input", input ? input->string() : "");
    if (op.kind == "identity") line("operator", "identity:" + std::to_string(op.d));
    if (op.kind == "diag") line("operator", "diag:sigma=" + fmt(op.sigma) + ",d=" + std::to_string(op.d));
    if (op.kind == "matrix") line("operator", "matrix:" + op.path.string());
    line("operator.angle", fmt(op.angle));
    line("symbol.order", std::to_string(symbol_order));
    for (const auto& [a, c] : symbol_coeffs) line("symbol.coeff." + format_alpha(a), fmt(c.real()) + ", " + fmt(c.imag()));
    for (const auto& l : lower)
        line("lower." + format_alpha(l.alpha),
             std::string(l.field ? "field:" : "constant:") + l.path.string() + ",mu=" + fmt(l.mu));
    line("lambda", fmt(lambda.real()) + ", " + fmt(lambda.imag()));
    line("neumann.tolerance", fmt(neumann_tolerance));
    line("neumann.max_iterations", std::to_string(neumann_max_iterations));
    line("sweep.lambdas", join<double>(sweep_lambdas, [](const double& v) { return fmt(v); }));
    line("sweep.random_probes", std::to_string(sweep_random_probes));
    line("sweep.max_mode_probes", std::to_string(sweep_max_mode_probes));
    line("sweep.single_mode", sweep_single_mode ? "true" : "false");
    line("time.t_end", fmt(t_end));
    line("time.steps", std::to_string(steps));
    line("forcing", forcing.kind == "random" ? "random" : forcing.kind + ":" + forcing.path.string());
    line("ap.p", fmt(ap_p));
    line("ap.scales", join<double>(ap_scales, [](const double& v) { return fmt(v); }));
    line("ap.positions", std::to_string(ap_positions));
    line("multiplier.count", std::to_string(multiplier_count));
    line("multiplier.d", std::to_string(multiplier_d));
    line("multiplier.probes", std::to_string(multiplier_probes));
    line("multiplier.extra", multiplier_extra);
    line("multiplier.calibration", fmt(multiplier_calibration));
    line("embed.l", join<int>(embed_l, [](const int& v) { return std::to_string(v); }));
    line("embed.alpha", join<int>(embed_alpha, [](const int& v) { return std::to_string(v); }));
    line("embed.r", join<double>(embed_r, [](const double& v) { return fmt(v); }));
    line("embed.mu", join<double>(embed_mu, [](const double& v) { return fmt(v); }));
    line("embed.t", fmt(embed_t));
    line("embed.count", std::to_string(embed_count));
    line("system.d", std::to_string(system_d));
    line("system.sigma", fmt(system_sigma));
    line("system.diagonal", system_diagonal == "pow2" ? "pow2" : "table:" + system_diagonal_path.string());
    line("system.modulation", fmt(system_modulation));
    for (const auto& [a, p] : system_couplings) line("system.coupling." + format_alpha(a), "table:" + p.string());
    line("system.coupling_scale", fmt(system_coupling_scale));
    line("system.coupling_mu", fmt(system_coupling_mu));
    return o.str();
}

namespace {

struct Validator {
    const RawConfig& raw;
    RunConfig& cfg;
    std::vector<std::string> errors;

    void error(const std::string& key, const ConfigEntry& e, const std::string& what) {
        errors.push_back(raw.source + ":" + std::to_string(e.line) + ": " + key + ": " + what);
    }

    std::filesystem::path existing(const std::string& key, const ConfigEntry& e, std::string_view text) {
        std::filesystem::path p{trim(text)};
        if (p.empty()) {
            error(key, e, "empty path");
        } else if (p.is_relative() && raw.source != "<config>") {
            p = std::filesystem::path(raw.source).parent_path() / p;
        }
        if (!p.empty() && !std::filesystem::exists(p)) error(key, e, "file not found: " + p.string());
        return p;
    }

    template <class T>
    void number(const std::string& key, const ConfigEntry& e, T& out, double lo, double hi, bool integer) {
        const auto v = parse_double(e.value);
        if (!v) return error(key, e, "not a number: '" + e.value + "'");
        if (integer && std::floor(*v) != *v) return error(key, e, "expected an integer, got '" + e.value + "'");
        if (*v < lo || *v > hi) return error(key, e, "value " + e.value + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
        out = static_cast<T>(*v);
    }

    void exponent(const std::string& key, const ConfigEntry& e, Exponent& out) {
        const auto v = parse_exponent(e.value);
        if (!v) return error(key, e, "not an exponent: '" + e.value + "' (number or inf)");
        if (!v->is_infinite() && v->value() < 1.0)
            return error(key, e, "exponent " + e.value + " must be >= 1 (or inf)");
        out = *v;
    }

    template <class T>
    void list(const std::string& key, const ConfigEntry& e, std::vector<T>& out, double lo, double hi, bool integer) {
        std::vector<T> values;
        for (const auto& part : split(e.value, ',')) {
            const auto v = parse_double(part);
            if (!v) return error(key, e, "not a number: '" + part + "'");
            if (integer && std::floor(*v) != *v) return error(key, e, "expected integers, got '" + part + "'");
            if (*v < lo || *v > hi) return error(key, e, "value " + part + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
            values.push_back(static_cast<T>(*v));
        }
        out = std::move(values);
    }

    void weight(const std::string& key, const ConfigEntry& e) {
        const std::string& v = e.value;
        const auto colon = v.find(':');
        const std::string kind = trim(v.substr(0, colon));
        const std::string rest = colon == std::string::npos ? "" : v.substr(colon + 1);
        cfg.weight_text = v;
        if (kind == "constant") {
            const auto c = rest.empty() ? std::optional<double>(1.0) : parse_double(rest);
            if (!c || *c <= 0) return error(key, e, "constant weight needs a positive value");
            cfg.weight = Weight::constant(*c);
        } else if (kind == "power") {
            const auto opts = parse_options(rest);
            double beta = 0.0, eps = 0.0;
            std::vector<double> center;
            for (const auto& [k, val] : opts) {
                const auto x = parse_double(val);
                if (!x) return error(key, e, "bad number for " + k + ": '" + val + "'");
                if (k == "beta") beta = *x;
                else if (k == "eps") eps = *x;
                else if (k == "center") center = {*x};
                else return error(key, e, "unknown power-weight option '" + k + "'");
            }
            if (!opts.count("beta")) return error(key, e, "power weight needs beta=<value>");
            if (eps < 0) return error(key, e, "eps must be >= 0");
            cfg.weight = Weight::power({beta}, eps, center);
        } else if (kind == "table") {
            const auto p = existing(key, e, rest);
            if (!std::filesystem::exists(p)) return;
            const GridFunction t = read_grid_function(p);
            if (t.fiber_dim() != 1) return error(key, e, "weight table must have fiber dimension 1");
            std::vector<double> values;
            for (const auto& c : t.values()) values.push_back(c.real());
            if (std::any_of(values.begin(), values.end(), [](double x) { return !(x > 0.0) || !std::isfinite(x); }))
                return error(key, e, "weight table entries must be positive and finite");
            cfg.weight = Weight::table(t.grid(), std::move(values));
        } else {
            error(key, e, "expected constant:<v>, power:beta=<b>,eps=<e> or table:<path>");
        }
    }

    void op(const std::string& key, const ConfigEntry& e) {
        const auto colon = e.value.find(':');
        const std::string kind = trim(e.value.substr(0, colon));
        const std::string rest = colon == std::string::npos ? "" : e.value.substr(colon + 1);
        if (kind == "identity") {
            const auto d = parse_u64(rest.empty() ? "1" : rest);
            if (!d || *d == 0 || *d > 64) return error(key, e, "identity:<d> needs 1 <= d <= 64");
            cfg.op.kind = kind;
            cfg.op.d = *d;
        } else if (kind == "diag") {
            const auto opts = parse_options(rest);
            cfg.op.kind = kind;
            for (const auto& [k, val] : opts) {
                if (k == "sigma") {
                    const auto s = parse_double(val);
                    if (!s) return error(key, e, "bad sigma '" + val + "'");
                    cfg.op.sigma = *s;
                } else if (k == "d") {
                    const auto d = parse_u64(val);
                    if (!d || *d == 0 || *d > 64) return error(key, e, "d must be 1..64");
                    cfg.op.d = *d;
                } else {
                    return error(key, e, "unknown diag option '" + k + "'");
                }
            }
        } else if (kind == "matrix") {
            cfg.op.kind = kind;
            cfg.op.path = existing(key, e, rest);
        } else {
            error(key, e, "expected identity:<d>, diag:sigma=<s>,d=<d> or matrix:<path>");
        }
    }

    void lower(const std::string& key, const ConfigEntry& e, const MultiIndex& alpha) {
        LowerSpec spec;
        spec.alpha = alpha;
        std::string v = e.value;
        const auto mu_pos = v.find(",mu=");
        if (mu_pos != std::string::npos) {
            const auto mu = parse_double(v.substr(mu_pos + 4));
            if (!mu || *mu < 0 || *mu > 1) return error(key, e, "mu must be a number in [0, 1]");
            spec.mu = *mu;
            v = v.substr(0, mu_pos);
        }
        const auto colon = v.find(':');
        const std::string kind = trim(v.substr(0, colon));
        if (colon == std::string::npos || (kind != "constant" && kind != "field"))
            return error(key, e, "expected constant:<path> or field:<path>, optionally followed by ,mu=<value>");
        spec.field = kind == "field";
        spec.path = existing(key, e, v.substr(colon + 1));
        cfg.lower.push_back(spec);
    }

    void run() {
        using Handler = std::function<void(const std::string&, const ConfigEntry&)>;
        const double big = 1e300;
        const std::map<std::string, Handler> fixed{
            {"seed", [&](auto& k, auto& e) {
                 const auto v = parse_u64(e.value);
                 if (!v) return error(k, e, "seed must be an unsigned 64-bit integer");
                 cfg.seed = *v;
             }},
            {"grid.sizes", [&](auto& k, auto& e) {
                 list(k, e, cfg.grid_sizes, 8, 1 << 16, true);
                 for (auto n : cfg.grid_sizes)
                     if (n & (n - 1)) return error(k, e, "grid sizes must be powers of two");
                 if (cfg.grid_sizes.size() > 3) error(k, e, "at most three axes");
             }},
            {"grid.periods", [&](auto& k, auto& e) { list(k, e, cfg.grid_periods, 1e-9, big, false); }},
            {"partition.profile", [&](auto& k, auto& e) {
                 if (e.value == "cos2") cfg.profile = Profile::Cos2;
                 else if (e.value == "polynomial") cfg.profile = Profile::Polynomial;
                 else error(k, e, "expected cos2 or polynomial");
             }},
            {"weight", [&](auto& k, auto& e) { weight(k, e); }},
            {"besov.s", [&](auto& k, auto& e) { number(k, e, cfg.besov_s, -64, 64, false); }},
            {"besov.q", [&](auto& k, auto& e) { exponent(k, e, cfg.besov_q); }},
            {"besov.r", [&](auto& k, auto& e) { exponent(k, e, cfg.besov_r); }},
            {"fiber.d", [&](auto& k, auto& e) { number(k, e, cfg.fiber_d, 1, 64, true); }},
            {"fiber.p", [&](auto& k, auto& e) { exponent(k, e, cfg.fiber_p); }},
            {"input", [&](auto& k, auto& e) { cfg.input = existing(k, e, e.value); }},
            {"operator", [&](auto& k, auto& e) { op(k, e); }},
            {"operator.angle", [&](auto& k, auto& e) { number(k, e, cfg.op.angle, 0, std::numbers::pi, false); }},
            {"symbol.order", [&](auto& k, auto& e) {
                 number(k, e, cfg.symbol_order, 2, 16, true);
                 if (cfg.symbol_order % 2) error(k, e, "order must be even");
             }},
            {"lambda", [&](auto& k, auto& e) {
                 const auto v = parse_complex(e.value);
                 if (!v) return error(k, e, "expected re or re,im");
                 cfg.lambda = *v;
             }},
            {"neumann.tolerance", [&](auto& k, auto& e) { number(k, e, cfg.neumann_tolerance, 1e-300, 1, false); }},
            {"neumann.max_iterations", [&](auto& k, auto& e) { number(k, e, cfg.neumann_max_iterations, 1, 1e6, true); }},
            {"sweep.lambdas", [&](auto& k, auto& e) { list(k, e, cfg.sweep_lambdas, 1e-12, big, false); }},
            {"sweep.random_probes", [&](auto& k, auto& e) { number(k, e, cfg.sweep_random_probes, 0, 1e6, true); }},
            {"sweep.max_mode_probes", [&](auto& k, auto& e) { number(k, e, cfg.sweep_max_mode_probes, 0, 1e9, true); }},
            {"sweep.single_mode", [&](auto& k, auto& e) {
                 const auto v = parse_bool(e.value);
                 if (!v) return error(k, e, "expected true or false");
                 cfg.sweep_single_mode = *v;
             }},
            {"time.t_end", [&](auto& k, auto& e) { number(k, e, cfg.t_end, 1e-12, big, false); }},
            {"time.steps", [&](auto& k, auto& e) { number(k, e, cfg.steps, 1, 1e6, true); }},
            {"forcing", [&](auto& k, auto& e) {
                 if (e.value == "random") {
                     cfg.forcing.kind = "random";
                     return;
                 }
                 const auto colon = e.value.find(':');
                 const std::string kind = trim(e.value.substr(0, colon));
                 if (colon == std::string::npos || (kind != "constant" && kind != "dir"))
                     return error(k, e, "expected random, constant:<path> or dir:<path>");
                 cfg.forcing.kind = kind;
                 cfg.forcing.path = existing(k, e, e.value.substr(colon + 1));
             }},
            {"ap.p", [&](auto& k, auto& e) {
                 number(k, e, cfg.ap_p, 1, big, false);
                 if (cfg.ap_p <= 1.0) error(k, e, "A_p needs p > 1");
             }},
            {"ap.scales", [&](auto& k, auto& e) { list(k, e, cfg.ap_scales, 1e-12, big, false); }},
            {"ap.positions", [&](auto& k, auto& e) { number(k, e, cfg.ap_positions, 1, 4096, true); }},
            {"multiplier.count", [&](auto& k, auto& e) { number(k, e, cfg.multiplier_count, 0, 10000, true); }},
            {"multiplier.d", [&](auto& k, auto& e) { number(k, e, cfg.multiplier_d, 1, 64, true); }},
            {"multiplier.probes", [&](auto& k, auto& e) { number(k, e, cfg.multiplier_probes, 0, 1e6, true); }},
            {"multiplier.extra", [&](auto& k, auto& e) {
                 if (e.value != "none" && e.value != "linear") return error(k, e, "expected none or linear");
                 cfg.multiplier_extra = e.value;
             }},
            {"multiplier.calibration", [&](auto& k, auto& e) { number(k, e, cfg.multiplier_calibration, 0, big, false); }},
            {"embed.l", [&](auto& k, auto& e) { list(k, e, cfg.embed_l, 1, 64, true); }},
            {"embed.alpha", [&](auto& k, auto& e) { list(k, e, cfg.embed_alpha, 0, 64, true); }},
            {"embed.r", [&](auto& k, auto& e) { list(k, e, cfg.embed_r, 0, 64, false); }},
            {"embed.mu", [&](auto& k, auto& e) { list(k, e, cfg.embed_mu, 0, 1, false); }},
            {"embed.t", [&](auto& k, auto& e) { number(k, e, cfg.embed_t, 1e-12, big, false); }},
            {"embed.count", [&](auto& k, auto& e) { number(k, e, cfg.embed_count, 1, 1e6, true); }},
            {"system.d", [&](auto& k, auto& e) { number(k, e, cfg.system_d, 1, 64, true); }},
            {"system.sigma", [&](auto& k, auto& e) { number(k, e, cfg.system_sigma, -16, 16, false); }},
            {"system.diagonal", [&](auto& k, auto& e) {
                 if (e.value == "pow2") {
                     cfg.system_diagonal = "pow2";
                     return;
                 }
                 if (e.value.rfind("table:", 0) != 0) return error(k, e, "expected pow2 or table:<path>");
                 cfg.system_diagonal = "table";
                 cfg.system_diagonal_path = existing(k, e, e.value.substr(6));
             }},
            {"system.modulation", [&](auto& k, auto& e) { number(k, e, cfg.system_modulation, 0, 0.99, false); }},
            {"system.coupling_scale", [&](auto& k, auto& e) { number(k, e, cfg.system_coupling_scale, 0, big, false); }},
            {"system.coupling_mu", [&](auto& k, auto& e) { number(k, e, cfg.system_coupling_mu, 0, 1, false); }},
        };

        for (const auto& [key, entry] : raw.entries) {
            if (auto it = fixed.find(key); it != fixed.end()) {
                it->second(key, entry);
                continue;
            }
            auto prefixed = [&](std::string_view prefix) -> std::optional<MultiIndex> {
                if (key.rfind(prefix, 0) != 0) return std::nullopt;
                auto a = parse_alpha(key.substr(prefix.size()));
                if (!a) error(key, entry, "bad multi-index '" + key.substr(prefix.size()) + "' (use e.g. 2_0)");
                return a ? a : std::optional<MultiIndex>(MultiIndex());
            };
            if (auto a = prefixed("symbol.coeff.")) {
                if (a->dim() == 0) continue;
                const auto c = parse_complex(entry.value);
                if (!c) {
                    error(key, entry, "expected re or re,im");
                    continue;
                }
                cfg.symbol_coeffs.emplace_back(*a, *c);
            } else if (auto b = prefixed("lower.")) {
                if (b->dim() > 0) lower(key, entry, *b);
            } else if (auto c = prefixed("system.coupling.")) {
                if (c->dim() == 0) continue;
                const std::string& v = entry.value;
                if (v.rfind("table:", 0) != 0) {
                    error(key, entry, "expected table:<path>");
                    continue;
                }
                cfg.system_couplings.emplace_back(*c, existing(key, entry, v.substr(6)));
            } else {
                error(key, entry, "unknown key");
            }
        }

        // Cross-field checks.
        const std::size_t n = cfg.grid_sizes.size();
        if (cfg.grid_periods.size() != 1 && cfg.grid_periods.size() != n)
            errors.push_back(raw.source + ": grid.periods needs one value or one per axis");
        for (const auto& [a, c] : cfg.symbol_coeffs) {
            if (static_cast<std::size_t>(a.dim()) != n || a.order() != cfg.symbol_order)
                errors.push_back(raw.source + ": symbol.coeff." + format_alpha(a) + ": needs " + std::to_string(n) +
                                 " components summing to symbol.order = " + std::to_string(cfg.symbol_order));
        }
        for (const auto& l : cfg.lower) {
            if (static_cast<std::size_t>(l.alpha.dim()) != n || l.alpha.order() >= cfg.symbol_order)
                errors.push_back(raw.source + ": lower." + format_alpha(l.alpha) + ": needs " + std::to_string(n) +
                                 " components with |alpha| < symbol.order");
        }
        if (cfg.embed_alpha.size() != cfg.embed_l.size())
            errors.push_back(raw.source + ": embed.alpha and embed.l need the same length");
        std::sort(cfg.symbol_coeffs.begin(), cfg.symbol_coeffs.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::sort(cfg.lower.begin(), cfg.lower.end(), [](const auto& x, const auto& y) { return x.alpha < y.alpha; });
    }
};

}  // namespace

RunConfig validate_config(const RawConfig& raw) {
    RunConfig cfg;
    cfg.warnings = raw.warnings;
    Validator v{raw, cfg, {}};
    v.run();
    if (!v.errors.empty()) throw ConfigError(std::move(v.errors));
    return cfg;
}

}  // namespace besov::tools

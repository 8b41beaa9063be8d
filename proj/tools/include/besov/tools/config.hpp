#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "besov/elliptic.hpp"
#include "besov/grid.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/weights.hpp"

namespace besov::tools {

/// Raw `key = value` pairs with their source line. Section headers `[name]`
/// prefix the keys that follow them with `name.`.
struct ConfigEntry {
    std::string value;
    int line = 0;
};

struct RawConfig {
    std::string source;
    std::map<std::string, ConfigEntry> entries;
    std::vector<std::string> warnings;  // e.g. duplicate keys (last one wins)
};

/// Every problem found while parsing or validating, one message per line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> messages);
    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    std::vector<std::string> messages_;
};

RawConfig parse_config_text(std::string_view text, std::string source = "<config>");
/// Throws besov::Error(Io) if the file cannot be read.
RawConfig load_config(const std::filesystem::path& path);

struct OperatorSpec {
    std::string kind = "identity";  // identity | diag | matrix
    std::size_t d = 1;
    double sigma = 1.0;
    std::filesystem::path path;
    double angle = 2.356194490192345;  // 3 pi / 4
};

struct LowerSpec {
    MultiIndex alpha;
    bool field = false;
    std::filesystem::path path;
    double mu = 0.5;
};

struct ForcingSpec {
    std::string kind = "random";  // random | constant | dir
    std::filesystem::path path;
};

/// Fully validated, defaulted configuration.
struct RunConfig {
    std::uint64_t seed = 1;
    std::vector<std::size_t> grid_sizes{64};
    std::vector<double> grid_periods{6.283185307179586};
    Profile profile = Profile::Cos2;
    std::string weight_text = "constant:1";
    Weight weight;
    double besov_s = 0.0;
    Exponent besov_q{2.0};
    Exponent besov_r{2.0};
    std::size_t fiber_d = 1;
    Exponent fiber_p{2.0};
    std::optional<std::filesystem::path> input;

    OperatorSpec op;
    int symbol_order = 2;
    std::vector<std::pair<MultiIndex, cplx>> symbol_coeffs;  // empty: separable with -1
    std::vector<LowerSpec> lower;
    cplx lambda{1.0, 0.0};
    double neumann_tolerance = 1e-12;
    int neumann_max_iterations = 200;

    std::vector<double> sweep_lambdas{1.0, 10.0, 100.0, 1000.0};
    std::size_t sweep_random_probes = 8;
    std::size_t sweep_max_mode_probes = 0;
    bool sweep_single_mode = true;

    double t_end = 1.0;
    std::size_t steps = 16;
    ForcingSpec forcing;

    double ap_p = 2.0;
    std::vector<double> ap_scales;  // empty: dyadic from L/4, six levels
    std::size_t ap_positions = 8;

    std::size_t multiplier_count = 20;
    std::size_t multiplier_d = 2;
    std::size_t multiplier_probes = 8;
    std::string multiplier_extra = "linear";  // none | linear
    double multiplier_calibration = 0.0;       // 0 fits the constant

    std::vector<int> embed_l{2};
    std::vector<int> embed_alpha{1};
    std::vector<double> embed_r{0.0};
    std::vector<double> embed_mu{0.25};
    double embed_t = 1.0;
    std::size_t embed_count = 50;

    std::size_t system_d = 8;
    double system_sigma = 1.0;
    std::string system_diagonal = "pow2";
    std::filesystem::path system_diagonal_path;
    double system_modulation = 0.0;
    std::vector<std::pair<MultiIndex, std::filesystem::path>> system_couplings;
    double system_coupling_scale = 0.0;
    double system_coupling_mu = 0.5;

    std::vector<std::string> warnings;

    Grid grid() const;
    BesovParams besov() const;
    /// Deterministic `key = value` listing of every effective setting.
    std::string echo() const;
};

/// Validates and defaults; throws ConfigError listing every problem.
RunConfig validate_config(const RawConfig& raw);

/// Multi-index written as underscore-separated components, e.g. "2_0".
std::optional<MultiIndex> parse_alpha(std::string_view text);
std::string format_alpha(const MultiIndex& alpha);

}  // namespace besov::tools

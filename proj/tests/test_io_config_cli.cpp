#include "support.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "besov/io.hpp"
#include "besov/multipliers.hpp"
#include "besov/tools/commands.hpp"
#include "besov/tools/config.hpp"

using namespace besov;
using namespace besov::test;
using namespace besov::tools;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("besovkit-unit-" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("grid functions round trip bit-exactly") {
        for (Exponent p : {Exponent(2.0), Exponent(3.0), Exponent::infinity(), Exponent(1.25)}) {
            const GridFunction f = random_band_limited(Grid({8, 16, 8}, {1.0, 2.0, 0.5}), 2, p, 1e9, 1, 0);
            const GridFunction g = decode_grid_function(encode_grid_function(f));
            CHECK(g.grid() == f.grid());
            CHECK(g.fiber_p() == p);
            CHECK(std::memcmp(g.values().data(), f.values().data(), f.values().size() * sizeof(cplx)) == 0);
        }
    }

    TEST_CASE("header layout is little-endian and versioned") {
        const GridFunction f(line(8, 1.0), 1, Exponent::infinity());
        const auto b = encode_grid_function(f);
        CHECK(std::string(b.begin(), b.begin() + 4) == "BSGF");
        CHECK(b[4] == 1);
        CHECK(b[8] == 1);   // n
        CHECK(b[12] == 8);  // N_1
        // fiber dim, p = 0/1
        CHECK(b[24] == 1);
        CHECK(b[28] == 0);
        CHECK(b[32] == 1);
        CHECK(b.size() == 36 + 8 * 16);
    }

    TEST_CASE("corrupt inputs raise distinct errors") {
        const auto b = encode_grid_function(GridFunction(line(8), 1));
        auto magic = b;
        magic[1] = 'X';
        auto ver = b;
        ver[4] = 2;
        auto cut = b;
        cut.resize(20);
        auto extra = b;
        extra.push_back(0);
        CHECK(error_of([&] { decode_grid_function(magic); }) == ErrorCode::BadMagic);
        CHECK(error_of([&] { decode_grid_function(ver); }) == ErrorCode::VersionMismatch);
        CHECK(error_of([&] { decode_grid_function(cut); }) == ErrorCode::Truncated);
        CHECK(error_of([&] { decode_grid_function(extra); }) == ErrorCode::InvalidArgument);
        CHECK(error_of([&] { read_grid_function("/nonexistent/file.bsgf"); }) == ErrorCode::Io);
    }

    TEST_CASE("matrices round trip") {
        Matrix m(2, 2);
        m << cplx(1, 2), 3.0, -4.0, cplx(0, -1);
        CHECK(decode_matrix(encode_matrix(m)) == m);
        const auto dir = scratch("matrix");
        write_matrix(m, dir / "m.bsgm");
        CHECK(read_matrix(dir / "m.bsgm") == m);
    }
}

TEST_SUITE("config") {
    TEST_CASE("minimal file yields defaults and a deterministic echo") {
        const RunConfig a = validate_config(parse_config_text(""));
        const RunConfig b = validate_config(parse_config_text("# nothing\n\n"));
        CHECK(a.echo() == b.echo());
        CHECK(a.grid_sizes == std::vector<std::size_t>{64});
        CHECK(a.echo().find("besov.q = 2") != std::string::npos);
    }

    TEST_CASE("sections, pi values and multi-indices") {
        const RunConfig c = validate_config(parse_config_text(
            "seed = 9\nlambda = 3, 1\n[grid]\nsizes = 32, 16\nperiods = 2pi, 0.5*pi\n[besov]\ns = -0.5\nq = inf\n"
            "[symbol]\norder = 2\ncoeff.2_0 = -1\ncoeff.0_2 = -2, 0.5\n"));
        CHECK(c.seed == 9);
        CHECK(c.grid_periods[1] == doctest::Approx(std::numbers::pi / 2));
        CHECK(c.besov_q.is_infinite());
        CHECK(c.symbol_coeffs.size() == 2);
        CHECK(c.lambda == cplx(3, 1));
        CHECK(c.grid().dim() == 2);
        CHECK(parse_alpha("2_0")->order() == 2);
        CHECK(format_alpha(MultiIndex({1, 0, 3})) == "1_0_3");
        CHECK_FALSE(parse_alpha("a_1"));
    }

    TEST_CASE("every error is reported with its key and line") {
        try {
            validate_config(parse_config_text("[besov]\nq = 0.5\nbogus = 1\n[grid]\nsizes = 12\n", "x.cfg"));
            FAIL("expected a ConfigError");
        } catch (const ConfigError& e) {
            REQUIRE(e.messages().size() == 3);
            const std::string all = e.what();
            CHECK(all.find("x.cfg:2: besov.q") != std::string::npos);
            CHECK(all.find("x.cfg:3: besov.bogus: unknown key") != std::string::npos);
            CHECK(all.find("x.cfg:5: grid.sizes") != std::string::npos);
        }
    }

    TEST_CASE("duplicate keys warn and the last value wins") {
        const RawConfig raw = parse_config_text("seed = 1\nseed = 2\n");
        REQUIRE(raw.warnings.size() == 1);
        CHECK(raw.warnings.front().find("line 2") != std::string::npos);
        CHECK(validate_config(raw).seed == 2);
    }

    TEST_CASE("syntax errors and missing referenced files") {
        CHECK_THROWS_AS(parse_config_text("[open\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
        CHECK_THROWS_AS(validate_config(parse_config_text("input = /no/such/file.bsgf\n")), ConfigError);
        CHECK_THROWS_AS(validate_config(parse_config_text("lower.1 = constant\n")), ConfigError);
        CHECK(error_of([] { load_config("/no/such/config.cfg"); }) == ErrorCode::Io);
    }
}

TEST_SUITE("cli") {
    TEST_CASE("usage errors exit 2 with usage text") {
        std::string err;
        CHECK(run({"frobnicate"}, nullptr, &err) == kExitUsage);
        CHECK(err.find("besov-norm") != std::string::npos);
        CHECK(run({}) == kExitUsage);
        CHECK(run({"besov-norm", "--seed", "abc"}) == kExitUsage);
    }

    TEST_CASE("besov-norm writes tagged, reproducible CSVs and a manifest") {
        const auto dir = scratch("cli-norm");
        write_grid_function(random_band_limited(line(64), 1, 2.0, 16.0, 3, 0), dir / "f.bsgf");
        put(dir / "run.cfg", "input = f.bsgf\n[besov]\ns = 1\n");
        REQUIRE(run({"besov-norm", "--config", (dir / "run.cfg").string(), "--out", (dir / "a").string()}) == 0);
        REQUIRE(run({"besov-norm", "--config", (dir / "run.cfg").string(), "--out", (dir / "b").string(), "--threads",
                     "1"}) == 0);
        const std::string a = slurp(dir / "a" / "besov_norm.csv");
        CHECK(a == slurp(dir / "b" / "besov_norm.csv"));
        const std::string header = a.substr(0, a.find('\n'));
        std::size_t cells = 1, tagged = 0;
        for (char ch : header) cells += ch == ',';
        for (std::size_t pos = 0; (pos = header.find(']', pos)) != std::string::npos; ++pos) ++tagged;
        CHECK(cells == tagged);
        const std::string manifest = slurp(dir / "a" / "manifest.txt");
        CHECK(manifest.find("seed = ") != std::string::npos);
        CHECK(manifest.find("wall_time_s") != std::string::npos);
        CHECK(manifest.find("[effective configuration]") != std::string::npos);
    }

    TEST_CASE("seed flag overrides the config and changes random inputs") {
        const auto dir = scratch("cli-seed");
        REQUIRE(run({"besov-norm", "--seed", "1", "--out", (dir / "a").string()}) == 0);
        REQUIRE(run({"besov-norm", "--seed", "2", "--out", (dir / "b").string()}) == 0);
        CHECK(slurp(dir / "a" / "besov_norm.csv") != slurp(dir / "b" / "besov_norm.csv"));
        CHECK(slurp(dir / "a" / "manifest.txt").find("seed = 1\n") != std::string::npos);
    }

    TEST_CASE("config and i/o failures map to their exit codes") {
        const auto dir = scratch("cli-codes");
        put(dir / "bad.cfg", "[besov]\nq = 0.5\n");
        std::string err;
        CHECK(run({"besov-norm", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}, nullptr, &err) ==
              kExitConfig);
        CHECK(err.find("besov.q") != std::string::npos);
        CHECK(run({"check-ap", "--config", (dir / "none.cfg").string()}) == kExitIo);
        put(dir / "corrupt.bsgf", "BSGX");
        put(dir / "c.cfg", "input = corrupt.bsgf\n");
        CHECK(run({"besov-norm", "--config", (dir / "c.cfg").string(), "--out", dir.string()}) == kExitIo);
    }

    TEST_CASE("solver subcommands produce their artifacts") {
        const auto dir = scratch("cli-solvers");
        put(dir / "e.cfg", "operator = diag:sigma=1,d=2\n[grid]\nsizes = 32\n[sweep]\nlambdas = 1, 10\n");
        REQUIRE(run({"solve-elliptic", "--config", (dir / "e.cfg").string(), "--out", (dir / "e").string()}) == 0);
        CHECK(std::filesystem::exists(dir / "e" / "solution.bsgf"));
        CHECK(read_grid_function(dir / "e" / "solution.bsgf").fiber_dim() == 2);
        REQUIRE(run({"sweep-resolvent", "--config", (dir / "e.cfg").string(), "--out", (dir / "s").string()}) == 0);
        CHECK(slurp(dir / "s" / "resolvent.csv").find("D^(2)[scaled norm ratio]") != std::string::npos);
        put(dir / "p.cfg", "operator = diag:sigma=1,d=2\n[grid]\nsizes = 16\n[time]\nsteps = 4\n");
        REQUIRE(run({"solve-parabolic", "--config", (dir / "p.cfg").string(), "--out", (dir / "p").string()}) == 0);
        CHECK(std::filesystem::exists(dir / "p" / "u_0004.bsgf"));
        CHECK(std::filesystem::exists(dir / "p" / "parabolic_report.csv"));
        put(dir / "y.cfg", "[grid]\nsizes = 32\n[system]\nd = 4\nsigma = 1\nmodulation = 0.1\ncoupling_scale = 0.2\n"
                           "[sweep]\nlambdas = 1, 10\nrandom_probes = 1\n");
        REQUIRE(run({"solve-system", "--config", (dir / "y.cfg").string(), "--out", (dir / "y").string()}) == 0);
        CHECK(std::filesystem::exists(dir / "y" / "system_solution.bsgf"));
        REQUIRE(run({"sweep-system", "--config", (dir / "y.cfg").string(), "--out", (dir / "z").string()}) == 0);
        CHECK(std::filesystem::exists(dir / "z" / "system_resolvent.csv"));
    }

    TEST_CASE("analysis subcommands produce their artifacts") {
        const auto dir = scratch("cli-analysis");
        put(dir / "a.cfg", "weight = power:beta=0.5,eps=0\n[grid]\nsizes = 128\n");
        REQUIRE(run({"check-ap", "--config", (dir / "a.cfg").string(), "--out", (dir / "a").string()}) == 0);
        CHECK(slurp(dir / "a" / "ap.csv").find("estimate[A_p constant]") != std::string::npos);
        put(dir / "m.cfg", "[multiplier]\ncount = 3\nprobes = 2\n[grid]\nsizes = 32\n");
        REQUIRE(run({"multiplier-check", "--config", (dir / "m.cfg").string(), "--out", (dir / "m").string()}) == 0);
        const std::string m = slurp(dir / "m" / "multiplier.csv");
        CHECK(m.find("linear") != std::string::npos);
        put(dir / "b.cfg", "operator = diag:sigma=1,d=3\n[embed]\ncount = 3\n[grid]\nsizes = 32\n");
        REQUIRE(run({"embed-check", "--config", (dir / "b.cfg").string(), "--out", (dir / "b").string()}) == 0);
        CHECK(slurp(dir / "b" / "embed.csv").find("summary") != std::string::npos);
    }
}

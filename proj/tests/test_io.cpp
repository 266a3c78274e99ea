#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "toa/errors.hpp"
#include "toa/io/csv.hpp"
#include "toa/io/pipeline.hpp"

using namespace toa;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("toa_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string config_error(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const CheckResult* find_check(const RunManifest& m, const std::string& name) {
    for (const auto& c : m.checks)
        if (c.name == name) return &c;
    return nullptr;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TOA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("shipped configs parse") {
    int seen = 0;
    for (const auto& e : fs::directory_iterator(fs::path(TOA_SOURCE_DIR) / "configs")) {
        if (e.path().extension() != ".json") continue;
        CAPTURE(e.path().string());
        const RunConfig c = load_config(e.path().string());
        CHECK(c.resolved.contains("grid"));
        ++seen;
    }
    CHECK(seen >= 4);
}

TEST_CASE("config defaults and resolution") {
    const RunConfig c = parse_config_text("{}");
    CHECK(c.grid.l == 6.0);
    CHECK(c.grid.N == 512);
    CHECK(c.potential.describe() == Potential::harmonic(1.0).describe());
    CHECK(c.resolved["selection"]["min_tau"] == "resolution_floor");
    CHECK(c.resolved["evolution"]["edge_policy"] == "warn");

    const RunConfig s = parse_config_text(R"({"potential": {"sinusoidal": {"v0": 2, "a": 0.5}},
        "scheme": {"deformed": {"base": "born_jordan", "alpha": 3}}, "params": {"mass": 2},
        "kernel": {"method": "quadrature"}, "spectrum": {"precision": "extended"}})");
    CHECK(s.potential(1.0) == doctest::Approx(2.0 * std::sin(0.5)));
    CHECK(s.params.mass == 2.0);
    CHECK(s.kernel.method == KernelMethod::Quadrature);
    CHECK(s.spectrum.precision == Precision::Extended);
    CHECK(s.scheme.named_root() == NamedScheme::BornJordan);

    const RunConfig g = parse_config_text(R"({"scheme": {"general": {"preset": "symmetric", "n_max": 9}}})");
    CHECK(std::holds_alternative<GeneralPolynomial>(g.scheme.variant()));
}

TEST_CASE("config errors name the field") {
    CHECK(config_error(R"({"grid": {"l": -1, "N": 64}})").find("l must be positive") != std::string::npos);
    CHECK(config_error(R"({"grid": {"N": 63}})").find("N must be even") != std::string::npos);
    CHECK(config_error(R"({"grid": {"N": 6.5}})").find("grid.N") != std::string::npos);
    CHECK(config_error(R"({"grid": {"l": 2, "M": 4}})").find("unknown key 'grid.M'") != std::string::npos);
    CHECK(config_error(R"({"colour": 1})").find("unknown key 'colour'") != std::string::npos);
    CHECK(config_error(R"({"potential": "cubic"})").find("potential") != std::string::npos);
    CHECK(config_error(R"({"scheme": "wigner"})").find("scheme") != std::string::npos);
    CHECK(config_error(R"({"params": {"hbar": 0}})").find("hbar must be positive") != std::string::npos);
    CHECK(config_error(R"({"evolution": {"dt": "small"}})").find("evolution.dt must be a number") != std::string::npos);
    CHECK(config_error(R"({"sweep": {"alphas": [1, -2]}})").find("sweep.alphas") != std::string::npos);
    CHECK(config_error(R"({"selection": {"indices": [9999]}})").find("selection.indices") != std::string::npos);
    CHECK(config_error("[1, 2]").find("must be an object") != std::string::npos);

    const std::string syntax = config_error("{\n  \"grid\": {\n    \"l\": 6,,\n  }\n}");
    CHECK(syntax.find("line 3") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("csv cells round-trip doubles") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0)})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("kernel dump of the free particle") {
    RunConfig c = parse_config_text(R"({"potential": "free", "scheme": "symmetric",
        "kernel_dump": {"points": 7, "range": 2.0}})");
    const auto dir = scratch("kernel");
    const RunManifest m = run_pipeline(c, Command::Kernel, dir.string());
    CHECK(m.exit_code == 0);
    const auto rows = read_csv(dir / "kernel.csv");
    REQUIRE(rows.size() == 1 + 49);
    CHECK(rows[0] == std::vector<std::string>{"q", "qp", "T"});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double q = std::stod(rows[r][0]), qp = std::stod(rows[r][1]), T = std::stod(rows[r][2]);
        CHECK(std::abs(T - (q + qp) / 4.0) < 1e-12);
    }
    REQUIRE(find_check(m, "free_reduction"));
    CHECK(find_check(m, "free_reduction")->pass);
    const json mj = json::parse(slurp(dir / "manifest.json"));
    CHECK(mj["status"] == "ok");
    CHECK(mj["command"] == "kernel");
}

TEST_CASE("spectrum run records pairing and parity checks") {
    RunConfig c = parse_config_text(R"({"grid": {"l": 4, "N": 64}, "selection": {"count": 2}})");
    const auto dir = scratch("spectrum");
    const RunManifest m = run_pipeline(c, Command::Spectrum, dir.string());
    REQUIRE(m.exit_code == 0);
    for (const char* name : {"hermiticity", "pm_pairing", "normalization", "definite_parity"}) {
        CAPTURE(name);
        REQUIRE(find_check(m, name));
        CHECK(find_check(m, name)->pass);
    }
    const auto ev = read_csv(dir / "eigenvalues.csv");
    REQUIRE(ev.size() == 65);
    for (std::size_t k = 1; k <= 64; ++k) {
        const double a = std::stod(ev[k][1]), b = std::stod(ev[65 - k][1]);
        CHECK(std::abs(a + b) < 1e-10 * std::abs(std::stod(ev[64][1])));
    }
    // Every numeric cell carries enough digits to round-trip.
    const bool digits = ev[64][1].find('e') != std::string::npos || ev[64][1].size() >= 17;
    CHECK(digits);
}

TEST_CASE("parity diagnostics for the sinusoidal potential") {
    RunConfig c = parse_config_text(R"({"potential": {"sinusoidal": {}}, "grid": {"l": 6, "N": 64},
        "diagnostics": {"reflected_check": true}})");
    const auto dir = scratch("parity");
    const RunManifest m = run_pipeline(c, Command::Parity, dir.string());
    REQUIRE(m.exit_code == 0);
    const json d = json::parse(slurp(dir / "diagnostics.json"));
    CHECK(d["parity"]["kernel_residual"].get<double>() > 1e-3);
    CHECK(d["parity"]["potential_even"] == false);
    REQUIRE(find_check(m, "reflected_eigenvalues"));
    CHECK(find_check(m, "reflected_eigenvalues")->pass);
    CHECK(find_check(m, "reflected_overlap")->pass);
}

TEST_CASE("failures still write a manifest") {
    // Eigenfunctions of a small box reach its edges, which the abort policy rejects.
    RunConfig c = parse_config_text(R"({"grid": {"l": 2, "N": 32}, "selection": {"count": 1},
        "evolution": {"dt": 1e-3, "edge_policy": "abort", "density_snapshots": 0}})");
    const auto dir = scratch("failure");
    const RunManifest m = run_pipeline(c, Command::Evolve, dir.string());
    CHECK(m.exit_code == 2);
    CHECK(m.status == "failed");
    const json mj = json::parse(slurp(dir / "manifest.json"));
    CHECK(mj["exit_code"] == 2);
    CHECK(mj["error"].get<std::string>().find("wraparound") != std::string::npos);

    RunConfig bad = parse_config_text(R"({"potential": {"sinusoidal": {}}, "kernel": {"method": "closed"}})");
    const RunManifest mb = run_pipeline(bad, Command::Spectrum, scratch("closed").string());
    CHECK(mb.exit_code != 0);
    CHECK(fs::exists(scratch("closed").parent_path() / "closed"));
}

TEST_CASE("repeated runs are bit-identical") {
    RunConfig c = parse_config_text(R"({"grid": {"l": 4, "N": 64}, "selection": {"count": 1},
        "evolution": {"dt": 1e-3, "density_snapshots": 5}})");
    const auto a = scratch("repeat_a"), b = scratch("repeat_b");
    REQUIRE(run_pipeline(c, Command::Evolve, a.string()).exit_code == 0);
    REQUIRE(run_pipeline(c, Command::Evolve, b.string()).exit_code == 0);
    int compared = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        CAPTURE(e.path().filename().string());
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
        ++compared;
    }
    CHECK(compared >= 4);
}

TEST_CASE("command names") {
    for (auto c : {Command::Kernel, Command::Spectrum, Command::Evolve, Command::Arrival,
                   Command::Conjugacy, Command::Parity, Command::Sweep})
        CHECK(parse_command(to_string(c)) == c);
    CHECK_FALSE(parse_command("plot"));
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch("cli");
    std::ofstream(dir / "bad.json") << R"({"grid": {"l": -1}})";
    std::ofstream(dir / "ok.json") << R"({"potential": "free", "kernel_dump": {"points": 3}})";
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("kernel --config " + (dir / "ok.json").string() + " --out " + (dir / "o").string() + " --quiet") == 0);
    CHECK(fs::exists(dir / "o" / "kernel.csv"));
    CHECK(run_cli("kernel --config " + (dir / "bad.json").string() + " --out " + (dir / "b").string()) == 1);
    CHECK(run_cli("kernel --config " + (dir / "missing.json").string()) == 1);
    CHECK(run_cli("frobnicate") != 0);
}

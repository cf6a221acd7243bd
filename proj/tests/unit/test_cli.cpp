#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/output.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

using namespace coldcloud;
using namespace coldcloud::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_doc()
{
    return json::parse(R"({
        "cloud": {"n_total": 1e6, "sigma_r": 1e-3, "sigma_v": 0.1, "g": 9.81},
        "beam": {"w0": 1e-4, "lambda": 852e-9},
        "optical": {"delta": 5.0, "s_m0": 0.2},
        "cavity": {"kappa": 5e7, "tau_c": 1e-9},
        "grids": {"t": [0.0, 0.005, 0.01], "T": [0.005, 0.01],
                  "tau": {"start": -0.002, "stop": 0.002, "count": 5},
                  "omega": {"start": 10, "stop": 1e4, "count": 4, "spacing": "log"}},
        "mc": {"n_total": 500, "realizations": 300, "seed": 7, "times": [0.0, 0.004]}
    })");
}

std::string field_of(const json& doc)
{
    try {
        (void)parse_config(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Fresh scratch directory under the build tree.
fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("coldcloud_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_doc(const fs::path& dir, const json& doc)
{
    const fs::path p = dir / "config.json";
    std::ofstream(p) << doc.dump(2);
    return p;
}

std::string run_in_process(const std::string& sub, const json& doc, const fs::path& dir, unsigned threads = 0)
{
    RunOptions opts;
    opts.out_dir = dir;
    opts.config_path = "inline.json";
    opts.threads = threads;
    std::ostringstream log;
    CHECK(run(sub, parse_config(doc), opts, log) == 0);
    return slurp(dir / (sub + ".csv"));
}

int shell(const std::string& cmd)
{
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli() { return std::string("\"") + COLDCLOUD_CLI_PATH + "\""; }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

} // namespace

TEST_CASE("config parsing")
{
    SUBCASE("a complete document")
    {
        const RunConfig cfg = parse_config(base_doc());
        CHECK(cfg.sigma_v == 0.1);
        CHECK(cfg.optical->delta == 5.0);
        CHECK(cfg.cavity->kappa() == 5e7);
        CHECK(cfg.t.size() == 3);
        CHECK(cfg.tau == std::vector<double>{-0.002, -0.001, 0.0, 0.001, 0.002});
        CHECK(cfg.mc.realizations == 300);
        CHECK(cfg.mc.seed == 7);
        CHECK(*cfg.mc.n_total == 500.0);
        CHECK(cfg.tolerances.mc_sigma == 3.0);
    }
    SUBCASE("velocity from temperature and mass")
    {
        json doc = base_doc();
        doc["cloud"].erase("sigma_v");
        doc["cloud"]["temperature"] = 10e-6;
        doc["cloud"]["mass"] = 2.2e-25;
        const double kb = 1.380649e-23;
        CHECK(std::abs(parse_config(doc).sigma_v / std::sqrt(kb * 10e-6 / 2.2e-25) - 1.0) < 1e-12);
        doc["cloud"]["sigma_v"] = 0.1;
        CHECK(field_of(doc) == "cloud.sigma_v");
        doc["cloud"].erase("sigma_v");
        doc["cloud"].erase("mass");
        CHECK(field_of(doc) == "cloud.mass");
    }
    SUBCASE("field-level errors")
    {
        json doc = base_doc();
        doc["beam"].erase("w0");
        CHECK(field_of(doc) == "beam.w0");

        doc = base_doc();
        doc.erase("beam");
        CHECK(field_of(doc) == "beam");

        doc = base_doc();
        doc["cloud"]["sigma_r"] = -1.0;
        CHECK(field_of(doc) == "cloud.sigma_r");

        doc = base_doc();
        doc["cloud"]["g"] = "9.81";
        CHECK(field_of(doc) == "cloud.g");

        doc = base_doc();
        doc["cavity"]["tau_c"] = 1.0;
        CHECK(field_of(doc) == "cavity");

        doc = base_doc();
        doc["grids"]["t"] = json::array({0.0, -1.0});
        CHECK(field_of(doc) == "grids.t");

        doc = base_doc();
        doc["mc"]["realizations"] = 1;
        CHECK(field_of(doc) == "mc.realizations");

        CHECK(field_of(json::array()) == "<root>");
    }
    SUBCASE("missing optional sections surface only when needed")
    {
        json doc = base_doc();
        doc.erase("cavity");
        const RunConfig cfg = parse_config(doc);
        CHECK_THROWS_AS((void)cfg.require_cavity(), ConfigError);
        RunOptions opts;
        opts.out_dir = scratch("needs_cavity");
        std::ostringstream log;
        CHECK_THROWS_AS((void)run("detuning-spectrum", cfg, opts, log), ConfigError);
    }
    SUBCASE("unreadable files")
    {
        CHECK_THROWS_AS((void)load_config("/nonexistent/config.json"), ConfigError);
        const fs::path dir = scratch("bad_json");
        std::ofstream(dir / "bad.json") << "{ not json";
        CHECK_THROWS_AS((void)load_config(dir / "bad.json"), ConfigError);
    }
}

TEST_CASE("grids")
{
    CHECK(parse_grid(json::array({1.0, 2.0, 4.0}), "g") == std::vector<double>{1.0, 2.0, 4.0});
    const auto lin = parse_grid(json::parse(R"({"start": 0, "stop": 1, "count": 5})"), "g");
    CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto lg = parse_grid(json::parse(R"({"start": 1, "stop": 1000, "count": 4, "spacing": "log"})"), "g");
    REQUIRE(lg.size() == 4);
    CHECK(lg.front() == 1.0);
    CHECK(lg.back() == 1000.0);
    CHECK(std::abs(lg[1] - 10.0) < 1e-12);
    CHECK_THROWS_AS((void)parse_grid(json::parse(R"({"start": 0, "stop": 1, "count": 3, "spacing": "log"})"), "g"),
                    ConfigError);
    CHECK_THROWS_AS((void)parse_grid(json::parse(R"({"start": 0, "stop": 1, "count": 3, "spacing": "cubic"})"), "g"),
                    ConfigError);
    CHECK_THROWS_AS((void)parse_grid(json::array(), "g"), ConfigError);
    CHECK_THROWS_AS((void)parse_grid(json("x"), "g"), ConfigError);
}

TEST_CASE("number and table formatting")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1e6) == "1000000");
    CHECK(format_number(-2.5e-300) == "-2.5e-300");
    CHECK(format_number(2.0 / 3.0) == "0.66666666666666663");
    // Every double survives the round trip.
    for (double v : {std::numbers::pi, 1.0 / 3.0, 6.02214076e23, 5e-324})
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);

    CsvTable table({"a", "b", "c"});
    table.add_row({1.5, 7LL, std::string("pass")});
    table.add_row({0.1, -3LL, std::string("fail")});
    CHECK(table.rows() == 2);
    CHECK(table.str() == "a,b,c\n1.5,7,pass\n0.10000000000000001,-3,fail\n");
    CHECK_THROWS_AS(table.add_row({1.0}), std::logic_error);
}

TEST_CASE("derived scales")
{
    const RunConfig cfg = parse_config(base_doc());
    const json d = derived_scales(cfg);
    CHECK(std::abs(d["tau_r_s"].get<double>() - 1e-2) < 1e-17);
    CHECK(std::abs(d["tau_w_s"].get<double>() - 5e-4) < 1e-18);
    const double tau_g = d["tau_g_s"].get<double>();
    CHECK(std::abs(tau_g / (2 * std::sqrt(2.0) * 0.1 / 9.81) - 1.0) < 1e-14);
    CHECK(std::abs(d["zeta"].get<double>() - 1e-4 / (tau_g * tau_g)) < 1e-14);
    CHECK(std::abs(d["rayleigh_length_m"].get<double>() - std::numbers::pi * 1e-8 / 852e-9) < 1e-15);

    json free = base_doc();
    free["cloud"]["g"] = 0.0;
    const json df = derived_scales(parse_config(free));
    CHECK(df["tau_g_s"].is_null());
    CHECK(df["zeta"].get<double>() == 0.0);
}

TEST_CASE("output directory resolution")
{
    ::unsetenv("COLDCLOUD_OUT_DIR");
    CHECK(resolve_out_dir(std::nullopt) == fs::path("."));
    ::setenv("COLDCLOUD_OUT_DIR", "/tmp/from_env", 1);
    CHECK(resolve_out_dir(std::nullopt) == fs::path("/tmp/from_env"));
    CHECK(resolve_out_dir(std::string("/tmp/from_flag")) == fs::path("/tmp/from_flag"));
    ::unsetenv("COLDCLOUD_OUT_DIR");
}

TEST_CASE("subcommands write their tables")
{
    const json doc = base_doc();
    const fs::path dir = scratch("tables");
    const std::map<std::string, std::string> headers{
        {"mean", "t_s,mean_number,mean_number_small_waist,mean_number_exact_geometry"},
        {"sigma", "t_s,sigma_general,sigma_small_waist,sigma_long_rayleigh,sigma_high_temperature"},
        {"variance", "t_s,mean_number,variance,variance_over_mean,variance_exact_geometry"},
        {"covariance", "T_s,tau_s,covariance_exact,covariance_quasistationary,covariance_series,series_terms,"
                       "relative_gap"},
        {"spectrum", "T_s,omega_rad_s,frequency_hz,spectrum_series,spectrum_exponential,normalized_spectrum,"
                     "series_terms"},
    };
    for (const auto& [sub, header] : headers) {
        CAPTURE(sub);
        const std::string csv = run_in_process(sub, doc, dir);
        CHECK(first_line(csv) == header);
        const json manifest = json::parse(slurp(dir / (sub + ".manifest.json")));
        CHECK(manifest["subcommand"] == sub);
        for (const char* key : {"tau_r_s", "tau_g_s", "tau_w_s", "zeta"})
            CHECK(manifest["derived"].contains(key));
        CHECK(manifest["inputs"] == doc);
        CHECK(manifest["version"] == version());
    }
    for (const char* sub : {"saturated", "detuning-spectrum"}) {
        CAPTURE(sub);
        const std::string csv = run_in_process(sub, doc, dir);
        CHECK(first_line(csv).rfind(std::string(sub) == "saturated" ? "t_s," : "T_s,omega_rad_s,frequency_hz", 0) ==
              0);
    }

    SUBCASE("frequency columns agree")
    {
        std::istringstream rows(run_in_process("spectrum", doc, dir));
        std::string line;
        std::getline(rows, line);
        int n = 0;
        while (std::getline(rows, line)) {
            std::istringstream cells(line);
            std::string T, w, f;
            std::getline(cells, T, ',');
            std::getline(cells, w, ',');
            std::getline(cells, f, ',');
            CHECK(std::abs(std::stod(f) * 2 * std::numbers::pi / std::stod(w) - 1.0) < 1e-15);
            ++n;
        }
        CHECK(n == 8);
    }
    SUBCASE("sigma rows follow the time grid")
    {
        const std::string csv = run_in_process("sigma", doc, dir);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
        CHECK(csv.find("\n0,") != std::string::npos);
        CHECK(csv.find("\n0.0050000000000000001,") != std::string::npos);
    }
}

TEST_CASE("reruns are byte-identical")
{
    const json doc = base_doc();
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    for (const char* sub : {"sigma", "covariance", "spectrum"})
        CHECK(run_in_process(sub, doc, a) == run_in_process(sub, doc, b));
    // Monte Carlo output does not depend on the worker count.
    CHECK(run_in_process("mc", doc, a, 1) == run_in_process("mc", doc, b, 3));
    CHECK(slurp(a / "mc_covariance.csv") == slurp(b / "mc_covariance.csv"));
}

TEST_CASE("seed override")
{
    const json doc = base_doc();
    const fs::path dir = scratch("seed");
    RunOptions opts;
    opts.out_dir = dir;
    opts.seed = 99;
    std::ostringstream log;
    REQUIRE(run("mc", parse_config(doc), opts, log) == 0);
    const std::string with_override = slurp(dir / "mc.csv");
    CHECK(json::parse(slurp(dir / "mc.manifest.json"))["seed"] == 99);
    CHECK(with_override != run_in_process("mc", doc, dir));
    CHECK(json::parse(slurp(dir / "mc.manifest.json"))["seed"] == 7);
}

TEST_CASE("unknown subcommand")
{
    RunOptions opts;
    opts.out_dir = scratch("unknown");
    std::ostringstream log;
    CHECK_THROWS_AS((void)run("plot", parse_config(base_doc()), opts, log), std::invalid_argument);
}

TEST_CASE("command-line binary")
{
    const fs::path dir = scratch("binary");
    const fs::path err = dir / "stderr.txt";
    const std::string quiet = " > /dev/null 2> \"" + err.string() + "\"";

    SUBCASE("missing w0 exits 2 and names the field")
    {
        json doc = base_doc();
        doc["beam"].erase("w0");
        const fs::path cfg = write_doc(dir, doc);
        CHECK(shell(cli() + " sigma --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"" + quiet) == 2);
        CHECK(slurp(err).find("beam.w0") != std::string::npos);
    }
    SUBCASE("usage errors exit 2")
    {
        const fs::path cfg = write_doc(dir, base_doc());
        CHECK(shell(cli() + " plot --config \"" + cfg.string() + "\"" + quiet) == 2);
        CHECK(shell(cli() + " sigma" + quiet) == 2);
        CHECK(shell(cli() + " sigma --config \"" + (dir / "absent.json").string() + "\"" + quiet) == 2);
    }
    SUBCASE("version")
    {
        CHECK(shell(cli() + " --version > \"" + (dir / "v.txt").string() + "\"") == 0);
        CHECK(slurp(dir / "v.txt").find(version()) != std::string::npos);
    }
    SUBCASE("sigma via flag and via environment")
    {
        const fs::path cfg = write_doc(dir, base_doc());
        const fs::path by_flag = dir / "flag", by_env = dir / "env";
        fs::create_directories(by_flag);
        fs::create_directories(by_env);
        CHECK(shell(cli() + " sigma --config \"" + cfg.string() + "\" --out \"" + by_flag.string() + "\"" + quiet) ==
              0);
        CHECK(shell("COLDCLOUD_OUT_DIR=\"" + by_env.string() + "\" " + cli() + " sigma --config \"" + cfg.string() +
                    "\"" + quiet) == 0);
        const std::string csv = slurp(by_flag / "sigma.csv");
        CHECK(first_line(csv) == "t_s,sigma_general,sigma_small_waist,sigma_long_rayleigh,sigma_high_temperature");
        CHECK(csv == slurp(by_env / "sigma.csv"));
        CHECK(fs::exists(by_env / "sigma.manifest.json"));
    }
    SUBCASE("mc seed flag")
    {
        const fs::path cfg = write_doc(dir, base_doc());
        CHECK(shell(cli() + " mc --seed 12345 --threads 2 --config \"" + cfg.string() + "\" --out \"" + dir.string() +
                    "\"" + quiet) == 0);
        CHECK(json::parse(slurp(dir / "mc.manifest.json"))["seed"] == 12345);
    }
    SUBCASE("physics errors exit 3 with module context")
    {
        json doc = base_doc();
        doc["optical"]["delta"] = 0.0;
        const fs::path cfg = write_doc(dir, doc);
        CHECK(shell(cli() + " detuning-spectrum --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"" +
                    quiet) == 3);
        CHECK(slurp(err).find("detuning") != std::string::npos);
    }
}

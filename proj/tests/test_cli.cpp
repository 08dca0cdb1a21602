#include "doctest.h"

#include <sys/wait.h>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <numbers>
#include <sstream>
#include <string>

#include "gravidec/cli.hpp"
#include "gravidec/errors.hpp"
#include "gravidec/units.hpp"
#include "json.hpp"

using namespace gravidec;
using namespace gravidec::cli;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

json base_doc(const json& state) {
    return {{"schema", "gravidec/1"},
            {"state", state},
            {"bath", {{"lambda", 0.5}, {"gamma", 2.0}, {"beta", 1.0}}},
            {"path", {{"t_f", 5.0}, {"velocity", {0.1, 0.3, -0.2}}, {"mean_position", {1.0, 0.2, 0.0}},
                      {"mean_velocity", {0.05, 0.0, 0.1}}}},
            {"particle", {{"m0", 1.3}}}};
}

json vacuum_doc() { return base_doc({{"kind", "vacuum"}, {"cutoff", 1.0}}); }

RunConfig parse(const json& doc) { return parse_config(doc.dump(2)); }

// Field path and line of the rejection.
std::pair<std::string, int> rejection(const std::string& text, bool require_problem = true) {
    try {
        (void)parse_config(text, require_problem);
    } catch (const ConfigError& e) {
        return {e.field(), e.line()};
    }
    return {"<accepted>", 0};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / ("gravidec_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    [[nodiscard]] std::filesystem::path file(const std::string& name, const std::string& text) const {
        const auto p = path / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GRAVIDEC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Comma decimal point for every C++ stream and facet lookup.
struct CommaPunct : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
    char do_thousands_sep() const override { return '.'; }
    std::string do_grouping() const override { return "\3"; }
};

}  // namespace

TEST_CASE("schema violations are rejected with field and line") {
    CHECK(rejection("{\"state\": {}}").first == "schema");
    CHECK(rejection("{\"schema\": \"gravidec/2\"}").first == "schema");

    auto doc = vacuum_doc();
    doc["bath"]["lamda"] = 1.0;
    const std::string text = doc.dump(2);
    const auto [field, line] = rejection(text);
    CHECK(field == "bath.lamda");
    const auto at = text.find("\"lamda\"");
    CHECK(line == 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n'));

    const auto malformed = rejection("{\n  \"schema\": \"gravidec/1\",\n  \"state\": {\n}");
    CHECK(malformed.first == "<document>");
    CHECK(malformed.second == 4);

    auto missing = vacuum_doc();
    missing["state"].erase("cutoff");
    CHECK(rejection(missing.dump()).first == "state.cutoff");

    CHECK(rejection(base_doc({{"kind", "thermal"}, {"cutoff", 1.0}}).dump()).first == "state.beta_g");
    CHECK(rejection(base_doc({{"kind", "vacuum"}, {"cutoff", 1.0}, {"alpha", 0.3}}).dump()).first == "state.alpha");
    CHECK(rejection(base_doc({{"kind", "photon"}, {"cutoff", 1.0}}).dump()).first == "state.kind");
    CHECK(rejection(base_doc({{"kind", "vacuum"}, {"cutoff", -1.0}}).dump()).first == "state.cutoff");

    auto short_vec = vacuum_doc();
    short_vec["path"]["velocity"] = {1.0, 2.0};
    CHECK(rejection(short_vec.dump()).first == "path.velocity");

    auto cutoff_in_white = vacuum_doc();
    cutoff_in_white["bath"]["cutoff_int"] = 10.0;
    CHECK(rejection(cutoff_in_white.dump()).first == "bath.cutoff_int");

    auto bad_order = vacuum_doc();
    bad_order["quadrature"] = {{"order", 17}};
    CHECK(rejection(bad_order.dump()).first == "quadrature.order");

    // SI mode takes temperatures, not inverse temperatures
    auto si = vacuum_doc();
    si["units"] = {{"mode", "si"}};
    CHECK(rejection(si.dump()).first == "bath.beta");

    // verify needs no physics
    CHECK(rejection("{\"schema\": \"gravidec/1\"}", false).first == "<accepted>");
    CHECK(rejection("{\"schema\": \"gravidec/1\"}", true).first == "state");
}

TEST_CASE("sweep specifications are validated") {
    const auto with_sweep = [](json sweep) {
        auto doc = vacuum_doc();
        doc["sweep"] = std::move(sweep);
        return rejection(doc.dump()).first;
    };
    CHECK(with_sweep({{"parameter", "t_f"}, {"min", 0.1}, {"max", 1.0}, {"count", 1}}) == "sweep.count");
    CHECK(with_sweep({{"parameter", "t_f"}, {"min", 1.0}, {"max", 1.0}, {"count", 3}}) == "sweep.max");
    CHECK(with_sweep({{"parameter", "gamma"}, {"min", 0.0}, {"max", 1.0}, {"count", 3}, {"scale", "log"}}) ==
          "sweep.min");
    CHECK(with_sweep({{"parameter", "alpha"}, {"min", 0.0}, {"max", 1.0}, {"count", 3}}) == "sweep.parameter");
    CHECK(with_sweep({{"parameter", "t_f"}, {"min", 0.1}, {"max", 1.0}, {"count", 3}, {"steps", 3}}) == "sweep.steps");
    CHECK(with_sweep({{"parameter", "gamma"}, {"min", 0.0}, {"max", 1.0}, {"count", 3}}) == "<accepted>");

    SweepSpec s{"t_f", 0.1, 30.0, 4, true, GammaMethod::closed, TauMethod::none};
    CHECK(s.value(0) == 0.1);
    CHECK(s.value(3) == 30.0);
    CHECK(s.value(1) == doctest::Approx(0.1 * std::pow(300.0, 1.0 / 3.0)).epsilon(1e-14));
    s.log_scale = false;
    CHECK(s.value(1) == doctest::Approx(0.1 + 29.9 / 3.0).epsilon(1e-14));
}

TEST_CASE("kernel record") {
    auto doc = vacuum_doc();
    doc["state"]["cutoff"] = 1.7;
    doc["kernel"] = {{"t", 0.0}, {"t_prime", 0.0}, {"full", true}};
    const json out = json::parse(run_kernel(parse(doc)).body);
    const double m0 = 1.3, cutoff = 1.7;
    CHECK(out["scalar"].get<double>() == doctest::Approx(m0 * m0 * std::pow(cutoff, 6) / (90.0 * kPi)).epsilon(1e-15));
    CHECK(out["tensor"]["a"] == 3.0);
    CHECK(out["tensor"]["b"] == -2.0);
    REQUIRE(out["components"].size() == 81);
    // (1,1,1,1) = 2a + b
    CHECK(out["components"][0].get<double>() == doctest::Approx(4.0 * out["scalar"].get<double>()).epsilon(1e-15));

    // squeezed with r = 0 reproduces the vacuum record
    auto sq = doc;
    sq["state"] = {{"kind", "squeezed"}, {"cutoff", 1.7}, {"r", 0.0}, {"phi", 0.4}, {"state_cutoff", 2.5}};
    for (const double t : {0.0, 0.7, 3.0}) {
        doc["kernel"]["t"] = sq["kernel"]["t"] = t;
        doc["kernel"]["t_prime"] = sq["kernel"]["t_prime"] = 0.4;
        json a = json::parse(run_kernel(parse(doc)).body);
        json b = json::parse(run_kernel(parse(sq)).body);
        a.erase("state");
        b.erase("state");
        CHECK(a == b);
    }
}

TEST_CASE("gamma command") {
    auto doc = vacuum_doc();
    doc["gamma"] = {{"method", "both"}, {"tau_dec", "closed"}};
    const json out = json::parse(run_gamma(parse(doc)).body);
    REQUIRE(out["reports"].size() == 2);
    CHECK(out["reports"][0]["method"] == "closed_form");
    CHECK(out["reports"][1]["method"] == "quadrature");
    for (const char* term : {"gamma_velocity", "gamma_grav", "gamma_mixed", "gamma_total"}) {
        CAPTURE(term);
        CHECK(out["discrepancy"][term].get<double>() <= 1e-5);
    }
    CHECK(out["tau_dec"]["status"] == "ok");
    CHECK(out["tau_dec"]["value"].get<double>() > 0.0);

    auto off = vacuum_doc();
    off["bath"]["lambda"] = 0.0;
    off["gamma"] = {{"method", "closed"}, {"tau_dec", "none"}};
    const json r = json::parse(run_gamma(parse(off)).body);
    CHECK(r["reports"][0]["gamma_mixed"] == 0.0);
    CHECK(r["reports"][0]["gamma_velocity"] == 0.0);
    CHECK_FALSE(r.contains("tau_dec"));

    // κ_sq Λ̄⁵ sinh2r beats 162κΛ⁵ cosh2r: no finite τ_dec, still exit 0
    auto sq = base_doc({{"kind", "squeezed"}, {"cutoff", 1.0}, {"r", 1.0}, {"state_cutoff", 3.0}});
    const auto res = run_gamma(parse(sq));
    CHECK(res.exit_code == kExitOk);
    const json s = json::parse(res.body);
    CHECK(s["tau_dec"]["status"] == "no_finite_tau_dec");
    CHECK(s["tau_dec"]["value"].is_null());

    auto csv = vacuum_doc();
    csv["output"] = {{"format", "csv"}};
    csv["gamma"] = {{"method", "both"}, {"tau_dec", "none"}};
    const std::string body = run_gamma(parse(csv)).body;
    CHECK(body.rfind("method,gamma_velocity,gamma_grav,gamma_mixed,gamma_total,tau_dec\n", 0) == 0);
    CHECK(std::count(body.begin(), body.end(), '\n') == 3);

    auto full = vacuum_doc();
    full["bath"]["mode"] = "full";
    full["bath"]["cutoff_int"] = 20.0;
    CHECK_THROWS_AS((void)run_gamma(parse(full)), UnsupportedModeError);
}

TEST_CASE("SI configuration goes through the restored-constant forms") {
    json doc = {{"schema", "gravidec/1"},
                {"units", {{"mode", "si"}}},
                {"state", {{"kind", "coherent"}, {"cutoff", 1e10}, {"alpha", 0.6}, {"state_cutoff", 1.1e10}}},
                {"bath", {{"lambda", 0.7}, {"gamma", 1e-78}, {"T", 300.0}}},
                {"path", {{"t_f", 1e-9}, {"velocity", {0.0, 1e-3, 3e-4}}, {"mean_position", {1e-6, 0.0, 2e-7}},
                          {"mean_velocity", {2e-4, 5e-4, 0.0}}}},
                {"particle", {{"m0", 1e-14}}}};
    const RunConfig cfg = parse(doc);
    REQUIRE(cfg.units.si.has_value());
    const auto expected = gamma_closed_si(*cfg.units.si);
    const json out = json::parse(run_gamma(cfg).body);
    CHECK(out["units"] == "si");
    CHECK(out["reports"][0]["gamma_total"].get<double>() == expected.gamma_total);
    CHECK(out["tau_dec"]["value"].get<double>() == tau_dec_closed_si(*cfg.units.si));
}

TEST_CASE("tdec command compares root and closed form") {
    auto doc = vacuum_doc();
    doc["bath"] = {{"lambda", 1.0}, {"gamma", 108.0 / kPi}, {"beta", 1.0}};
    doc["particle"]["m0"] = 1.0;
    doc["path"]["velocity"] = {0.0, 600.0, 0.0};
    doc["path"]["mean_position"] = {1.0, 0.0, 0.0};
    const json out = json::parse(run_tdec(parse(doc)).body);
    CHECK(out["closed"]["status"] == "ok");
    CHECK(out["root"]["status"] == "ok");
    CHECK(out["relative_difference"].get<double>() <= 0.01);
}

TEST_CASE("sweep output") {
    auto doc = vacuum_doc();
    doc["output"] = {{"format", "csv"}};
    doc["sweep"] = {{"parameter", "t_f"}, {"min", 0.5}, {"max", 4.0}, {"count", 2}, {"tau_dec", "closed"}};
    const auto res = run_sweep(parse(doc));
    const std::string& body = res.body;
    CHECK(body.rfind("param,gamma_velocity,gamma_grav,gamma_mixed,gamma_total,tau_dec\n", 0) == 0);
    CHECK(std::count(body.begin(), body.end(), '\n') == 3);
    CHECK(body.back() == '\n');
    CHECK(body.find("\n0.5,") != std::string::npos);
    CHECK(body.find("\n4,") != std::string::npos);
    const json meta = json::parse(res.metadata);
    CHECK(meta["parameter"] == "t_f");
    CHECK(meta["count"] == 2);

    // a τ_dec that does not exist leaves the last field empty
    auto sq = base_doc({{"kind", "squeezed"}, {"cutoff", 1.0}, {"r", 1.0}, {"state_cutoff", 3.0}});
    sq["output"] = {{"format", "csv"}};
    sq["sweep"] = {{"parameter", "t_f"}, {"min", 0.5}, {"max", 4.0}, {"count", 3}, {"tau_dec", "closed"}};
    const std::string sq_body = run_sweep(parse(sq)).body;
    std::istringstream lines(sq_body);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.back() == ',');
    }
    CHECK(rows == 3);
}

TEST_CASE("sweeps are identical for any worker count and locale") {
    auto doc = base_doc({{"kind", "thermal"}, {"cutoff", 1.0}, {"beta_g", 2.0}});
    doc["output"] = {{"format", "csv"}};
    doc["sweep"] = {{"parameter", "t_f"}, {"min", 0.1}, {"max", 30.0}, {"count", 25}, {"scale", "log"},
                    {"method", "quadrature"}};
    const RunConfig cfg = parse(doc);
    ::setenv("GRAVIDEC_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    const std::string serial = run_sweep(cfg).body;
    ::setenv("GRAVIDEC_THREADS", "4", 1);
    CHECK(worker_count() == 4);
    CHECK(run_sweep(cfg).body == serial);
    ::setenv("GRAVIDEC_THREADS", "zero", 1);
    CHECK(worker_count() >= 1);
    ::unsetenv("GRAVIDEC_THREADS");

    const std::locale previous = std::locale::global(std::locale(std::locale::classic(), new CommaPunct));
    std::setlocale(LC_ALL, "C.UTF-8");
    const std::string localized = run_sweep(cfg).body;
    std::locale::global(previous);
    CHECK(localized == serial);
    // five separators per row: no decimal commas anywhere
    std::istringstream lines(serial);
    std::string line;
    while (std::getline(lines, line)) CHECK(std::count(line.begin(), line.end(), ',') == 5);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1, 17) == "0.10000000000000001");
    CHECK(format_number(0.5, 17) == "0.5");
    CHECK(format_number(1e-300, 17) == "1e-300");
    CHECK(format_number(2.0 / 3.0, 17) == "0.66666666666666663");
    CHECK(format_number(-2.0, 6) == "-2");
    CHECK(format_number(1.0 / 3.0, 3) == "0.333");
    CHECK(format_number(NAN, 17) == "nan");
    CHECK(format_number(-INFINITY, 17) == "-inf");
}

TEST_CASE("command line contract") {
    const TempDir dir;
    const auto out = dir.path / "out.json";

    const auto bad = dir.file("bad.json", "{\"schema\": \"gravidec/1\",");
    CHECK(run_cli("kernel --config " + bad.string() + " --out " + out.string()) == kExitConfig);
    CHECK_FALSE(std::filesystem::exists(out));

    auto unknown = vacuum_doc();
    unknown["extra"] = 1;
    CHECK(run_cli("gamma --config " + dir.file("unknown.json", unknown.dump()).string() + " --out " + out.string()) ==
          kExitConfig);
    CHECK_FALSE(std::filesystem::exists(out));
    CHECK(run_cli("frobnicate") == kExitConfig);
    CHECK(run_cli("gamma") == kExitConfig);

    auto doc = vacuum_doc();
    doc["kernel"] = {{"t", 0.5}, {"t_prime", 0.25}};
    const auto cfg = dir.file("vac.json", doc.dump());
    REQUIRE(run_cli("kernel --config " + cfg.string() + " --out " + out.string() + " --format csv") == kExitOk);
    CHECK(read_file(out).rfind("t,t_prime,scalar,a,b\n0.5,0.25,", 0) == 0);

    // bracket failure in the root finder is a non-convergence exit
    auto still = vacuum_doc();
    still["path"]["velocity"] = {0.0, 0.0, 0.0};
    CHECK(run_cli("tdec --config " + dir.file("still.json", still.dump()).string()) == kExitNonConvergence);

    // seeded Monte Carlo: byte-identical reruns, sensitive to the seed
    auto mc = vacuum_doc();
    mc["gamma"] = {{"method", "closed"}, {"tau_dec", "none"}, {"monte_carlo", true}};
    mc["mc"] = {{"n_steps", 32}, {"n_samples", 500}};
    const auto mc_cfg = dir.file("mc.json", mc.dump());
    const auto a = dir.path / "a.json";
    const auto b = dir.path / "b.json";
    const auto c = dir.path / "c.json";
    REQUIRE(run_cli("gamma --config " + mc_cfg.string() + " --seed 11 --out " + a.string()) == kExitOk);
    REQUIRE(run_cli("gamma --config " + mc_cfg.string() + " --seed 11 --out " + b.string()) == kExitOk);
    REQUIRE(run_cli("gamma --config " + mc_cfg.string() + " --seed 12 --out " + c.string()) == kExitOk);
    CHECK(read_file(a) == read_file(b));
    CHECK(read_file(a) != read_file(c));
    CHECK(json::parse(read_file(a))["monte_carlo"]["seed"] == 11);

    // sweep metadata lands next to the data file
    auto sweep = vacuum_doc();
    sweep["sweep"] = {{"parameter", "gamma"}, {"min", 0.0}, {"max", 1.0}, {"count", 3}};
    const auto csv = dir.path / "sweep.csv";
    REQUIRE(run_cli("sweep --format csv --config " + dir.file("sweep.json", sweep.dump()).string() + " --out " +
                    csv.string()) == kExitOk);
    CHECK(std::filesystem::exists(dir.path / "sweep.csv.meta.json"));
}

TEST_CASE("verify report") {
    RunConfig cfg = parse_config("{\"schema\": \"gravidec/1\"}", false);
    const auto res = run_verify(cfg);
    CHECK(res.exit_code == kExitOk);
    const json out = json::parse(res.body);
    CHECK(out["passed"] == true);
    CHECK(out["checks"].size() >= 12);
    bool has_ratio = false;
    for (const auto& c : out["checks"]) {
        CAPTURE(c.dump());
        CHECK(c["status"] != "fail");
        if (c["name"] == "mixed_term_constant_factor") {
            has_ratio = true;
            CHECK(c["status"] == "info");
            CHECK(c["measured"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK(has_ratio);
    CHECK(run_verify(cfg).body == res.body);
}

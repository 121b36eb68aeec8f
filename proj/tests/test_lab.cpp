#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/lab.hpp"

using namespace bergman;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("bergman_lab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json invertibility_config() {
    return json::parse(R"({
        "name": "two-plus-z", "kind": "invertibility", "seed": 1,
        "symbol": {"kind": "polynomial", "coeffs": [[2, 0], [1, 0]]},
        "c": [1, 0], "d": [0, 0],
        "schedule": [16, 32, 64, 128],
        "grid": {"levels": 10, "angles_per_radius": 128},
        "thresholds": {"inf_positive": 1e-3, "sigma_positive": 1e-6, "drift": 0.05}
    })");
}

json theorem_config(const std::string& check) {
    json cfg = {{"name", "check-" + check},
                {"kind", "theorem_check"},
                {"seed", 42},
                {"check", check},
                {"samples", 100},
                {"dimension", 6},
                {"thresholds", {{"sigma_positive", 1e-6}}}};
    if (check == "3.2") cfg["trials"] = 100;
    return cfg;
}

std::string field_of(const json& cfg) {
    try {
        lab::parse_scenario(cfg, fs::path("out"));
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(BERGMAN_LAB_EXE) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_config(const fs::path& p, const json& cfg) {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << cfg.dump(2);
}

}  // namespace

TEST_CASE("strict parsing names the offending field") {
    auto cfg = invertibility_config();
    CHECK(field_of(cfg).empty());

    auto no_c = cfg;
    no_c.erase("c");
    CHECK(field_of(no_c) == "c");

    auto extra = cfg;
    extra["colour"] = "blue";
    CHECK(field_of(extra) == "colour");

    auto nested = cfg;
    nested["grid"]["extra"] = 1;
    CHECK(field_of(nested) == "grid.extra");

    auto bad_schedule = cfg;
    bad_schedule["schedule"] = {16, 16, 32};
    CHECK(field_of(bad_schedule) == "schedule");

    auto missing_threshold = cfg;
    missing_threshold["thresholds"].erase("drift");
    CHECK(field_of(missing_threshold) == "thresholds.drift");

    auto bad_symbol = cfg;
    bad_symbol["symbol"] = {{"kind", "rational"}, {"p", {{1, 0}}}, {"q", {{1, 0}, {-2, 0}}}};
    CHECK(field_of(bad_symbol) == "symbol");

    auto bad_kind = cfg;
    bad_kind["kind"] = "fourier";
    CHECK(field_of(bad_kind) == "kind");

    CHECK(field_of(theorem_config("3.4")) == "check");
    auto no_trials = theorem_config("3.2");
    no_trials.erase("trials");
    CHECK(field_of(no_trials) == "trials");

    CHECK_THROWS_AS(lab::parse_scenario(cfg), ValidationError);  // output_dir missing
}

TEST_CASE("symbol fragments") {
    const auto p = lab::parse_symbol(json::parse(R"({"kind": "polynomial", "coeffs": [[1, 0], [0, 3]]})"));
    CHECK(std::abs(p.eval(0.5) - Complex(1.0, 1.5)) < 1e-15);
    const auto w = lab::parse_symbol(json::parse(R"({"kind": "power", "t": 1, "base": "one_plus_z"})"));
    CHECK(std::abs(w.eval(0.5) - std::pow(Complex(1.5), Complex(0.0, 1.0))) < 1e-14);
    CHECK_THROWS_AS(lab::parse_symbol(json::parse(R"({"kind": "power", "t": 1, "base": "sideways"})")), ValidationError);
}

TEST_CASE("invertibility scenario writes report and manifest") {
    const auto dir = scratch("inv");
    const auto m = lab::run_scenario(lab::parse_scenario(invertibility_config(), dir));
    const auto report = json::parse(slurp(dir / "report.json"));
    CHECK(report["verdict"] == "invertible_likely");
    CHECK(report["seed"] == 1);
    CHECK(fs::exists(dir / "manifest.json"));

    std::size_t listed = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename() == "manifest.json") continue;
        bool found = false;
        for (const auto& f : m.files)
            if (f.path == e.path().filename().string()) {
                found = true;
                CHECK(f.sha256 == lab::sha256_file(e.path()));
                CHECK(f.bytes == fs::file_size(e.path()));
            }
        CHECK(found);
        ++listed;
    }
    CHECK(listed == m.files.size());
    const auto manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["scenario"]["name"] == "two-plus-z");
    CHECK(manifest["versions"].contains("eigen"));
    CHECK(!manifest["timings"].empty());
}

TEST_CASE("reports are byte-identical across runs") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    for (const auto& cfg : {theorem_config("3.2"), invertibility_config()}) {
        lab::run_scenario(lab::parse_scenario(cfg, a));
        lab::run_scenario(lab::parse_scenario(cfg, b));
        CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    }
}

TEST_CASE("check scenarios report pass summaries") {
    for (const std::string check : {"3.1", "3.2", "3.3"}) {
        const auto out = lab::execute(lab::parse_scenario(theorem_config(check), fs::path("unused")));
        CHECK(out.report["summary"] == "100/100 pass");
        CHECK(out.all_checks_passed);
    }
    json shift = {{"name", "shift"},       {"kind", "theorem_check"}, {"seed", 0},
                  {"check", "shift_demo"}, {"schedule", {16, 64, 256}}, {"s", {2, 0}},
                  {"thresholds", {{"drift", 0.05}}}};
    const auto out = lab::execute(lab::parse_scenario(shift, fs::path("unused")));
    CHECK(out.all_checks_passed);
}

TEST_CASE("toeplitz build and Berezin grid scenarios") {
    const auto dir = scratch("build");
    json build = json::parse(R"({
        "name": "shift", "kind": "toeplitz_build", "seed": 0,
        "symbol": {"kind": "polynomial", "coeffs": [[0, 0], [1, 0]]},
        "c": [1, 0], "d": [2, 0], "size": 6, "builder": "quadrature",
        "quadrature": {"radial_nodes": 32, "angular_nodes": 64}
    })");
    lab::run_scenario(lab::parse_scenario(build, dir));
    const auto op = operator_from_json(json::parse(slurp(dir / "matrix.json")));
    CHECK(op.size() == 6);
    CHECK(std::abs(op.matrix(0, 1) - 2.0 * std::sqrt(0.5)) < 1e-12);
    CHECK(fs::exists(dir / "matrix.csv"));

    const auto gdir = scratch("grid");
    json grid = json::parse(R"({
        "name": "grid", "kind": "berezin_grid", "seed": 0,
        "symbol": {"kind": "polynomial", "coeffs": [[2, 0], [1, 0]]},
        "c": [1, 0], "d": [1, 0], "route": "matrix", "matrix_size": 128,
        "grid": {"radii": [0, 0.25, 0.5], "angles_per_radius": 8}
    })");
    lab::run_scenario(lab::parse_scenario(grid, gdir));
    const auto csv = slurp(gdir / "grid.csv");
    CHECK(csv.rfind("re_z,im_z,re_val,im_val,route,err\n", 0) == 0);
    const auto report = json::parse(slurp(gdir / "report.json"));
    CHECK(report["max_gap_to_symbol"].get<double>() < 1e-10);
}

TEST_CASE("power symbol example") {
    lab::PowerSymbolOptions zero;
    zero.t = 0.0;
    zero.schedule = {16, 32, 64};
    bool passed = false;
    const auto r0 = lab::run_power_symbol_example(zero, passed);
    CHECK(passed);
    for (double s : r0["sigma_min"]) CHECK(std::abs(s - 1.0) < 1e-13);

    lab::PowerSymbolOptions one;
    one.schedule = {32, 64, 128, 256};
    const auto r1 = lab::run_power_symbol_example(one, passed);
    CHECK(r1["checks"]["phi_bound_holds"] == true);
    CHECK(r1["checks"]["factor_bounds_hold"] == true);
    CHECK(r1["checks"]["trend_stabilized_positive"] == true);
    CHECK(r1["inf_phi"].get<double>() >= std::exp(-std::numbers::pi));
    // (1-z)^{it} phi = (1+z)^{it}, so this ordering factors exactly on every block.
    CHECK(r1["checks"]["minus_phi_factorization_exact"] == true);
    // The other ordering leaves the nonzero symbol (1+z)^{it} phi - (1-z)^{it}, whose
    // analytic sections carry fixed leading entries, so it cannot decay with N.
    CHECK(r1["checks"]["plus_phi_residual_decreasing"] == false);
    CHECK_FALSE(passed);

    lab::PowerSymbolOptions extreme;
    extreme.t = 25.0;
    extreme.schedule = {16, 32, 64};
    CHECK_THROWS_AS(lab::run_power_symbol_example(extreme, passed), NumericalError);
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch("cli");
    const auto log = dir / "log.txt";
    fs::create_directories(dir);

    auto cfg = invertibility_config();
    cfg["schedule"] = {16, 32, 64};
    write_config(dir / "ok.json", cfg);
    CHECK(run_cli("validate " + (dir / "ok.json").string() + " --output-dir " + (dir / "out").string(), log) == 0);
    CHECK(run_cli("run " + (dir / "ok.json").string() + " --output-dir " + (dir / "out").string(), log) == 0);
    CHECK(fs::exists(dir / "out" / "report.json"));

    auto no_c = cfg;
    no_c.erase("c");
    write_config(dir / "no_c.json", no_c);
    CHECK(run_cli("run " + (dir / "no_c.json").string() + " --output-dir " + (dir / "out2").string(), log) == 2);
    CHECK(slurp(log).find("c: required field is missing") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out2"));

    std::ofstream(dir / "broken.json") << "{\"name\": ";
    CHECK(run_cli("validate " + (dir / "broken.json").string(), log) == 2);
    CHECK(run_cli("frobnicate", log) == 2);

    CHECK(run_cli("example35 --t 25 --schedule 16,32,64", log) == 3);
    CHECK(run_cli("example35 --t 0 --schedule 16,32,64 --output-dir " + (dir / "ex").string(), log) == 0);
    CHECK(json::parse(slurp(dir / "ex" / "report.json"))["all_checks_passed"] == true);
}

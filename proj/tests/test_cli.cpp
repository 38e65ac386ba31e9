#include "doctest.h"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "limdim_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    fs::path out = work_dir() / "out.txt";
    fs::path err = work_dir() / "err.txt";
    std::string cmd = env + " " + std::string(LIMDIM_BIN) + " " + args + " > " + out.string() +
                      " 2> " + err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ostringstream so, se;
    so << std::ifstream(out).rdbuf();
    se << std::ifstream(err).rdbuf();
    r.out = so.str();
    r.err = se.str();
    return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::path p = work_dir() / name;
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_CASE("stats reproduces the depth-5 doubly exponential values") {
    auto cfg = write_config("stats5.json", R"({
      "system": {"kind": "real_lattice", "n": 1},
      "sequence": {"form": "doubly_exponential", "a": 2, "b": 2, "depth": 5}
    })");
    RunResult r = run_cli("stats -c " + cfg.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["h_inf"].get<double>() == doctest::Approx(2.0));
    CHECK(j["alpha_finite"].get<double>() == doctest::Approx(0.9375));
    CHECK(j["alpha_limit"].get<double>() == doctest::Approx(1.0));
    CHECK(j["alpha_finite_exact"] == "15/16");
}

TEST_CASE("stats rejects non-monotone sequences with exit 2") {
    auto cfg = write_config("nonmono.json", R"({
      "system": {"kind": "real_lattice", "n": 1},
      "sequence": {"form": "explicit", "levels": [4, 2, 8]}
    })");
    RunResult r = run_cli("stats -c " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("beta not strictly increasing") != std::string::npos);
}

TEST_CASE("stats warns at the minimum depth") {
    auto cfg = write_config("shallow.json", R"({
      "system": {"kind": "real_lattice", "n": 1},
      "sequence": {"form": "doubly_exponential", "a": 2, "b": 2, "depth": 3}
    })");
    RunResult r = run_cli("stats -c " + cfg.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.contains("warnings"));
    CHECK(j["warnings"][0] == "shallow depth");
}

TEST_CASE("dim real and rynne modes") {
    auto real = write_config("dim_real.json", R"({
      "weights": {"taus": ["1/2", "4/5"], "deltas": ["1", "1"]},
      "alpha": 1.0, "mode": "real"
    })");
    RunResult r = run_cli("dim -c " + real.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(0.4666666666667));
    CHECK(j["argmin"] == json::array({1}));

    auto rynne = write_config("dim_rynne.json", R"({
      "weights": {"taus": ["2", "3"]}, "mode": "rynne"
    })");
    RunResult r2 = run_cli("dim -c " + rynne.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(json::parse(r2.out)["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("strict mode turns inadmissible weights into exit 2") {
    auto cfg = write_config("strict.json", R"({
      "weights": {"taus": ["9/10"], "deltas": ["1"]},
      "alpha": 0.5, "mode": "general"
    })");
    CHECK(run_cli("dim -c " + cfg.string()).exit_code == 0);
    RunResult strict = run_cli("dim --strict -c " + cfg.string());
    CHECK(strict.exit_code == 2);
    CHECK(strict.err.find("tau_1") != std::string::npos);
}

TEST_CASE("estimate exits 3 on the engineered disjoint instance") {
    auto cfg = write_config("disjoint.json", R"({
      "system": {"kind": "real_lattice", "n": 1,
                 "theta": {"default": ["0"], "per_level": {"3": ["1/4"]}}},
      "sequence": {"form": "explicit", "levels": [2, 3, 9]},
      "weights": {"taus": ["4"]},
      "estimator": {"axis": 1, "window": 2}
    })");
    RunResult r = run_cli("estimate -c " + cfg.string());
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("empty refinement") != std::string::npos);
}

TEST_CASE("the enumeration cap maps to exit 4 and honors LIMDIM_CAP") {
    auto cfg = write_config("capped.json", R"({
      "system": {"kind": "missing_digit", "n": 1, "base": 3, "digits": [0, 2]},
      "sequence": {"form": "geometric_exponents", "k1": 2, "ratio": 2, "depth": 4},
      "weights": {"taus": ["3/2"]},
      "depth": 4
    })");
    CHECK(run_cli("estimate -c " + cfg.string()).exit_code == 0);
    RunResult capped = run_cli("estimate -c " + cfg.string(), "LIMDIM_CAP=3");
    CHECK(capped.exit_code == 4);
}

TEST_CASE("identical config and seed give byte-identical output") {
    auto cfg = write_config("estimate_det.json", R"({
      "system": {"kind": "missing_digit", "n": 1, "base": 3, "digits": [0, 2]},
      "sequence": {"form": "geometric_exponents", "k1": 2, "ratio": 2, "depth": 4},
      "weights": {"taus": ["3/2"]},
      "estimator": {"axis": 1, "window": 3, "samples": 500, "seed": 9}
    })");
    RunResult a = run_cli("estimate -c " + cfg.string());
    RunResult b = run_cli("estimate -c " + cfg.string());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    auto holder = write_config("holder_det.json", R"({
      "system": {"kind": "missing_digit", "n": 1, "base": 3, "digits": [0, 2]},
      "sequence": {"form": "geometric_exponents", "k1": 2, "ratio": 2, "depth": 4},
      "weights": {"taus": ["3/2"]},
      "estimator": {"samples": 300, "seed": 11}
    })");
    RunResult h1 = run_cli("holder -c " + holder.string());
    RunResult h2 = run_cli("holder -c " + holder.string());
    REQUIRE(h1.exit_code == 0);
    CHECK(h1.out == h2.out);
    RunResult h3 = run_cli("holder --seed 12 -c " + holder.string());
    CHECK(h3.out != h1.out);
}

TEST_CASE("layers exports the line-delimited record format") {
    auto cfg = write_config("layers.json", R"({
      "system": {"kind": "missing_digit", "n": 1, "base": 3, "digits": [0, 2]},
      "sequence": {"form": "geometric_exponents", "k1": 2, "ratio": 2, "depth": 2},
      "weights": {"taus": ["3/2"]},
      "estimator": {"rule": "cover"}
    })");
    RunResult r = run_cli("layers -c " + cfg.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int level1 = 0, level2 = 0;
    while (std::getline(lines, line)) {
        if (line.rfind("1,", 0) == 0) ++level1;
        if (line.rfind("2,", 0) == 0) ++level2;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(level1 == 4);
    CHECK(level2 == 8);
    CHECK(r.out.find("word:") != std::string::npos);
    CHECK(r.out.find("3/1^-3/1") != std::string::npos);
}

TEST_CASE("estimate writes the CSV series") {
    fs::path csv = work_dir() / "series.csv";
    auto cfg = write_config("csv.json", std::string(R"({
      "system": {"kind": "missing_digit", "n": 1, "base": 3, "digits": [0, 2]},
      "sequence": {"form": "geometric_exponents", "k1": 2, "ratio": 2, "depth": 3},
      "weights": {"taus": ["3/2"]},
      "output": {"csv": ")") + csv.string() + R"("}
    })");
    REQUIRE(run_cli("estimate -c " + cfg.string()).exit_code == 0);
    std::ostringstream ss;
    ss << std::ifstream(csv).rdbuf();
    std::string text = ss.str();
    CHECK(text.find("depth,radius_base,radius_exponent,count,log_count,neg_log_radius,"
                    "local_slope") == 0);
    CHECK(text.find("\n1,3/1,-3/1,4,") != std::string::npos);
}

TEST_CASE("verify runs the axiom sweep end to end") {
    auto cfg = write_config("verify.json", R"({
      "system": {"kind": "p_adic", "n": 1, "p": 3, "truncation_depth": 12},
      "sequence": {"form": "explicit", "levels": [1, 2, 3, 4]},
      "weights": {"taus": ["3/2"]},
      "verify": {"probes": 200, "count_trials": 20}
    })");
    RunResult r = run_cli("verify -c " + cfg.string() + " --threads 2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["all_ok"] == true);
    CHECK(j["levels"].size() == 4);
    for (const auto& lvl : j["levels"]) {
        CHECK(lvl["separated"]["ok"] == true);
        CHECK(lvl["maximal"]["ok"] == true);
        CHECK(lvl["maximal"]["closed_ball"] == true);
        CHECK(lvl["count_violations"].get<long>() == 0);
    }
}

TEST_CASE("bad config paths and malformed json exit 2") {
    CHECK(run_cli("stats -c /nonexistent/x.json").exit_code == 2);
    auto broken = write_config("broken.json", "{nope");
    CHECK(run_cli("stats -c " + broken.string()).exit_code == 2);
    auto badkind = write_config("badkind.json", R"({
      "system": {"kind": "octonion"},
      "sequence": {"form": "doubly_exponential", "a": 2, "b": 2, "depth": 4}
    })");
    CHECK(run_cli("stats -c " + badkind.string()).exit_code == 2);
}

#include "fixtures.hpp"
#include "perceptsim/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <sstream>

using namespace perceptsim;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kStudy = fixtures::data_path("veras_sus.json");

}  // namespace

TEST_CASE("validate exit codes") {
    CHECK(cli({"validate", kStudy}).code == kExitOk);

    const auto dir = fixtures::scratch_dir("validate");
    fixtures::write(dir / "orphan.json", R"({"scale": {"min": 1, "max": 5},
        "items": [{"id": "a", "mean": 3, "sd": 1, "reverse": false}],
        "themes": [{"id": "T", "name": "t", "items": ["a", "zz"]}]})");
    const auto bad = cli({"validate", (dir / "orphan.json").string()});
    CHECK(bad.code == kExitFindings);
    CHECK(bad.out.find("error\t/themes/0/items/1\t") != std::string::npos);

    fixtures::write(dir / "broken.json", "{ not json");
    CHECK(cli({"validate", (dir / "broken.json").string()}).code == kExitUsage);
    CHECK(cli({"validate", (dir / "missing.json").string()}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("compose prints composites") {
    const auto r = cli({"compose", kStudy, "--format", "csv"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("theme_id,weighted_mean,weighted_sd,total_weight,item_count\n", 0) == 0);
    CHECK(r.err.find("theme T3: computed (3.6707, 0.1706) diverges") != std::string::npos);

    const auto j = nlohmann::json::parse(cli({"compose", kStudy}).out);
    CHECK(j.size() == 3);
}

TEST_CASE("run is byte-identical for identical inputs") {
    const auto a = fixtures::scratch_dir("run-a");
    const auto b = fixtures::scratch_dir("run-b");
    for (const auto& dir : {a, b}) {
        const auto r = cli({"run", kStudy, "--replicate-paper", "--seed", "9", "--no-timestamp", "--svg", "--out",
                            dir.string()});
        REQUIRE(r.code == kExitOk);
    }
    for (const char* name : {"report.json", "cohort.csv", "histogram.csv", "histogram.svg", "ols.txt"}) {
        CHECK_MESSAGE(fs::exists(a / name), name);
        CHECK_MESSAGE(fixtures::read((a / name).string()) == fixtures::read((b / name).string()), name);
    }
    const auto report = nlohmann::json::parse(fixtures::read((a / "report.json").string()));
    CHECK(report["config_echo"]["seed"] == 9);
    CHECK(report["config_echo"]["replicate_paper"] == true);
    CHECK(report["timestamp"].is_null());
    CHECK(report["simulation_parameters"][2]["mean"] == 3.71);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("run with a single respondent writes a partial report and fails numerically") {
    const auto dir = fixtures::scratch_dir("run-n1");
    const auto r = cli({"run", kStudy, "--n", "1", "--out", dir.string()});
    CHECK(r.code == kExitNumeric);
    CHECK(r.err.find("[regress]") != std::string::npos);
    const auto report = nlohmann::json::parse(fixtures::read((dir / "report.json").string()));
    CHECK(report["ols"].is_null());
    CHECK(report["cohort_summary"]["sd"] == 0.0);
    CHECK_FALSE(fs::exists(dir / "ols.txt"));
    fs::remove_all(dir);
}

TEST_CASE("settings precedence: flag over env over config over default") {
    const auto dir = fixtures::scratch_dir("config");
    fixtures::write(dir / "cfg.json", R"({"seed": 5, "n": 300, "bins": 7})");
    const std::string cfg = (dir / "cfg.json").string();
    auto seed_of = [](const Result& r) { return nlohmann::json::parse(r.out)["config_echo"]["seed"].get<int>(); };

    unsetenv("PERCEPTSIM_SEED");
    const auto from_file = cli({"run", kStudy, "--config", cfg, "--no-timestamp"});
    REQUIRE(from_file.code == kExitOk);
    const auto j = nlohmann::json::parse(from_file.out);
    CHECK(j["config_echo"]["seed"] == 5);
    CHECK(j["config_echo"]["n"] == 300);
    CHECK(j["histogram"].size() == 7);

    setenv("PERCEPTSIM_SEED", "11", 1);
    CHECK(seed_of(cli({"run", kStudy, "--config", cfg, "--no-timestamp"})) == 11);
    CHECK(seed_of(cli({"run", kStudy, "--config", cfg, "--seed", "13", "--no-timestamp"})) == 13);
    CHECK(seed_of(cli({"run", kStudy, "--n", "50", "--no-timestamp"})) == 11);
    setenv("PERCEPTSIM_SEED", "banana", 1);
    CHECK(cli({"run", kStudy, "--n", "50"}).code == kExitUsage);
    unsetenv("PERCEPTSIM_SEED");
    CHECK(seed_of(cli({"run", kStudy, "--n", "50", "--no-timestamp"})) == 42);

    fixtures::write(dir / "unknown.json", R"({"sead": 5})");
    CHECK(cli({"run", kStudy, "--config", (dir / "unknown.json").string()}).code == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("overrides and replication flags") {
    const auto r = cli({"run", kStudy, "--n", "200", "--override-theme", "T3=3.71,0.216", "--no-timestamp"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["simulation_parameters"][2]["sd"] == 0.216);
    CHECK(j["simulation_parameters"][0]["mean"].get<double>() == doctest::Approx(4.116922).epsilon(1e-6));

    CHECK(cli({"run", kStudy, "--override-theme", "T3=abc"}).code == kExitUsage);
    CHECK(cli({"run", kStudy, "--override-theme", "T9=3,0.2"}).code != kExitOk);
    CHECK(cli({"run", kStudy, "--svg"}).code == kExitUsage);
    CHECK(cli({"run", kStudy, "--n", "0"}).code != kExitOk);
}

TEST_CASE("simulate, regress and histogram chain through files") {
    const auto dir = fixtures::scratch_dir("chain");
    REQUIRE(cli({"simulate", kStudy, "--n", "400", "--out", dir.string()}).code == kExitOk);
    const std::string cohort = (dir / "cohort.csv").string();
    REQUIRE(fs::exists(cohort));

    const auto reg = cli({"regress", cohort, "--format", "text"});
    CHECK(reg.code == kExitOk);
    CHECK(reg.out.find("OLS Regression Results") != std::string::npos);
    CHECK(reg.out.find("Durbin-Watson:") != std::string::npos);

    const auto hist = cli({"histogram", cohort, "--bins", "10", "--format", "csv"});
    CHECK(hist.code == kExitOk);
    CHECK(std::count(hist.out.begin(), hist.out.end(), '\n') == 11);

    fixtures::write(dir / "bad.csv", "x,y\n1,2\n");
    CHECK(cli({"regress", (dir / "bad.csv").string()}).code == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("sus subcommand") {
    const auto r = cli({"sus", kStudy, "--mean", "4.0666"});
    CHECK(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["items_based"]["score"].get<double>() == doctest::Approx(73.85));
    CHECK(j["items_based"]["band"] == "Acceptable");
    CHECK(j["composite_linear"]["score"].get<double>() == doctest::Approx(76.665));
}

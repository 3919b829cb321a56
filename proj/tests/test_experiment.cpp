#include "scramblesim/experiment.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace scramble;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Fresh scratch directory per test run so reruns never see stale files.
fs::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    const fs::path dir =
        fs::temp_directory_path() / ("scramblesim_test_" + tag + "_" + std::to_string(rng()));
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kGoodMarkov = R"({
  "experiment": "markov-evolve",
  "seed": 11,
  "output_dir": "demo",
  "params": { "n_sites": 6, "steps": 4 },
  "sweep": { "coupling": [0.2, 0.4] }
})";

}  // namespace

TEST_CASE("the catalog lists every experiment kind with parameter help") {
    const std::vector<ExperimentInfo> catalog = experiment_catalog();
    REQUIRE(catalog.size() == 8);
    std::vector<std::string> names;
    for (const ExperimentInfo& info : catalog) {
        names.push_back(info.name);
        CHECK(!info.summary.empty());
        CHECK(!info.parameter_help.empty());
    }
    for (const char* expected :
         {"markov-evolve", "fp-integrate", "circuit-mc", "otoc", "entropy",
          "level-stats", "classical-growth", "validate"})
        CHECK(std::count(names.begin(), names.end(), expected) == 1);
}

TEST_CASE("config validation accepts a complete sweep config") {
    CHECK_NOTHROW(validate_config_text(kGoodMarkov));
}

TEST_CASE("config validation rejects structural mistakes by name") {
    auto rejects = [](const std::string& text, const std::string& fragment) {
        try {
            validate_config_text(text);
            FAIL_CHECK("accepted: " << text);
        } catch (const ConfigError& err) {
            CHECK(std::string(err.what()).find(fragment) != std::string::npos);
        }
    };

    rejects(R"({"params": {}})", "experiment");
    rejects(R"({"experiment": "nope", "params": {}})", "markov-evolve");
    rejects(R"({"experiment": "markov-evolve", "params": {"n_sites": 6, "steps": 1},
                "extra": 1})",
            "extra");
    rejects(R"({"experiment": "markov-evolve", "params": {"n_sites": 6}})", "coupling");
    rejects(R"({"experiment": "markov-evolve",
                "params": {"n_sites": 6, "steps": 1, "coupling": 0.1, "typo_key": 2}})",
            "typo_key");
    rejects(R"({"experiment": "markov-evolve",
                "params": {"n_sites": "six", "steps": 1, "coupling": 0.1}})",
            "n_sites");
    rejects(R"({"experiment": "markov-evolve", "seed": -3,
                "params": {"n_sites": 6, "steps": 1, "coupling": 0.1}})",
            "seed");
    rejects(R"({"experiment": "markov-evolve", "output_dir": "/abs/path",
                "params": {"n_sites": 6, "steps": 1, "coupling": 0.1}})",
            "output_dir");
    rejects(R"({"experiment": "fp-integrate",
                "params": {"n_sites": 50, "tau_final": 1.0, "coefficient_form": "bogus"}})",
            "truncated");
}

TEST_CASE("config validation rejects malformed sweeps") {
    auto rejects = [](const std::string& text, const std::string& fragment) {
        try {
            validate_config_text(text);
            FAIL_CHECK("accepted: " << text);
        } catch (const ConfigError& err) {
            CHECK(std::string(err.what()).find(fragment) != std::string::npos);
        }
    };

    rejects(R"({"experiment": "markov-evolve",
                "params": {"n_sites": 6, "steps": 1, "coupling": 0.1},
                "sweep": {"coupling": [0.2]}})",
            "both fixed and swept");
    rejects(R"({"experiment": "markov-evolve",
                "params": {"n_sites": 6, "steps": 1, "coupling": 0.1},
                "sweep": {"mystery": [1, 2]}})",
            "mystery");
    rejects(R"({"experiment": "markov-evolve",
                "params": {"n_sites": 6, "steps": 1}, "sweep": {"coupling": []}})",
            "nonempty");
    rejects(R"({"experiment": "otoc",
                "params": {"n_sites": 8, "probe_site": 2},
                "sweep": {"times": [[0.1], [0.2]]}})",
            "numeric");
}

TEST_CASE("a syntax error is reported with its line number") {
    const std::string broken = "{\n  \"experiment\": \"markov-evolve\",\n  oops\n}";
    try {
        validate_config_text(broken);
        FAIL_CHECK("accepted malformed JSON");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("collapse_check measures the sup-norm gap between rescaled curves") {
    CollapseCurve a{0.1, {0.0, 1.0, 2.0, 3.0}, {0.0, 0.1, 0.2, 0.3}};
    CollapseCurve b{0.2, {0.0, 1.5, 3.0}, {0.05, 0.2, 0.35}};
    // Curve b sits exactly 0.05 above curve a everywhere after interpolation.
    CHECK(collapse_check({a, b}) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(collapse_check({a, a}) == doctest::Approx(0.0));

    CHECK_THROWS(collapse_check({a}));
    CollapseCurve disjoint{0.3, {5.0, 6.0}, {0.1, 0.2}};
    CHECK_THROWS(collapse_check({a, disjoint}));
    CollapseCurve unordered{0.3, {2.0, 1.0}, {0.1, 0.2}};
    CHECK_THROWS(collapse_check({a, unordered}));
}

TEST_CASE("run_experiment executes a sweep and writes manifest plus CSVs") {
    const fs::path dir = scratch_dir("run");
    const fs::path cfg = write_config(dir, "cfg.json", kGoodMarkov);
    const fs::path root = dir / "results";

    const RunOutcome outcome = run_experiment(cfg.string(), root.string());
    CHECK(outcome.exit_code == 0);
    CHECK(outcome.message.find("2/2") != std::string::npos);
    CHECK(outcome.output_dir == (root / "demo").string());
    REQUIRE(outcome.points.size() == 2);
    CHECK(outcome.points[0].sweep_values.at("coupling") == doctest::Approx(0.2));
    CHECK(outcome.points[1].sweep_values.at("coupling") == doctest::Approx(0.4));
    CHECK(outcome.points[0].seed != outcome.points[1].seed);

    const json manifest = json::parse(slurp(root / "demo" / "manifest.json"));
    CHECK(manifest.at("experiment") == "markov-evolve");
    CHECK(manifest.at("n_points") == 2);
    CHECK(manifest.at("n_failed") == 0);
    CHECK(manifest.at("config").at("seed") == 11);
    REQUIRE(manifest.at("points").size() == 2);
    for (const json& point : manifest.at("points")) {
        CHECK(point.at("status") == "ok");
        for (const json& name : point.at("files"))
            CHECK(fs::exists(root / "demo" / name.get<std::string>()));
    }

    // steps+1 rows plus the header.
    const std::string evolution = slurp(root / "demo" / "point000_evolution.csv");
    CHECK(std::count(evolution.begin(), evolution.end(), '\n') == 6);
    CHECK(evolution.rfind("step,g2t,mean_weight,mean_weight_over_n,mean_commutator", 0) == 0);

    fs::remove_all(dir);
}

TEST_CASE("identical configs and seeds give byte-identical results") {
    const fs::path dir = scratch_dir("repro");
    const fs::path cfg = write_config(dir, "cfg.json", kGoodMarkov);

    const RunOutcome first = run_experiment(cfg.string(), (dir / "a").string());
    const RunOutcome second = run_experiment(cfg.string(), (dir / "b").string());
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);

    for (const char* name :
         {"point000_evolution.csv", "point001_evolution.csv",
          "point000_distributions.csv", "point001_distributions.csv"})
        CHECK(slurp(dir / "a" / "demo" / name) == slurp(dir / "b" / "demo" / name));

    fs::remove_all(dir);
}

TEST_CASE("missing and malformed config files exit with the config-error code") {
    const fs::path dir = scratch_dir("bad");
    CHECK(run_experiment((dir / "absent.json").string(), dir.string()).exit_code == 2);

    const fs::path bad = write_config(dir, "bad.json", "{ not json");
    CHECK(run_experiment(bad.string(), dir.string()).exit_code == 2);

    const fs::path incomplete =
        write_config(dir, "incomplete.json",
                     R"({"experiment": "markov-evolve", "params": {"n_sites": 6}})");
    CHECK(run_experiment(incomplete.string(), dir.string()).exit_code == 2);

    fs::remove_all(dir);
}

TEST_CASE("a point that throws is recorded as failed without stopping the sweep") {
    const fs::path dir = scratch_dir("fail");
    // n_sites = 12 exceeds the dense-circuit limit and must fail; 4 stays fine.
    const fs::path cfg = write_config(dir, "cfg.json", R"({
      "experiment": "circuit-mc",
      "seed": 5,
      "params": { "coupling": 0.4, "steps": 1, "n_realizations": 8 },
      "sweep": { "n_sites": [4, 12] }
    })");

    const RunOutcome outcome = run_experiment(cfg.string(), dir.string());
    CHECK(outcome.exit_code == 1);
    REQUIRE(outcome.points.size() == 2);
    CHECK(outcome.points[0].ok);
    CHECK(!outcome.points[1].ok);
    CHECK(!outcome.points[1].error.empty());

    const json manifest = json::parse(slurp(fs::path(outcome.output_dir) / "manifest.json"));
    CHECK(manifest.at("n_failed") == 1);
    CHECK(manifest.at("points").at(1).at("status") == "failed");
    CHECK(manifest.at("points").at(1).contains("error"));

    fs::remove_all(dir);
}

TEST_CASE("the output root falls back to the environment variable") {
    const fs::path dir = scratch_dir("env");
    setenv(kOutputRootEnvVar, dir.c_str(), 1);
    CHECK(output_root("") == dir.string());
    CHECK(output_root("/explicit/override") == "/explicit/override");
    unsetenv(kOutputRootEnvVar);
    CHECK(output_root("") == fs::current_path().string());
    fs::remove_all(dir);
}

TEST_CASE("fp-integrate and classical-growth runs produce their documented files") {
    const fs::path dir = scratch_dir("kinds");

    const fs::path fp_cfg = write_config(dir, "fp.json", R"({
      "experiment": "fp-integrate",
      "params": { "n_sites": 40, "tau_final": 0.5, "n_points": 201, "n_samples": 5 }
    })");
    const RunOutcome fp = run_experiment(fp_cfg.string(), (dir / "fp").string());
    CHECK(fp.exit_code == 0);
    const fs::path fp_out = fs::path(fp.output_dir);
    CHECK(fs::exists(fp_out / "point000_moments.csv"));
    CHECK(fs::exists(fp_out / "point000_final_density.csv"));
    const std::string moments = slurp(fp_out / "point000_moments.csv");
    CHECK(std::count(moments.begin(), moments.end(), '\n') == 6);

    const fs::path cls_cfg = write_config(dir, "cls.json", R"({
      "experiment": "classical-growth",
      "seed": 9,
      "params": { "n_osc": 6, "omega3": 0.0, "t_final": 3.0,
                  "n_ensemble": 2, "n_samples": 7 }
    })");
    const RunOutcome cls = run_experiment(cls_cfg.string(), (dir / "cls").string());
    CHECK(cls.exit_code == 0);
    const fs::path cls_out = fs::path(cls.output_dir);
    CHECK(fs::exists(cls_out / "point000_growth.csv"));
    CHECK(fs::exists(cls_out / "point000_summary.csv"));
    const std::string growth = slurp(cls_out / "point000_growth.csv");
    CHECK(std::count(growth.begin(), growth.end(), '\n') == 6 * 7 + 1);

    fs::remove_all(dir);
}

#pragma once

// Configuration-driven experiment runner. A JSON config names an experiment
// kind, its parameter block, optional sweep axes (cross product), a seed, and
// an output directory. Every run writes CSV result files plus a manifest.json
// echoing the fully resolved configuration; identical config and seed give
// byte-identical outputs regardless of thread count.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace scramble {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kOutputRootEnvVar = "SCRAMBLESIM_OUTPUT_ROOT";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> parameter_help;
};

// All experiment kinds with their parameter schemas.
std::vector<ExperimentInfo> experiment_catalog();

struct PointOutcome {
    int index = 0;
    std::map<std::string, double> sweep_values;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::vector<std::string> files;
};

struct RunOutcome {
    int exit_code = 2;  // 0 all points ok, 1 point failures, 2 config error
    std::string message;
    std::filesystem::path output_dir;
    std::vector<PointOutcome> points;
};

// Resolution order: explicit override, then $SCRAMBLESIM_OUTPUT_ROOT, then
// the working directory.
std::filesystem::path output_root(const std::string& override_root = "");

// Parses and validates config text without running anything. Throws
// ConfigError naming the offending field (or the line for syntax errors).
void validate_config_text(const std::string& text);

// Executes a config file end to end. Config problems and per-point failures
// are reported through the outcome, not exceptions.
RunOutcome run_experiment(const std::filesystem::path& config_path,
                          const std::string& output_root_override = "");

struct CollapseCurve {
    double coupling = 0.0;
    std::vector<double> g2t;
    std::vector<double> mean_weight_over_n;
};

// Resamples every curve onto a shared g^2 t grid spanning the overlap of
// their ranges and returns the max pairwise sup-norm deviation.
double collapse_check(const std::vector<CollapseCurve>& curves, int n_grid = 200);

}  // namespace scramble

// Command-line front end: run experiment configs, run the oracle suite, or
// describe the available experiment kinds.

#include "scramblesim/experiment.hpp"
#include "scramblesim/validation.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <exception>

int main(int argc, char** argv) {
    CLI::App app{"scramblesim: operator spreading and scrambling simulations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string root_override;
    CLI::App* run = app.add_subcommand("run", "Execute a JSON experiment config");
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--output-root", root_override,
                    "directory results are written under (default: "
                    "$SCRAMBLESIM_OUTPUT_ROOT, then the working directory)");

    std::vector<int> criteria;
    CLI::App* validate =
        app.add_subcommand("validate", "Run the cross-module oracle suite");
    validate->add_option("--criteria", criteria,
                         "subset of check ids to run (default: all)");

    app.add_subcommand("list-experiments", "Describe available experiment kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : 2;  // help exits clean, usage mistakes are config errors
    }

    try {
        if (run->parsed()) {
            const scramble::RunOutcome outcome =
                scramble::run_experiment(config_path, root_override);
            std::printf("%s\n", outcome.message.c_str());
            return outcome.exit_code;
        }

        if (validate->parsed()) {
            std::vector<int> ids =
                criteria.empty() ? scramble::validation_check_ids() : criteria;
            try {
                for (const int id : ids) scramble::validation_check_name(id);
            } catch (const std::exception& err) {
                std::fprintf(stderr, "%s\n", err.what());
                return 2;
            }
            std::sort(ids.begin(), ids.end());
            bool all_passed = true;
            for (const int id : ids) {
                const scramble::CheckResult result = scramble::run_validation_check(id);
                std::printf("%s\n", scramble::format_check_line(result).c_str());
                std::fflush(stdout);
                all_passed = all_passed && result.passed;
            }
            std::printf("%s\n", all_passed ? "all checks passed" : "CHECKS FAILED");
            return all_passed ? 0 : 1;
        }

        // list-experiments
        for (const scramble::ExperimentInfo& info : scramble::experiment_catalog()) {
            std::printf("%s\n  %s\n", info.name.c_str(), info.summary.c_str());
            for (const std::string& line : info.parameter_help)
                std::printf("    %s\n", line.c_str());
        }
        return 0;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
}

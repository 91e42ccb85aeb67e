#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "javf/errors.hpp"
#include "javf/harness.hpp"

// Exit codes: 0 success, 2 validation/config error, 3 I/O or internal error.
int main(int argc, char** argv) {
    CLI::App app{"joint audio/video fingerprint selection under a byte budget"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_value = 0;
    std::string out_value;
    app.add_option("--config", config_path, "experiment config file")->required();
    CLI::Option* seed_opt = app.add_option("--seed", seed_value, "override the [run] seed");
    CLI::Option* out_opt = app.add_option("--out", out_value, "override the [output] dir");

    CLI::App* cmds[] = {
        app.add_subcommand("fingerprint", "fingerprint the dataset into JAVF files"),
        app.add_subcommand("curves", "coverage curves per modality"),
        app.add_subcommand("allocate", "rate-coverage series per allocation method"),
        app.add_subcommand("sweep", "series families over alpha and threshold lists"),
        app.add_subcommand("evaluate", "retrieval accuracy per budget plus the savings table"),
        app.add_subcommand("report", "print a text summary of existing outputs"),
    };
    for (CLI::App* cmd : cmds) cmd->fallthrough(); // global flags after the subcommand too

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    try {
        const javf::harness::ExperimentConfig cfg = javf::harness::load_experiment_config(
            config_path,
            seed_opt->count() ? std::optional<std::uint64_t>(seed_value) : std::nullopt,
            out_opt->count() ? std::optional<std::filesystem::path>(out_value) : std::nullopt);
        if (cmds[0]->parsed()) javf::harness::cmd_fingerprint(cfg);
        if (cmds[1]->parsed()) javf::harness::cmd_curves(cfg);
        if (cmds[2]->parsed()) javf::harness::cmd_allocate(cfg);
        if (cmds[3]->parsed()) javf::harness::cmd_sweep(cfg);
        if (cmds[4]->parsed()) javf::harness::cmd_evaluate(cfg);
        if (cmds[5]->parsed()) javf::harness::cmd_report(cfg);
        return 0;
    } catch (const javf::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) { // the domain's validation errors
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

#include "fracpearson/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"fracpearson: correlation structure of time-changed Pearson diffusions"};
    app.require_subcommand(1);

    std::string run_config, validate_config, compare_config;
    auto* run_cmd = app.add_subcommand("run", "execute the task in a config file");
    run_cmd->add_option("config", run_config, "experiment config (JSON)")->required();
    auto* val_cmd = app.add_subcommand("validate", "parse and validate a config file");
    val_cmd->add_option("config", validate_config, "experiment config (JSON)")->required();
    auto* cmp_cmd = app.add_subcommand("compare", "run an analytic-vs-Monte-Carlo comparison");
    cmp_cmd->add_option("config", compare_config, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return fracpearson::cli::run(run_config);
    if (val_cmd->parsed()) return fracpearson::cli::validate(validate_config);
    return fracpearson::cli::run(compare_config);
}

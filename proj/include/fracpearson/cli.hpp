#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace fracpearson::cli {

enum class Task { eval_gml, phi, mean_inverse, corr, corr_asymptotic, simulate, compare, density };

Task parse_task(const std::string& name);
std::string task_name(Task t);

/// Config normalized against defaults; `raw` is the full effective config that
/// goes into the manifest (re-running the manifest reproduces the run).
struct ExperimentConfig {
    Task task;
    nlohmann::json raw;
};

/// Parses and validates a config file. Accepts either a bare config or a run
/// manifest (an object with a "config" key). Throws DomainError on invalid
/// structure or violated model/mixture invariants.
ExperimentConfig load_config(const std::string& path);

struct RunResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

enum class PlotStyle { loglog_corr, phi_decay, density_heatmap };

/// Plain-text x/y(/z) tables for external plotting. loglog_corr additionally
/// writes "<path>.slope" with the fitted slope and the reference exponent.
void emit_plot_data(const RunResult& results, PlotStyle style, const std::string& path,
                    double reference_slope = 0.0);

/// Executes the configured task, writes the results CSV and a JSON manifest.
/// Returns 0 on success, 2 on validation errors, 3 on numeric failures.
int run(const std::string& config_path);

/// Parse + validate only. Returns 0 if the config is runnable, else 2.
int validate(const std::string& config_path);

} // namespace fracpearson::cli

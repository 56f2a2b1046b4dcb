#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "superrad/generator.hpp"

namespace superrad {

// One experiment invocation. Parsed from a JSON document; individual CLI
// flags override file values. All times are in units of 1/Gamma.
struct ExperimentConfig {
    std::string kind;  // dicke | evolve | channel | dfs-leakage | scaling | budget | dump-generator
    std::vector<int> atom_counts;
    std::optional<int> twice_m;

    double gamma = 1.0;
    double delta_omega = 0.0;
    double omega_a = 1.0;

    // Initial state: "symmetric:<twice_m>" | "uniform" | "dfs" | "random" | "file:<path>"
    std::string initial_state = "uniform";

    double t_end = 1.0;      // units of 1/Gamma
    int steps = 0;           // 0 = pick via the spectral-bound heuristic
    double window_begin = 0.0;
    double window_end = -1.0;  // < 0 = auto per experiment

    std::string metric = "all";  // m1 | m2 | m3 | all
    double delta = 0.01;
    bool perturb_unsupported = false;

    // Scaling / budget inputs.
    double spacing = 0.0;     // d; 0 = geometry columns omitted
    double wavelength = 0.0;  // lambda_a
    double gate_count = 0.0;  // R(L) sample value
    double gate_time = 0.0;   // dt; 0 = 1/omega_a default
    double budget_threshold = 0.1;

    int top_k = 0;  // trajectory dump truncation; 0 = all columns
    std::uint64_t seed = 1;
    std::string output_path = "out.csv";

    DecayParams decay_params() const { return {gamma, delta_omega, omega_a}; }

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);

    // Throws std::invalid_argument with one aggregated report listing every
    // violated field.
    void validate() const;
};

// Runs the experiment, writing the data file(s) atomically plus a
// `<output>.manifest.json` recording the config, its hash and the wall time.
// Exit-status semantics live in the CLI; this throws on failure.
void run(const ExperimentConfig& config);

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> reference;
};

// Two-column CSV (plus optional reference column) for external plotting.
void emit_plot_data(const std::vector<PlotPoint>& points,
                    const std::string& x_name, const std::string& y_name,
                    const std::string& ref_name, const std::string& path);

// Write-to-temp-then-rename; never leaves a partial file at `path`.
void atomic_write(const std::string& path, const std::string& content);

std::string format_double(double v);

}  // namespace superrad

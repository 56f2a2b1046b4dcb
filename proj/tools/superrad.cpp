// Command line front end for the superradiance toolkit.
//
// superrad <subcommand> [--config file.json] [flags...]
//
// Bit convention: bit j of a basis index is 1 when atom j is excited, so
// popcount(index) is the excitation number. All CLI times are in units of
// 1/Gamma; rates in the output are reported in units of Gamma.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "superrad/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

void add_common_options(CLI::App* cmd, superrad::ExperimentConfig& config,
                        std::string& config_path, std::string& l_list) {
    cmd->add_option("--config", config_path, "JSON config file; flags override it");
    cmd->add_option("--L", l_list, "atom count, or comma-separated list");
    cmd->add_option("--L-list", l_list, "alias of --L");
    cmd->add_option("--gamma", config.gamma, "single-atom decay rate");
    cmd->add_option("--delta-omega", config.delta_omega, "Lamb shift");
    cmd->add_option("--omega-a", config.omega_a, "atomic transition frequency");
    cmd->add_option("--seed", config.seed, "random seed (random initial states)");
    cmd->add_option("--output", config.output_path, "output data file");
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "superrad: collective radiative decoherence toolkit.\n"
        "Basis convention: bit j of a state index = 1 when atom j is excited.\n"
        "Times are in units of 1/Gamma; output rates are in units of Gamma."};
    app.require_subcommand(1);

    superrad::ExperimentConfig config;
    std::string config_path;
    std::string l_list;
    int twice_m_flag = INT32_MIN;

    auto* dicke = app.add_subcommand(
        "dicke", "fit symmetric-state decay rates against the analytic values");
    dicke->add_option("--twice-m", twice_m_flag, "inversion sector 2M (default: all)");

    auto* evolve = app.add_subcommand("evolve", "integrate one trajectory to CSV");
    evolve->add_option("--state", config.initial_state,
                       "symmetric:<2M> | uniform | dfs | random | file:<path>");
    evolve->add_option("--t-end", config.t_end, "end time, units of 1/Gamma");
    evolve->add_option("--steps", config.steps, "RK4 steps (0 = automatic)");
    evolve->add_option("--top-k", config.top_k, "keep only the k largest probability columns");

    auto* channel = app.add_subcommand(
        "channel", "single-qubit longitudinal/transverse decay rates");
    channel->add_option("--state", config.initial_state, "initial state spec");
    channel->add_option("--window-end", config.window_end,
                        "fit window end, units of 1/Gamma (default: 1% norm loss)");

    auto* leakage = app.add_subcommand(
        "dfs-leakage", "perturbed decoherence-free-state leakage sweep");
    leakage->add_option("--delta", config.delta, "perturbation amplitude");
    leakage->add_option("--metric", config.metric, "m1 | m2 | m3 | all");
    leakage->add_flag("--perturb-unsupported", config.perturb_unsupported,
                      "perturb a basis state outside the DFS support");

    auto* scaling = app.add_subcommand(
        "scaling", "success probability and large-sample rates over L");
    scaling->add_option("--gate-count", config.gate_count, "R(L) sample value");
    scaling->add_option("--gate-time", config.gate_time,
                        "gate time (default 1/omega_a)");
    scaling->add_option("--spacing", config.spacing, "qubit spacing d");
    scaling->add_option("--wavelength", config.wavelength, "radiation wavelength");

    auto* budget = app.add_subcommand("budget", "feasibility budget report (JSON)");
    budget->add_option("--gate-count", config.gate_count, "R(L) sample value");
    budget->add_option("--threshold", config.budget_threshold,
                       "feasibility threshold for the << 1 conditions");
    budget->add_option("--spacing", config.spacing, "qubit spacing d");
    budget->add_option("--wavelength", config.wavelength, "radiation wavelength");

    auto* dump = app.add_subcommand("dump-generator",
                                    "CSV dump of the sparse collective generator");

    for (CLI::App* cmd : {dicke, evolve, channel, leakage, scaling, budget, dump})
        add_common_options(cmd, config, config_path, l_list);

    CLI11_PARSE(app, argc, argv);

    try {
        superrad::ExperimentConfig base;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "cannot open config file " << config_path << "\n";
                return kExitIo;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            base = superrad::ExperimentConfig::from_json(buf.str());
        }
        // Flags override file values; anything still at its default falls
        // back to the file's value.
        superrad::ExperimentConfig merged = base;
        const superrad::ExperimentConfig defaults;
        auto pick = [](auto flag_value, auto default_value, auto file_value) {
            return flag_value != default_value ? flag_value : file_value;
        };
        merged.gamma = pick(config.gamma, defaults.gamma, base.gamma);
        merged.delta_omega = pick(config.delta_omega, defaults.delta_omega, base.delta_omega);
        merged.omega_a = pick(config.omega_a, defaults.omega_a, base.omega_a);
        merged.initial_state = pick(config.initial_state, defaults.initial_state, base.initial_state);
        merged.t_end = pick(config.t_end, defaults.t_end, base.t_end);
        merged.steps = pick(config.steps, defaults.steps, base.steps);
        merged.window_end = pick(config.window_end, defaults.window_end, base.window_end);
        merged.metric = pick(config.metric, defaults.metric, base.metric);
        merged.delta = pick(config.delta, defaults.delta, base.delta);
        merged.perturb_unsupported = config.perturb_unsupported || base.perturb_unsupported;
        merged.spacing = pick(config.spacing, defaults.spacing, base.spacing);
        merged.wavelength = pick(config.wavelength, defaults.wavelength, base.wavelength);
        merged.gate_count = pick(config.gate_count, defaults.gate_count, base.gate_count);
        merged.gate_time = pick(config.gate_time, defaults.gate_time, base.gate_time);
        merged.budget_threshold =
            pick(config.budget_threshold, defaults.budget_threshold, base.budget_threshold);
        merged.top_k = pick(config.top_k, defaults.top_k, base.top_k);
        merged.seed = pick(config.seed, defaults.seed, base.seed);
        merged.output_path = pick(config.output_path, defaults.output_path, base.output_path);
        if (!l_list.empty()) merged.atom_counts = parse_int_list(l_list);
        if (twice_m_flag != INT32_MIN) merged.twice_m = twice_m_flag;
        merged.kind = app.get_subcommands().front()->get_name();

        superrad::run(merged);
        return 0;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::length_error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

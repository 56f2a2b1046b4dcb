#include "superrad/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "superrad/dfs.hpp"
#include "superrad/dynamics.hpp"
#include "superrad/qubit_channel.hpp"
#include "superrad/scaling.hpp"

namespace superrad {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "superrad 1.0.0";

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

const std::set<std::string> kKinds = {"dicke",       "evolve",  "channel",
                                      "dfs-leakage", "scaling", "budget",
                                      "dump-generator"};

std::vector<LeakageMetric> parse_metrics(const std::string& name) {
    if (name == "m1" || name == "M1") return {LeakageMetric::kInstantaneousRate};
    if (name == "m2" || name == "M2") return {LeakageMetric::kAmplitudeFlux};
    if (name == "m3" || name == "M3") return {LeakageMetric::kFittedDecay};
    if (name == "all")
        return {LeakageMetric::kInstantaneousRate, LeakageMetric::kAmplitudeFlux,
                LeakageMetric::kFittedDecay};
    throw std::invalid_argument("unknown metric '" + name + "'");
}

StateVector make_initial_state(const ExperimentConfig& config, int atom_count) {
    const std::string& spec = config.initial_state;
    if (spec.starts_with("symmetric:")) {
        return symmetric_state(atom_count, std::stoi(spec.substr(10)));
    }
    if (spec == "uniform") {
        StateVector psi;
        psi.atom_count = atom_count;
        const std::size_t dim = std::size_t{1} << atom_count;
        psi.amplitudes.assign(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
        return psi;
    }
    if (spec == "dfs") return dfs_state(atom_count);
    if (spec == "random") {
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> gauss;
        StateVector psi;
        psi.atom_count = atom_count;
        psi.amplitudes.resize(std::size_t{1} << atom_count);
        for (auto& a : psi.amplitudes) a = {gauss(rng), gauss(rng)};
        const double norm = std::sqrt(psi.norm2());
        for (auto& a : psi.amplitudes) a /= norm;
        return psi;
    }
    if (spec.starts_with("file:")) {
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw std::ios_base::failure("cannot open amplitude file " + path);
        StateVector psi;
        psi.atom_count = atom_count;
        psi.amplitudes.assign(std::size_t{1} << atom_count, 0.0);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            std::size_t index;
            double re, im;
            if (row >> index >> re >> im) {
                if (index >= psi.dim())
                    throw std::invalid_argument("amplitude file index out of range");
                psi.amplitudes[index] = {re, im};
            }
        }
        return psi;
    }
    throw std::invalid_argument("unknown initial state '" + spec + "'");
}

void maybe_print_memory_estimate(int atom_count) {
    if (atom_count < 12) return;
    const double dim = std::pow(2.0, atom_count);
    const double entries = dim * (0.25 * atom_count * atom_count + atom_count);
    std::cerr << "allocating generator for L=" << atom_count << ": ~"
              << static_cast<long long>(entries * sizeof(GeneratorEntry) / (1 << 20))
              << " MiB\n";
}

std::string csv_rate_field(const std::optional<RateFit>& fit, bool residual) {
    if (!fit) return "nan";
    return format_double(residual ? fit->residual_rms : fit->rate);
}

// ---- per-experiment runners ------------------------------------------------

std::vector<std::pair<std::string, std::string>> run_dicke(const ExperimentConfig& config) {
    const DecayParams params = config.decay_params();
    std::string csv =
        "L,twice_m,analytic_rate_over_gamma,fitted_rate_over_gamma,fit_residual\n";
    for (int l : config.atom_counts) {
        const CollectiveGenerator gen = CollectiveGenerator::build(l);
        std::vector<int> sectors;
        if (config.twice_m)
            sectors.push_back(*config.twice_m);
        else
            for (int tm = -l; tm <= l; tm += 2) sectors.push_back(tm);
        for (int tm : sectors) {
            const double analytic = dicke_rate(l, tm, params.gamma);
            const StateVector psi0 = symmetric_state(l, tm);
            const double t_end =
                analytic > 0.0 ? 0.01 / analytic : 0.5 / (l * params.gamma);
            const int steps = std::max(default_steps(gen, params, t_end), 200);
            const Trajectory traj =
                evolve(psi0, gen, params, t_end, steps, std::max(steps / 100, 1));
            std::vector<double> norms;
            for (const auto& s : traj.states) norms.push_back(s.norm2());
            const RateFit fit = fit_decay_rate(traj.times, norms, 0.0, t_end);
            csv += std::to_string(l) + ',' + std::to_string(tm) + ',' +
                   format_double(analytic / params.gamma) + ',' +
                   format_double(fit.rate / params.gamma) + ',' +
                   format_double(fit.residual_rms) + '\n';
        }
    }
    return {{config.output_path, csv}};
}

std::vector<std::pair<std::string, std::string>> run_evolve(const ExperimentConfig& config) {
    const int l = config.atom_counts.front();
    maybe_print_memory_estimate(l);
    const DecayParams params = config.decay_params();
    const CollectiveGenerator gen = CollectiveGenerator::build(l);
    const StateVector psi0 = make_initial_state(config, l);

    const double t_end = config.t_end / params.gamma;
    const int steps =
        config.steps > 0 ? config.steps : default_steps(gen, params, t_end);
    const Trajectory traj =
        evolve(psi0, gen, params, t_end, steps, std::max(steps / 200, 1));

    // Column selection: all basis states, or the top-k by peak probability.
    std::vector<std::uint32_t> columns;
    const std::size_t dim = gen.dim();
    if (config.top_k > 0 && static_cast<std::size_t>(config.top_k) < dim) {
        std::vector<double> peak(dim, 0.0);
        for (const auto& s : traj.states)
            for (std::size_t q = 0; q < dim; ++q)
                peak[q] = std::max(peak[q], std::norm(s.amplitudes[q]));
        std::vector<std::uint32_t> order(dim);
        for (std::size_t q = 0; q < dim; ++q) order[q] = static_cast<std::uint32_t>(q);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return peak[a] > peak[b]; });
        columns.assign(order.begin(), order.begin() + config.top_k);
        std::sort(columns.begin(), columns.end());
    } else {
        for (std::size_t q = 0; q < dim; ++q) columns.push_back(static_cast<std::uint32_t>(q));
    }

    std::string csv = "t,norm2";
    for (std::uint32_t q : columns) csv += ",p_q" + std::to_string(q);
    csv += '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        csv += format_double(traj.times[i] * params.gamma) + ',' +
               format_double(traj.states[i].norm2());
        for (std::uint32_t q : columns)
            csv += ',' + format_double(std::norm(traj.states[i].amplitudes[q]));
        csv += '\n';
    }
    return {{config.output_path, csv}};
}

std::vector<std::pair<std::string, std::string>> run_channel(const ExperimentConfig& config) {
    const DecayParams params = config.decay_params();
    std::string csv =
        "L,longitudinal_rate,transverse_rate,fit_residual_long,fit_residual_trans\n";
    for (int l : config.atom_counts) {
        const CollectiveGenerator gen = CollectiveGenerator::build(l);
        const StateVector psi0 = make_initial_state(config, l);

        // Short horizon: a few percent of the fastest typical decay.
        double t_end = 0.05 / (params.gamma * (0.25 * l * l + 0.5 * l));
        double window_end = config.window_end;
        if (window_end > 0.0) {
            window_end /= params.gamma;
            t_end = window_end;
        }
        const int steps = std::max(default_steps(gen, params, t_end), 500);
        const Trajectory traj = evolve(psi0, gen, params, t_end, steps, 1);

        if (window_end <= 0.0) {
            // Default window: up to the first 1% loss of zero-photon norm.
            window_end = t_end;
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                if (traj.states[i].norm2() < 0.99) {
                    window_end = traj.times[i];
                    break;
                }
            }
        }
        const ChannelRates rates = channel_rates(traj, 0, 0.0, window_end);
        auto over_gamma = [&](const std::optional<RateFit>& f) {
            if (!f) return std::string("nan");
            return format_double(f->rate / params.gamma);
        };
        csv += std::to_string(l) + ',' + over_gamma(rates.longitudinal) + ',' +
               over_gamma(rates.transverse) + ',' +
               csv_rate_field(rates.longitudinal, true) + ',' +
               csv_rate_field(rates.transverse, true) + '\n';
    }
    return {{config.output_path, csv}};
}

std::vector<std::pair<std::string, std::string>> run_dfs_leakage(const ExperimentConfig& config) {
    const DecayParams params = config.decay_params();
    for (int l : config.atom_counts) maybe_print_memory_estimate(l);

    std::string csv = "L,delta,metric,rate_over_gamma,fit_residual\n";
    ordered_json summary;
    summary["threshold_note"] = "rate = c_quadratic * L^2 * Gamma";
    double best_distance = 1e300;
    std::string best_metric;
    std::vector<PlotPoint> best_points;

    for (LeakageMetric metric : parse_metrics(config.metric)) {
        const LeakageSweep sweep =
            leakage_sweep(config.atom_counts, config.delta, metric, params,
                          config.perturb_unsupported);
        std::vector<PlotPoint> points;
        for (const LeakageResult& r : sweep.results) {
            csv += std::to_string(r.atom_count) + ',' + format_double(r.delta) + ',' +
                   metric_name(metric) + ',' + format_double(r.rate_over_gamma) + ',' +
                   format_double(r.fit_residual) + '\n';
            points.push_back({static_cast<double>(r.atom_count), r.rate_over_gamma,
                              0.25 * r.atom_count * r.atom_count});
        }
        summary[metric_name(metric)] = {{"c_quadratic", sweep.c_quadratic},
                                        {"r_squared", sweep.r_squared}};
        const double distance = std::abs(sweep.c_quadratic - 0.25);
        if (distance < best_distance) {
            best_distance = distance;
            best_metric = metric_name(metric);
            best_points = points;
        }
    }
    summary["best_metric"] = best_metric;

    std::string plot_csv = "L,rate_over_gamma,ref_Lsq_over_4\n";
    for (const PlotPoint& p : best_points)
        plot_csv += format_double(p.x) + ',' + format_double(p.y) + ',' +
                    format_double(*p.reference) + '\n';

    return {{config.output_path, csv},
            {config.output_path + ".summary.json", summary.dump(2) + "\n"},
            {config.output_path + ".plot.csv", plot_csv}};
}

std::vector<std::pair<std::string, std::string>> run_scaling(const ExperimentConfig& config) {
    const bool with_geometry = config.spacing > 0.0 && config.wavelength > 0.0;
    const double dt = config.gate_time > 0.0 ? config.gate_time : 1.0 / config.omega_a;

    std::string csv = "L,success_probability";
    if (with_geometry) csv += ",mu,rate_exact_over_gamma,rate_asymptotic_over_gamma";
    csv += '\n';
    for (int l : config.atom_counts) {
        csv += std::to_string(l) + ',' +
               format_double(success_probability(l, config.gamma, config.gate_count, dt));
        if (with_geometry) {
            const GeometryParams geom{config.spacing, config.wavelength, l};
            csv += ',' + format_double(geom.collective_fraction()) + ',' +
                   format_double(large_sample_rate(l, config.gamma, geom, RateForm::kExact) /
                                 config.gamma) +
                   ',' +
                   format_double(
                       large_sample_rate(l, config.gamma, geom, RateForm::kAsymptotic) /
                       config.gamma);
        }
        csv += '\n';
    }
    return {{config.output_path, csv}};
}

std::vector<std::pair<std::string, std::string>> run_budget(const ExperimentConfig& config) {
    ordered_json report;
    report["gamma"] = config.gamma;
    report["omega_a"] = config.omega_a;
    report["gate_count"] = config.gate_count;
    report["threshold"] = config.budget_threshold;
    report["caveat"] =
        "large-sample budget underestimates decoherence: nearest-neighbor routing "
        "and long-range gate overheads are not modeled";
    ordered_json rows = ordered_json::array();
    for (int l : config.atom_counts) {
        ordered_json row;
        row["L"] = l;
        const RunBudget small = small_sample_budget(l, config.gamma, config.omega_a,
                                                    config.gate_count,
                                                    config.budget_threshold);
        row["small_sample"] = {{"value", small.value}, {"feasible", small.feasible}};
        if (config.spacing > 0.0 && config.wavelength > 0.0) {
            const RunBudget large = large_sample_budget(
                l, config.gamma, config.omega_a, config.gate_count,
                config.wavelength / config.spacing, config.budget_threshold);
            row["large_sample"] = {{"value", large.value}, {"feasible", large.feasible}};
        }
        rows.push_back(row);
    }
    report["budgets"] = rows;
    return {{config.output_path, report.dump(2) + "\n"}};
}

std::vector<std::pair<std::string, std::string>> run_dump_generator(
    const ExperimentConfig& config) {
    const int l = config.atom_counts.front();
    maybe_print_memory_estimate(l);
    const CollectiveGenerator gen = CollectiveGenerator::build(l);
    std::ostringstream os;
    gen.dump_csv(os);
    return {{config.output_path, os.str()}};
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot open " + tmp);
        out << content;
        if (!out) throw std::ios_base::failure("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void emit_plot_data(const std::vector<PlotPoint>& points, const std::string& x_name,
                    const std::string& y_name, const std::string& ref_name,
                    const std::string& path) {
    if (points.empty()) throw std::invalid_argument("emit_plot_data: empty result list");
    const bool with_ref = points.front().reference.has_value();
    std::string csv = x_name + ',' + y_name;
    if (with_ref) csv += ',' + ref_name;
    csv += '\n';
    for (const PlotPoint& p : points) {
        csv += format_double(p.x) + ',' + format_double(p.y);
        if (with_ref) csv += ',' + format_double(p.reference.value_or(0.0));
        csv += '\n';
    }
    atomic_write(path, csv);
}

std::string ExperimentConfig::to_json() const {
    ordered_json j;
    j["kind"] = kind;
    j["atom_counts"] = atom_counts;
    if (twice_m) j["twice_m"] = *twice_m;
    j["gamma"] = gamma;
    j["delta_omega"] = delta_omega;
    j["omega_a"] = omega_a;
    j["initial_state"] = initial_state;
    j["t_end"] = t_end;
    j["steps"] = steps;
    j["window_begin"] = window_begin;
    j["window_end"] = window_end;
    j["metric"] = metric;
    j["delta"] = delta;
    j["perturb_unsupported"] = perturb_unsupported;
    j["spacing"] = spacing;
    j["wavelength"] = wavelength;
    j["gate_count"] = gate_count;
    j["gate_time"] = gate_time;
    j["budget_threshold"] = budget_threshold;
    j["top_k"] = top_k;
    j["seed"] = seed;
    j["output_path"] = output_path;
    return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    ExperimentConfig c;
    c.kind = j.value("kind", c.kind);
    c.atom_counts = j.value("atom_counts", c.atom_counts);
    if (j.contains("twice_m")) c.twice_m = j["twice_m"].get<int>();
    c.gamma = j.value("gamma", c.gamma);
    c.delta_omega = j.value("delta_omega", c.delta_omega);
    c.omega_a = j.value("omega_a", c.omega_a);
    c.initial_state = j.value("initial_state", c.initial_state);
    c.t_end = j.value("t_end", c.t_end);
    c.steps = j.value("steps", c.steps);
    c.window_begin = j.value("window_begin", c.window_begin);
    c.window_end = j.value("window_end", c.window_end);
    c.metric = j.value("metric", c.metric);
    c.delta = j.value("delta", c.delta);
    c.perturb_unsupported = j.value("perturb_unsupported", c.perturb_unsupported);
    c.spacing = j.value("spacing", c.spacing);
    c.wavelength = j.value("wavelength", c.wavelength);
    c.gate_count = j.value("gate_count", c.gate_count);
    c.gate_time = j.value("gate_time", c.gate_time);
    c.budget_threshold = j.value("budget_threshold", c.budget_threshold);
    c.top_k = j.value("top_k", c.top_k);
    c.seed = j.value("seed", c.seed);
    c.output_path = j.value("output_path", c.output_path);
    return c;
}

void ExperimentConfig::validate() const {
    std::vector<std::string> errors;
    if (!kKinds.contains(kind)) errors.push_back("unknown experiment kind '" + kind + "'");
    if (atom_counts.empty()) errors.push_back("atom_counts must not be empty");
    // Closed-form kinds have no state-vector to build, so any positive L works.
    const bool closed_form = (kind == "scaling" || kind == "budget");
    for (int l : atom_counts) {
        if (closed_form) {
            if (l < 1) errors.push_back("L=" + std::to_string(l) + " must be >= 1");
            continue;
        }
        if (l < 1 || l > CollectiveGenerator::kDefaultMaxAtoms)
            errors.push_back("L=" + std::to_string(l) + " outside [1, " +
                             std::to_string(CollectiveGenerator::kDefaultMaxAtoms) + "]");
        else if (twice_m) {
            if (*twice_m < -l || *twice_m > l)
                errors.push_back("twice_m=" + std::to_string(*twice_m) +
                                 " outside [-L, L] for L=" + std::to_string(l));
            else if ((*twice_m - l) % 2 != 0)
                errors.push_back("twice_m=" + std::to_string(*twice_m) +
                                 " must have the same parity as L=" + std::to_string(l));
        }
        if (kind == "dfs-leakage" && l % 2 != 0)
            errors.push_back("dfs-leakage requires even L, got " + std::to_string(l));
    }
    if (!(gamma > 0.0)) errors.push_back("gamma must be > 0");
    if (!(omega_a > 0.0)) errors.push_back("omega_a must be > 0");
    if (!(t_end > 0.0)) errors.push_back("t_end must be > 0");
    if (steps < 0) errors.push_back("steps must be >= 0");
    if (delta < 0.0) errors.push_back("delta must be >= 0");
    if (!(budget_threshold > 0.0)) errors.push_back("budget_threshold must be > 0");
    try {
        parse_metrics(metric);
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }
    const bool known_state =
        initial_state == "uniform" || initial_state == "dfs" ||
        initial_state == "random" || initial_state.starts_with("symmetric:") ||
        initial_state.starts_with("file:");
    if (!known_state) errors.push_back("unknown initial state '" + initial_state + "'");
    if (output_path.empty()) errors.push_back("output_path must not be empty");

    if (!errors.empty()) {
        std::string report = "invalid config:";
        for (const std::string& e : errors) report += "\n  - " + e;
        throw std::invalid_argument(report);
    }
}

void run(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::pair<std::string, std::string>> outputs;
    if (config.kind == "dicke") outputs = run_dicke(config);
    else if (config.kind == "evolve") outputs = run_evolve(config);
    else if (config.kind == "channel") outputs = run_channel(config);
    else if (config.kind == "dfs-leakage") outputs = run_dfs_leakage(config);
    else if (config.kind == "scaling") outputs = run_scaling(config);
    else if (config.kind == "budget") outputs = run_budget(config);
    else if (config.kind == "dump-generator") outputs = run_dump_generator(config);

    for (const auto& [path, content] : outputs) atomic_write(path, content);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string canonical = config.to_json();
    ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = ordered_json::parse(canonical);
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical)));
    manifest["config_hash"] = hash;
    manifest["wall_time_s"] = wall;
    ordered_json files = ordered_json::array();
    for (const auto& [path, content] : outputs) files.push_back(path);
    manifest["outputs"] = files;
    atomic_write(config.output_path + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace superrad

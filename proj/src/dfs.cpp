#include "superrad/dfs.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace superrad {

StateVector dfs_state(int atom_count) {
    if (atom_count < 2 || atom_count % 2 != 0)
        throw std::domain_error("dfs_state: atom count must be even and >= 2");

    StateVector psi;
    psi.atom_count = atom_count;
    psi.amplitudes.assign(std::size_t{1} << atom_count, 0.0);

    const int pairs = atom_count / 2;
    const double amp = std::pow(0.5, 0.5 * pairs);
    // Each pair (2j, 2j+1) contributes |ge> - |eg>: choice bit 0 excites atom
    // 2j+1 with sign +, choice bit 1 excites atom 2j with sign -.
    for (std::uint32_t choice = 0; choice < (std::uint32_t{1} << pairs); ++choice) {
        std::uint32_t index = 0;
        int sign = 1;
        for (int j = 0; j < pairs; ++j) {
            if (choice & (std::uint32_t{1} << j)) {
                index |= std::uint32_t{1} << (2 * j);
                sign = -sign;
            } else {
                index |= std::uint32_t{1} << (2 * j + 1);
            }
        }
        psi.amplitudes[index] = sign * amp;
    }
    return psi;
}

double stationarity_residual(const StateVector& psi, const CollectiveGenerator& gen) {
    if (psi.dim() != gen.dim())
        throw std::invalid_argument("stationarity_residual: dimension mismatch");
    std::vector<std::complex<double>> image(psi.dim());
    gen.apply(psi.amplitudes, image);
    double acc = 0.0;
    for (const auto& a : image) acc += std::norm(a);
    return std::sqrt(acc);
}

StateVector perturb(const StateVector& psi, std::uint32_t q, std::complex<double> delta) {
    if (q >= psi.dim()) throw std::out_of_range("perturb: basis index out of range");
    StateVector out = psi;
    out.amplitudes[q] += delta;
    const double norm = std::sqrt(out.norm2());
    if (!(norm > 0.0)) throw std::domain_error("perturb: zero state");
    for (auto& a : out.amplitudes) a /= norm;
    return out;
}

std::vector<std::complex<double>> nonkernel_component(const StateVector& psi,
                                                      const CollectiveGenerator& gen) {
    if (psi.dim() != gen.dim())
        throw std::invalid_argument("nonkernel_component: dimension mismatch");
    const std::size_t n = gen.dim();

    if (gen.atom_count() <= 8) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gen.dense());
        const Eigen::MatrixXd& vectors = solver.eigenvectors();
        const Eigen::VectorXd& values = solver.eigenvalues();
        std::vector<std::complex<double>> out = psi.amplitudes;
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            if (values[i] >= 1e-9) continue;
            const Eigen::VectorXd v = vectors.col(i);
            std::complex<double> coef = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                coef += v[static_cast<Eigen::Index>(r)] * psi.amplitudes[r];
            for (std::size_t r = 0; r < n; ++r)
                out[r] -= coef * v[static_cast<Eigen::Index>(r)];
        }
        return out;
    }

    // x <- (I - A/s) x kills every nonzero mode by a factor (1 - lambda/s)
    // per sweep; the smallest nonzero eigenvalue of S+S- is 1, so ~35 s
    // sweeps leave a kernel remainder below 1e-14.
    const double s = gen.spectral_bound();
    const int sweeps = static_cast<int>(std::ceil(35.0 * s));
    std::vector<std::complex<double>> x = psi.amplitudes;
    std::vector<std::complex<double>> ax(n);
    for (int it = 0; it < sweeps; ++it) {
        gen.apply(x, ax);
        for (std::size_t i = 0; i < n; ++i) x[i] -= ax[i] / s;
    }
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = psi.amplitudes[i] - x[i];
    return out;
}

std::string metric_name(LeakageMetric m) {
    switch (m) {
        case LeakageMetric::kInstantaneousRate: return "M1";
        case LeakageMetric::kAmplitudeFlux: return "M2";
        case LeakageMetric::kFittedDecay: return "M3";
    }
    return "?";
}

std::uint32_t default_perturbation_target(int atom_count) {
    std::uint32_t q = 0;
    for (int j = 1; j < atom_count; j += 2) q |= std::uint32_t{1} << j;
    return q;
}

namespace {

double vec_norm2(std::span<const std::complex<double>> v) {
    double acc = 0.0;
    for (const auto& a : v) acc += std::norm(a);
    return acc;
}

}  // namespace

LeakageResult leakage_rate(int atom_count, std::uint32_t q, std::complex<double> delta,
                           LeakageMetric metric, const CollectiveGenerator& gen,
                           const DecayParams& params) {
    if (atom_count % 2 != 0)
        throw std::domain_error("leakage_rate: atom count must be even");
    params.validate();

    LeakageResult result;
    result.atom_count = atom_count;
    result.delta = std::abs(delta);
    result.metric = metric;

    const StateVector ideal = dfs_state(atom_count);
    const StateVector psi =
        (delta == std::complex<double>(0.0)) ? ideal : perturb(ideal, q, delta);

    const std::vector<std::complex<double>> perp = nonkernel_component(psi, gen);
    const double perp_norm2 = vec_norm2(perp);
    if (perp_norm2 < 1e-28) return result;  // still inside the DFS, rate 0

    const std::size_t n = gen.dim();
    std::vector<std::complex<double>> image(n);

    switch (metric) {
        case LeakageMetric::kInstantaneousRate: {
            gen.apply(perp, image);
            double quad = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                quad += (std::conj(perp[i]) * image[i]).real();
            result.rate_over_gamma = quad / perp_norm2;
            break;
        }
        case LeakageMetric::kAmplitudeFlux: {
            // Aggregate |dc/dt| per unit perturbation. The kernel part of psi
            // is annihilated, so A psi is proportional to delta and the ratio
            // is delta-independent.
            std::vector<std::complex<double>> unnormalized = ideal.amplitudes;
            unnormalized[q] += delta;
            gen.apply(unnormalized, image);
            double flux = 0.0;
            for (const auto& a : image) flux += std::abs(a);
            result.rate_over_gamma = flux / std::abs(delta);
            break;
        }
        case LeakageMetric::kFittedDecay: {
            // Kernel content is stationary, so psi_perp(t) = psi(t) - kernel(0).
            std::vector<std::complex<double>> kernel0(n);
            for (std::size_t i = 0; i < n; ++i)
                kernel0[i] = psi.amplitudes[i] - perp[i];

            const double rate_guess = dicke_rate(atom_count, 0, params.gamma);
            const double t_end = 0.01 / rate_guess;
            const int steps = std::max(default_steps(gen, params, t_end), 200);
            const Trajectory traj = evolve(psi, gen, params, t_end, steps,
                                           std::max(steps / 100, 1));

            std::vector<double> leak2;
            leak2.reserve(traj.states.size());
            for (const StateVector& state : traj.states) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    acc += std::norm(state.amplitudes[i] - kernel0[i]);
                leak2.push_back(acc);
            }
            const RateFit fit = fit_decay_rate(traj.times, leak2, 0.0, t_end);
            result.rate_over_gamma = fit.rate / params.gamma;
            result.fit_residual = fit.residual_rms;
            break;
        }
    }
    return result;
}

void fit_quadratic(std::span<const int> atom_counts, std::span<const double> rates,
                   double& c, double& r_squared) {
    if (atom_counts.size() != rates.size() || atom_counts.empty())
        throw std::invalid_argument("fit_quadratic: bad input sizes");
    double sxy = 0.0, sxx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double x = static_cast<double>(atom_counts[i]) * atom_counts[i];
        sxy += x * rates[i];
        sxx += x * x;
        sy += rates[i];
    }
    c = (sxx > 0.0) ? sxy / sxx : 0.0;
    const double mean = sy / static_cast<double>(rates.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double x = static_cast<double>(atom_counts[i]) * atom_counts[i];
        ss_res += (rates[i] - c * x) * (rates[i] - c * x);
        ss_tot += (rates[i] - mean) * (rates[i] - mean);
    }
    r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
}

namespace {

// Lowest-index half-excited basis state outside the singlet-product support
// (some pair fully excited). Exists for L >= 4; L = 2 falls back to the
// supported target.
std::uint32_t unsupported_target(int atom_count) {
    if (atom_count < 4) return default_perturbation_target(atom_count);
    std::uint32_t q = 0b11;  // first pair doubly excited
    for (int j = 5; j < atom_count; j += 2) q |= std::uint32_t{1} << j;
    return q;
}

}  // namespace

LeakageSweep leakage_sweep(std::span<const int> atom_counts, double delta,
                           LeakageMetric metric, const DecayParams& params,
                           bool perturb_unsupported) {
    LeakageSweep sweep;
    std::vector<double> rates;
    for (std::size_t i = 0; i < atom_counts.size(); ++i) {
        const int l = atom_counts[i];
        if (i > 0 && l <= atom_counts[i - 1])
            throw std::invalid_argument("leakage_sweep: atom counts must ascend");
        const CollectiveGenerator gen = CollectiveGenerator::build(l);
        const std::uint32_t q = perturb_unsupported ? unsupported_target(l)
                                                    : default_perturbation_target(l);
        const LeakageResult r = leakage_rate(l, q, delta, metric, gen, params);
        rates.push_back(r.rate_over_gamma);
        sweep.results.push_back(r);
    }
    fit_quadratic(atom_counts, rates, sweep.c_quadratic, sweep.r_squared);
    return sweep;
}

}  // namespace superrad

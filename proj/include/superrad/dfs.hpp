#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "superrad/dynamics.hpp"

namespace superrad {

// Tensor product of two-qubit singlets on consecutive atom pairs (2j, 2j+1);
// lies in the kernel of the collective generator. L must be even.
StateVector dfs_state(int atom_count);

// ||A psi||_2; zero exactly when psi is decoherence free.
double stationarity_residual(const StateVector& psi, const CollectiveGenerator& gen);

// Adds delta to the amplitude at basis index q and renormalizes.
StateVector perturb(const StateVector& psi, std::uint32_t q, std::complex<double> delta);

// Component of psi orthogonal to the kernel of A. Dense eigendecomposition
// for L <= 8; damped Richardson iteration (I - A/s)^n for larger L, which
// converges geometrically because the nonzero eigenvalues are >= 1.
std::vector<std::complex<double>> nonkernel_component(const StateVector& psi,
                                                      const CollectiveGenerator& gen);

enum class LeakageMetric {
    kInstantaneousRate,  // M1: Gamma <psi_perp|A|psi_perp> / ||psi_perp||^2
    kAmplitudeFlux,      // M2: Gamma sum_q |(A psi)_q| per unit perturbation
    kFittedDecay,        // M3: short-window exponential fit of ||psi_perp(t)||^2
};

std::string metric_name(LeakageMetric m);

struct LeakageResult {
    int atom_count = 0;
    double delta = 0.0;
    LeakageMetric metric = LeakageMetric::kInstantaneousRate;
    double rate_over_gamma = 0.0;
    double fit_residual = 0.0;
};

// Default perturbation target: the DFS-supported basis state with every
// odd-indexed atom excited (0b1010...10).
std::uint32_t default_perturbation_target(int atom_count);

LeakageResult leakage_rate(int atom_count, std::uint32_t q, std::complex<double> delta,
                           LeakageMetric metric, const CollectiveGenerator& gen,
                           const DecayParams& params);

struct LeakageSweep {
    std::vector<LeakageResult> results;
    double c_quadratic = 0.0;  // least-squares c in rate = c L^2 Gamma
    double r_squared = 0.0;
};

LeakageSweep leakage_sweep(std::span<const int> atom_counts, double delta,
                           LeakageMetric metric, const DecayParams& params,
                           bool perturb_unsupported = false);

// Fit of rate = c L^2 through the origin, with R^2 about the mean.
void fit_quadratic(std::span<const int> atom_counts, std::span<const double> rates,
                   double& c, double& r_squared);

}  // namespace superrad

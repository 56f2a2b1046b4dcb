#pragma once

#include <complex>
#include <span>
#include <vector>

#include "superrad/generator.hpp"

namespace superrad {

// Amplitudes of the zero-photon sector; the squared norm is the probability
// that no photon has been emitted, so it may only shrink under evolution.
struct StateVector {
    int atom_count = 1;
    std::vector<std::complex<double>> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
    double norm2() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    DecayParams params;
};

// Uniform superposition over all basis states with the given inversion.
StateVector symmetric_state(int atom_count, int twice_m);

// Collective decay rate (L/2 + M)(L/2 - M + 1) * gamma of a symmetric state.
double dicke_rate(int atom_count, int twice_m, double gamma);

// Fixed-step RK4 for dc/dt = -kappa A c, sampling every `store_every` steps
// (the initial and final states are always stored).
Trajectory evolve(const StateVector& psi0, const CollectiveGenerator& gen,
                  const DecayParams& params, double t_end, int steps,
                  int store_every = 1);

// Step count satisfying spectral_bound * |kappa| * h < 0.1.
int default_steps(const CollectiveGenerator& gen, const DecayParams& params,
                  double t_end);

// Dense eigendecomposition solution c(t) = V exp(-kappa Lambda t) V^T c(0).
// Machine-precision cross-check; L <= 8.
Trajectory evolve_exact(const StateVector& psi0, const CollectiveGenerator& gen,
                        const DecayParams& params, std::span<const double> times);

struct RateFit {
    double rate = 0.0;
    double residual_rms = 0.0;
};

// Least-squares slope of -ln p versus t over [window_begin, window_end].
// Samples below 1e-300 are dropped with a warning on stderr.
RateFit fit_decay_rate(std::span<const double> times,
                       std::span<const double> probabilities,
                       double window_begin, double window_end);

}  // namespace superrad

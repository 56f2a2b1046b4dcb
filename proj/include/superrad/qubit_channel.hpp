#pragma once

#include <complex>
#include <optional>

#include "superrad/dynamics.hpp"

namespace superrad {

// 2x2 density matrix of one qubit in the {|g>, |e>} basis. The trace can be
// below one; the deficit is probability already emitted into the photon branch.
struct ReducedDensityMatrix {
    double rho_gg = 0.0;
    double rho_ee = 0.0;
    std::complex<double> rho_ge = 0.0;

    std::complex<double> rho_eg() const { return std::conj(rho_ge); }
    double trace() const { return rho_gg + rho_ee; }
};

// Partial trace over all atoms except `qubit`.
ReducedDensityMatrix reduce(const StateVector& psi, int qubit);

struct ChannelRates {
    std::optional<RateFit> longitudinal;  // decay of rho_ee
    std::optional<RateFit> transverse;    // decay of |rho_ge|
};

// Rates are fitted on the raw (trace-deficient) matrix entries, so the photon
// loss itself is part of the decay; a component that vanishes in the window is
// reported as absent rather than an error.
ChannelRates channel_rates(const Trajectory& traj, int qubit,
                           double window_begin, double window_end);

// Per-gate error estimate L*gamma*dt/2; warns outside the small-error regime.
double gate_error(int atom_count, double gamma, double dt);

}  // namespace superrad

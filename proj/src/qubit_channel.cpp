#include "superrad/qubit_channel.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

namespace superrad {

ReducedDensityMatrix reduce(const StateVector& psi, int qubit) {
    if (qubit < 0 || qubit >= psi.atom_count)
        throw std::out_of_range("reduce: qubit index out of range");

    const std::uint32_t bit = std::uint32_t{1} << qubit;
    ReducedDensityMatrix rho;
    // Pair up the amplitudes that differ only in this qubit's bit.
    for (std::uint32_t q = 0; q < psi.dim(); ++q) {
        if (q & bit) continue;
        const std::complex<double> cg = psi.amplitudes[q];        // qubit in |g>
        const std::complex<double> ce = psi.amplitudes[q | bit];  // qubit in |e>
        rho.rho_gg += std::norm(cg);
        rho.rho_ee += std::norm(ce);
        rho.rho_ge += cg * std::conj(ce);
    }
    return rho;
}

ChannelRates channel_rates(const Trajectory& traj, int qubit,
                           double window_begin, double window_end) {
    if (traj.times.empty()) throw std::invalid_argument("channel_rates: empty trajectory");
    if (window_begin < traj.times.front() || window_end > traj.times.back())
        throw std::invalid_argument("channel_rates: window outside trajectory span");

    std::vector<double> pop, coh;
    bool pop_ok = true, coh_ok = true;
    for (const StateVector& psi : traj.states) {
        const ReducedDensityMatrix rho = reduce(psi, qubit);
        const double p = rho.rho_ee;
        const double c = std::abs(rho.rho_ge);
        if (!(p > 1e-300)) pop_ok = false;
        if (!(c > 1e-300)) coh_ok = false;
        pop.push_back(p);
        coh.push_back(c);
    }

    ChannelRates rates;
    if (pop_ok)
        rates.longitudinal = fit_decay_rate(traj.times, pop, window_begin, window_end);
    if (coh_ok)
        rates.transverse = fit_decay_rate(traj.times, coh, window_begin, window_end);
    return rates;
}

double gate_error(int atom_count, double gamma, double dt) {
    const double eps = 0.5 * atom_count * gamma * dt;
    if (eps >= 0.5)
        std::cerr << "gate_error: L*Gamma*dt/2 = " << eps
                  << " is outside the small-error regime\n";
    return eps;
}

}  // namespace superrad

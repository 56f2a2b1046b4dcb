#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace superrad {

// Large-sample grid geometry: L qubits at spacing d give a sample of size
// w = L^(1/3) d, of which only a fraction mu of vacuum modes emits collectively.
struct GeometryParams {
    double spacing = 1.0;     // d
    double wavelength = 1.0;  // lambda_a, same length unit as d
    int atom_count = 1;

    double sample_size() const {
        return std::cbrt(static_cast<double>(atom_count)) * spacing;
    }
    double collective_fraction() const;

    void validate() const {
        if (!(spacing > 0.0) || !(wavelength > 0.0) || atom_count < 1)
            throw std::domain_error("GeometryParams: d, lambda_a > 0 and L >= 1 required");
    }
};

// mu = (3 / 8 pi^2) (lambda_a / w)^2
inline double collective_fraction(double wavelength, double sample_size) {
    if (!(wavelength > 0.0) || !(sample_size > 0.0))
        throw std::domain_error("collective_fraction: positive inputs required");
    const double ratio = wavelength / sample_size;
    return 3.0 / (8.0 * std::numbers::pi * std::numbers::pi) * ratio * ratio;
}

inline double GeometryParams::collective_fraction() const {
    return superrad::collective_fraction(wavelength, sample_size());
}

// rho_qq'(0) * exp(-L^2 Gamma t / 4)
inline std::complex<double> coherence_decay(std::complex<double> rho0_offdiag,
                                            int atom_count, double gamma, double t) {
    if (t < 0.0) throw std::domain_error("coherence_decay: t must be >= 0");
    const double l = static_cast<double>(atom_count);
    return rho0_offdiag * std::exp(-l * l * gamma * t / 4.0);
}

// exp(-L^2 Gamma R dt / 4)
inline double success_probability(int atom_count, double gamma, double gate_count,
                                  double dt) {
    const double l = static_cast<double>(atom_count);
    return std::exp(-l * l * gamma * gate_count * dt / 4.0);
}

struct RunBudget {
    int atom_count = 0;
    double gamma = 0.0;
    double omega_a = 0.0;
    double gate_count = 0.0;
    double value = 0.0;  // dimensionless left-hand side of the "<< 1" condition
    double threshold = 0.1;
    bool feasible = false;
};

inline constexpr double kDefaultBudgetThreshold = 0.1;

// L^2 R Gamma / (4 omega_a), taking the gate time as 1/omega_a.
inline RunBudget small_sample_budget(int atom_count, double gamma, double omega_a,
                                     double gate_count,
                                     double threshold = kDefaultBudgetThreshold) {
    if (atom_count < 1 || !(gamma > 0.0) || !(omega_a > 0.0) || gate_count < 0.0)
        throw std::domain_error("small_sample_budget: positive inputs required");
    const double l = static_cast<double>(atom_count);
    RunBudget budget{atom_count, gamma, omega_a, gate_count, 0.0, threshold, false};
    budget.value = l * l * gate_count * gamma / (4.0 * omega_a);
    budget.feasible = budget.value < threshold;
    return budget;
}

enum class RateForm { kExact, kAsymptotic };

// Collective emission rate in the large-sample geometry:
// exact (L/2)(L/2+1) mu Gamma, asymptotic (3/32 pi^2)(lambda_a/d)^2 L^(4/3) Gamma.
inline double large_sample_rate(int atom_count, double gamma,
                                const GeometryParams& geom, RateForm form) {
    geom.validate();
    if (geom.atom_count != atom_count)
        throw std::domain_error("large_sample_rate: geometry atom count mismatch");
    const double l = static_cast<double>(atom_count);
    if (form == RateForm::kExact)
        return 0.5 * l * (0.5 * l + 1.0) * geom.collective_fraction() * gamma;
    const double ratio = geom.wavelength / geom.spacing;
    return 3.0 / (32.0 * std::numbers::pi * std::numbers::pi) * ratio * ratio *
           std::pow(l, 4.0 / 3.0) * gamma;
}

// (3/16 pi)(lambda_a/d) L^(4/3) R Gamma / omega_a, taking the gate time as d/c.
inline RunBudget large_sample_budget(int atom_count, double gamma, double omega_a,
                                     double gate_count, double lambda_over_d,
                                     double threshold = kDefaultBudgetThreshold) {
    if (atom_count < 1 || !(gamma > 0.0) || !(omega_a > 0.0) || gate_count < 0.0 ||
        !(lambda_over_d > 0.0))
        throw std::domain_error("large_sample_budget: positive inputs required");
    const double l = static_cast<double>(atom_count);
    RunBudget budget{atom_count, gamma, omega_a, gate_count, 0.0, threshold, false};
    budget.value = 3.0 / (16.0 * std::numbers::pi) * lambda_over_d *
                   std::pow(l, 4.0 / 3.0) * gate_count * gamma / omega_a;
    budget.feasible = budget.value < threshold;
    return budget;
}

// Polynomial gate-count model R(L) = a L^b.
inline double polynomial_gate_count(int atom_count, double coefficient, double exponent) {
    return coefficient * std::pow(static_cast<double>(atom_count), exponent);
}

}  // namespace superrad

#include "superrad/dynamics.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace superrad {

double StateVector::norm2() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return acc;
}

StateVector symmetric_state(int atom_count, int twice_m) {
    require_inversion_valid(atom_count, twice_m);
    const int excited = (atom_count + twice_m) / 2;

    StateVector psi;
    psi.atom_count = atom_count;
    psi.amplitudes.assign(std::size_t{1} << atom_count, 0.0);
    std::size_t count = 0;
    for (std::uint32_t q = 0; q < psi.dim(); ++q)
        if (std::popcount(q) == excited) ++count;
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    for (std::uint32_t q = 0; q < psi.dim(); ++q)
        if (std::popcount(q) == excited) psi.amplitudes[q] = amp;
    return psi;
}

double dicke_rate(int atom_count, int twice_m, double gamma) {
    require_inversion_valid(atom_count, twice_m);
    const double half_l = 0.5 * atom_count;
    const double m = 0.5 * twice_m;
    return (half_l + m) * (half_l - m + 1.0) * gamma;
}

int default_steps(const CollectiveGenerator& gen, const DecayParams& params,
                  double t_end) {
    const double scale = gen.spectral_bound() * std::abs(params.kappa());
    const int steps = static_cast<int>(std::ceil(scale * t_end / 0.1));
    return std::max(steps, 16);
}

namespace {

void check_finite(std::span<const std::complex<double>> amps, double t) {
    for (const auto& a : amps)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::runtime_error(
                "evolve: non-finite amplitude at t=" + std::to_string(t) +
                "; reduce the step size (see default_steps)");
}

}  // namespace

Trajectory evolve(const StateVector& psi0, const CollectiveGenerator& gen,
                  const DecayParams& params, double t_end, int steps,
                  int store_every) {
    params.validate();
    if (psi0.dim() != gen.dim())
        throw std::invalid_argument("evolve: state/generator dimension mismatch");
    if (!(t_end > 0.0)) throw std::invalid_argument("evolve: t_end must be > 0");
    if (steps < 1) throw std::invalid_argument("evolve: steps must be >= 1");
    if (store_every < 1) store_every = 1;

    const std::complex<double> kappa = params.kappa();
    const double h = t_end / steps;
    const std::size_t n = gen.dim();

    std::vector<std::complex<double>> c = psi0.amplitudes;
    std::vector<std::complex<double>> k1(n), k2(n), k3(n), k4(n), tmp(n);

    Trajectory traj;
    traj.params = params;
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);

    auto deriv = [&](const std::vector<std::complex<double>>& in,
                     std::vector<std::complex<double>>& out) {
        gen.apply(in, out);
        for (std::size_t i = 0; i < n; ++i) out[i] *= -kappa;
    };

    for (int step = 1; step <= steps; ++step) {
        deriv(c, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * h * k1[i];
        deriv(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * h * k2[i];
        deriv(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + h * k3[i];
        deriv(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            c[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        const double t = step * h;
        check_finite(c, t);
        if (step % store_every == 0 || step == steps) {
            traj.times.push_back(t);
            traj.states.push_back({psi0.atom_count, c});
        }
    }
    return traj;
}

Trajectory evolve_exact(const StateVector& psi0, const CollectiveGenerator& gen,
                        const DecayParams& params, std::span<const double> times) {
    params.validate();
    if (gen.atom_count() > 8)
        throw std::length_error("evolve_exact: dense path limited to L <= 8");
    if (psi0.dim() != gen.dim())
        throw std::invalid_argument("evolve_exact: dimension mismatch");

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gen.dense());
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    const Eigen::VectorXd& values = solver.eigenvalues();

    const auto n = static_cast<Eigen::Index>(gen.dim());
    Eigen::VectorXcd c0(n);
    for (Eigen::Index i = 0; i < n; ++i) c0[i] = psi0.amplitudes[i];
    const Eigen::VectorXcd modes = vectors.transpose() * c0;

    const std::complex<double> kappa = params.kappa();
    Trajectory traj;
    traj.params = params;
    for (const double t : times) {
        Eigen::VectorXcd decayed(n);
        for (Eigen::Index i = 0; i < n; ++i)
            decayed[i] = modes[i] * std::exp(-kappa * values[i] * t);
        const Eigen::VectorXcd ct = vectors * decayed;
        StateVector psi;
        psi.atom_count = psi0.atom_count;
        psi.amplitudes.assign(ct.data(), ct.data() + n);
        traj.times.push_back(t);
        traj.states.push_back(std::move(psi));
    }
    return traj;
}

RateFit fit_decay_rate(std::span<const double> times,
                       std::span<const double> probabilities,
                       double window_begin, double window_end) {
    if (times.size() != probabilities.size())
        throw std::invalid_argument("fit_decay_rate: size mismatch");

    std::vector<double> t, y;  // y = -ln p
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window_begin || times[i] > window_end) continue;
        const double p = probabilities[i];
        if (!(p > 0.0))
            throw std::invalid_argument("fit_decay_rate: nonpositive probability");
        if (p < 1e-300) {
            std::cerr << "fit_decay_rate: dropping degenerate sample p=" << p
                      << " at t=" << times[i] << "\n";
            continue;
        }
        t.push_back(times[i]);
        y.push_back(-std::log(p));
    }
    if (t.size() < 3)
        throw std::invalid_argument("fit_decay_rate: need >= 3 samples in window");

    const double n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0)
        throw std::invalid_argument("fit_decay_rate: degenerate time samples");
    const double slope = (n * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / n;

    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - (intercept + slope * t[i]);
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

}  // namespace superrad

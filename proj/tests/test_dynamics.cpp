#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "superrad/dfs.hpp"
#include "superrad/dynamics.hpp"

using namespace superrad;

namespace {

StateVector random_unit_state(int l, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    StateVector psi;
    psi.atom_count = l;
    psi.amplitudes.resize(std::size_t{1} << l);
    for (auto& a : psi.amplitudes) a = {gauss(rng), gauss(rng)};
    const double norm = std::sqrt(psi.norm2());
    for (auto& a : psi.amplitudes) a /= norm;
    return psi;
}

}  // namespace

TEST_CASE("symmetric_state uniform amplitudes on one sector") {
    const StateVector top = symmetric_state(2, 2);
    CHECK(top.amplitudes[0b11] == std::complex<double>(1.0));
    CHECK(top.amplitudes[0b00] == std::complex<double>(0.0));

    const StateVector half = symmetric_state(2, 0);
    CHECK(half.amplitudes[0b01].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(half.amplitudes[0b10].real() == doctest::Approx(1.0 / std::sqrt(2.0)));

    const StateVector half4 = symmetric_state(4, 0);
    int support = 0;
    for (const auto& a : half4.amplitudes)
        if (std::abs(a) > 0) {
            CHECK(a.real() == doctest::Approx(1.0 / std::sqrt(6.0)));
            ++support;
        }
    CHECK(support == 6);
    CHECK(half4.norm2() == doctest::Approx(1.0));

    CHECK_THROWS_AS(symmetric_state(4, 1), std::domain_error);
    CHECK_THROWS_AS(symmetric_state(4, 6), std::domain_error);
}

TEST_CASE("dicke_rate reproduces the published special cases") {
    CHECK(dicke_rate(2, 2, 1.0) == doctest::Approx(2.0));   // M = L/2 -> L Gamma
    CHECK(dicke_rate(4, 0, 1.0) == doctest::Approx(6.0));   // (L/2)(L/2+1) Gamma
    CHECK(dicke_rate(6, -4, 1.0) == doctest::Approx(6.0));  // (3-2)(3+2+1)
    // single excited atom, M = -L/2 + 1 -> L Gamma
    for (int l = 2; l <= 10; l += 2)
        CHECK(dicke_rate(l, -l + 2, 1.0) == doctest::Approx(static_cast<double>(l)));
}

TEST_CASE("single atom decays as exp(-Gamma t)") {
    const auto gen = CollectiveGenerator::build(1);
    StateVector psi0{1, {0.0, 1.0}};
    const DecayParams params{1.0, 0.0, 1.0};
    const Trajectory traj = evolve(psi0, gen, params, 1.0, 2000);
    const double p = traj.states.back().norm2();
    CHECK(std::abs(p - std::exp(-1.0)) / std::exp(-1.0) < 1e-8);
}

TEST_CASE("doubly excited pair decays as exp(-2 Gamma t)") {
    const auto gen = CollectiveGenerator::build(2);
    StateVector psi0{2, {0.0, 0.0, 0.0, 1.0}};
    const DecayParams params{1.0, 0.0, 1.0};
    const Trajectory traj = evolve(psi0, gen, params, 1.0, 4000);
    const double p = traj.states.back().norm2();
    CHECK(std::abs(p - std::exp(-2.0)) / std::exp(-2.0) < 1e-8);
}

TEST_CASE("pair singlet is stationary under evolution") {
    const auto gen = CollectiveGenerator::build(2);
    const double r = 1.0 / std::sqrt(2.0);
    StateVector psi0{2, {0.0, -r, r, 0.0}};
    const DecayParams params{1.0, 0.3, 1.0};
    const Trajectory traj = evolve(psi0, gen, params, 2.0, 1000);
    for (std::size_t q = 0; q < 4; ++q)
        CHECK(std::abs(traj.states.back().amplitudes[q] - psi0.amplitudes[q]) < 1e-12);
}

TEST_CASE("evolve validates inputs") {
    const auto gen = CollectiveGenerator::build(2);
    StateVector bad{1, {1.0, 0.0}};
    const DecayParams params{1.0, 0.0, 1.0};
    CHECK_THROWS_AS(evolve(bad, gen, params, 1.0, 10), std::invalid_argument);
    StateVector ok{2, {1.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(evolve(ok, gen, params, -1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(evolve(ok, gen, params, 1.0, 0), std::invalid_argument);
}

TEST_CASE("RK4 truncation error shrinks ~16x under step halving") {
    const auto gen = CollectiveGenerator::build(3);
    const DecayParams params{1.0, 0.0, 1.0};
    std::mt19937_64 rng(7);
    const StateVector psi0 = random_unit_state(3, rng);
    const std::vector<double> t{0.5};
    const Trajectory exact = evolve_exact(psi0, gen, params, t);

    auto error_with = [&](int steps) {
        const Trajectory traj = evolve(psi0, gen, params, 0.5, steps, steps);
        double err = 0.0;
        for (std::size_t q = 0; q < psi0.dim(); ++q)
            err = std::max(err, std::abs(traj.states.back().amplitudes[q] -
                                         exact.states.back().amplitudes[q]));
        return err;
    };
    const double coarse = error_with(40);
    const double fine = error_with(80);
    CHECK(coarse / fine > 12.0);
    CHECK(coarse / fine < 20.0);
}

TEST_CASE("evolve_exact matches evolve for L=4 random state") {
    const auto gen = CollectiveGenerator::build(4);
    const DecayParams params{1.0, 0.2, 1.0};
    std::mt19937_64 rng(11);
    const StateVector psi0 = random_unit_state(4, rng);
    const Trajectory rk = evolve(psi0, gen, params, 2.0, 2000, 2000);
    const std::vector<double> t{2.0};
    const Trajectory exact = evolve_exact(psi0, gen, params, t);
    for (std::size_t q = 0; q < psi0.dim(); ++q)
        CHECK(std::abs(rk.states.back().amplitudes[q] -
                       exact.states.back().amplitudes[q]) < 1e-7);
}

TEST_CASE("evolve_exact single excited atom is a pure exponential") {
    const auto gen = CollectiveGenerator::build(1);
    StateVector psi0{1, {0.0, 1.0}};
    const DecayParams params{2.0, 0.5, 1.0};
    const std::vector<double> t{0.0, 0.7};
    const Trajectory traj = evolve_exact(psi0, gen, params, t);
    const std::complex<double> expected =
        std::exp(-std::complex<double>(1.0, 0.5) * 0.7);
    CHECK(std::abs(traj.states[1].amplitudes[1] - expected) < 1e-14);
}

TEST_CASE("evolve_exact refuses the dense path above L = 8") {
    const auto gen = CollectiveGenerator::build(9);
    StateVector psi0;
    psi0.atom_count = 9;
    psi0.amplitudes.assign(1u << 9, 0.0);
    psi0.amplitudes[0] = 1.0;
    const DecayParams params{1.0, 0.0, 1.0};
    CHECK_THROWS_AS((void)evolve_exact(psi0, gen, params, std::vector<double>{0.1}),
                    std::length_error);
}

TEST_CASE("pair generator spectrum is {0, 0, 2, 2}") {
    const auto gen = CollectiveGenerator::build(2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gen.dense());
    const Eigen::VectorXd v = solver.eigenvalues();
    CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v[2] == doctest::Approx(2.0));
    CHECK(v[3] == doctest::Approx(2.0));
}

TEST_CASE("symmetric states are eigenvectors with the Dicke eigenvalue") {
    for (int l = 2; l <= 8; ++l) {
        const auto gen = CollectiveGenerator::build(l);
        for (int tm = -l; tm <= l; tm += 2) {
            const StateVector psi = symmetric_state(l, tm);
            std::vector<std::complex<double>> image(psi.dim());
            gen.apply(psi.amplitudes, image);
            const double eigenvalue = dicke_rate(l, tm, 1.0);
            for (std::size_t q = 0; q < psi.dim(); ++q)
                CHECK(std::abs(image[q] - eigenvalue * psi.amplitudes[q]) < 1e-12);
        }
    }
}

TEST_CASE("fit_decay_rate on synthetic data") {
    std::vector<double> t, p;
    for (int i = 0; i < 10; ++i) {
        t.push_back(0.01 * i + 0.001);
        p.push_back(std::exp(-3.0 * t.back()));
    }
    const RateFit fit = fit_decay_rate(t, p, 0.0, 0.1);
    CHECK(std::abs(fit.rate - 3.0) < 1e-9);
    CHECK(fit.residual_rms < 1e-12);

    std::vector<double> ones(t.size(), 1.0);
    CHECK(fit_decay_rate(t, ones, 0.0, 0.1).rate == doctest::Approx(0.0));

    std::vector<double> bad{1.0, 0.5, -0.1};
    CHECK_THROWS_AS(fit_decay_rate(t, p, 0.09, 0.095), std::invalid_argument);
    CHECK_THROWS_AS(fit_decay_rate(std::vector<double>{0, 1, 2}, bad, 0.0, 2.0),
                    std::invalid_argument);
}

TEST_CASE("short-window fit matches the analytic Dicke rate") {
    const DecayParams params{1.0, 0.0, 1.0};
    for (int l : {2, 4, 6, 8, 10}) {
        const auto gen = CollectiveGenerator::build(l);
        const StateVector psi0 = symmetric_state(l, 0);
        const double rate = dicke_rate(l, 0, params.gamma);
        const double t_end = 0.01 / rate;
        const int steps = std::max(default_steps(gen, params, t_end), 200);
        const Trajectory traj = evolve(psi0, gen, params, t_end, steps,
                                       std::max(steps / 100, 1));
        std::vector<double> norms;
        for (const auto& s : traj.states) norms.push_back(s.norm2());
        const RateFit fit = fit_decay_rate(traj.times, norms, 0.0, t_end);
        CHECK(std::abs(fit.rate - rate) / rate < 0.01);
    }
}

TEST_CASE("property: norm monotone, sectors confined, phases drop out") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 25; ++rep) {
        const int l = 2 + static_cast<int>(rng() % 4);
        const auto gen = CollectiveGenerator::build(l);
        const StateVector psi0 = random_unit_state(l, rng);
        const DecayParams plain{1.0, 0.0, 1.0};
        const DecayParams shifted{1.0, 10.0, 1.0};
        const int steps = std::max(default_steps(gen, plain, 0.5), 400);
        const Trajectory a = evolve(psi0, gen, plain, 0.5, steps, steps / 8);

        double prev = a.states.front().norm2();
        for (const auto& s : a.states) {
            CHECK(s.norm2() <= prev + 1e-10);
            prev = s.norm2();
        }
        // The detuning contributes only phases, so the surviving norm (a sum
        // over orthogonal eigenspaces) cannot depend on it. Compare with the
        // exact propagator so solver truncation error does not enter.
        const std::vector<double> sample_times{0.0, 0.1, 0.25, 0.5};
        const Trajectory xa = evolve_exact(psi0, gen, plain, sample_times);
        const Trajectory xb = evolve_exact(psi0, gen, shifted, sample_times);
        for (std::size_t i = 0; i < xa.states.size(); ++i)
            CHECK(std::abs(xa.states[i].norm2() - xb.states[i].norm2()) < 1e-12);

        // Within a single eigenspace the detuning phase is global, so every
        // individual probability is detuning-independent as well. Sample the
        // degenerate kernel of A with a random vector.
        StateVector kernel = psi0;
        const auto perp = nonkernel_component(psi0, gen);
        for (std::uint32_t q = 0; q < kernel.dim(); ++q)
            kernel.amplitudes[q] -= perp[q];
        if (kernel.norm2() > 1e-6) {
            const Trajectory ka = evolve_exact(kernel, gen, plain, sample_times);
            const Trajectory kb = evolve_exact(kernel, gen, shifted, sample_times);
            for (std::size_t i = 0; i < ka.states.size(); ++i)
                for (std::uint32_t q = 0; q < kernel.dim(); ++q)
                    CHECK(std::abs(std::norm(ka.states[i].amplitudes[q]) -
                                   std::norm(kb.states[i].amplitudes[q])) < 1e-8);
        }

        // Same statement for a nonzero eigenvalue: symmetric states are exact
        // eigenvectors.
        const StateVector sym = symmetric_state(l, l - 2);
        const Trajectory sa = evolve_exact(sym, gen, plain, sample_times);
        const Trajectory sb = evolve_exact(sym, gen, shifted, sample_times);
        for (std::size_t i = 0; i < sa.states.size(); ++i)
            for (std::uint32_t q = 0; q < sym.dim(); ++q)
                CHECK(std::abs(std::norm(sa.states[i].amplitudes[q]) -
                               std::norm(sb.states[i].amplitudes[q])) < 1e-8);

        // Restrict the state to one excitation sector and verify confinement.
        const int keep_excited = l / 2;
        StateVector sector = psi0;
        for (std::uint32_t q = 0; q < sector.dim(); ++q)
            if (std::popcount(q) != keep_excited) sector.amplitudes[q] = 0.0;
        const Trajectory c = evolve(sector, gen, plain, 0.3, steps, steps);
        for (std::uint32_t q = 0; q < sector.dim(); ++q)
            if (std::popcount(q) != keep_excited)
                CHECK(std::abs(c.states.back().amplitudes[q]) < 1e-12);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "imperfections.hpp"
#include "observables.hpp"
#include "test_util.hpp"

using namespace qsaw;
using test::max_amp_diff;
using test::random_state;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// sigma_z eigenvalue of qubit i for basis index j (qubit 0 = MSB).
double z_eigen(std::uint64_t j, int i, int n_q) {
    return ((j >> (n_q - 1 - i)) & 1ULL) ? -1.0 : 1.0;
}

// Dense H_s = sum_i delta_i sigma_z^i + sum_p J_p sigma_x^p sigma_x^{p+1}.
test::cmat dense_hamiltonian(const ImperfectionRealization& r) {
    const int n_q = r.qubits();
    const std::uint64_t n = 1ULL << n_q;
    test::cmat h(n, std::vector<cd>(n, cd{0.0, 0.0}));
    for (std::uint64_t j = 0; j < n; ++j)
        for (int i = 0; i < n_q; ++i) h[j][j] += r.detunings[i] * z_eigen(j, i, n_q);
    for (int p = 0; p + 1 < n_q; ++p) {
        const std::uint64_t mask =
            (1ULL << (n_q - 1 - p)) | (1ULL << (n_q - 1 - (p + 1)));
        for (std::uint64_t j = 0; j < n; ++j) h[j][j ^ mask] += r.couplings[p];
    }
    return h;
}

} // namespace

TEST_CASE("config consistency and validation") {
    ImperfectionConfig cfg = ImperfectionConfig::from_epsilon(1e-3, false);
    CHECK(cfg.delta == doctest::Approx(1e-3));
    CHECK(cfg.coupling == 0.0);
    CHECK(cfg.epsilon == doctest::Approx(cfg.delta * cfg.tau_g).epsilon(1e-15));

    ImperfectionConfig jd = ImperfectionConfig::from_epsilon(2e-3, true, 0.5);
    CHECK(jd.delta == doctest::Approx(4e-3));
    CHECK(jd.coupling == doctest::Approx(4e-3));

    CHECK_THROWS_AS(ImperfectionConfig::make(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ImperfectionConfig::make(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("zero disorder samples to the zero realization") {
    ImperfectionConfig cfg = ImperfectionConfig::make(0.0, 0.0);
    ImperfectionRealization r = sample_realization(5, cfg, 42u);
    for (double d : r.detunings) CHECK(d == 0.0);
    for (double j : r.couplings) CHECK(j == 0.0);
    CHECK_FALSE(r.has_coupling());
}

TEST_CASE("sampling is deterministic in the seed and respects the bounds") {
    ImperfectionConfig cfg = ImperfectionConfig::make(1e-2, 1e-2);
    ImperfectionRealization a = sample_realization(8, cfg, 7u);
    ImperfectionRealization b = sample_realization(8, cfg, 7u);
    CHECK(a.detunings == b.detunings);
    CHECK(a.couplings == b.couplings);

    ImperfectionRealization c = sample_realization(8, cfg, 8u);
    CHECK(a.detunings != c.detunings);

    for (double d : a.detunings) CHECK(std::abs(d) <= 5e-3);
    for (double j : a.couplings) CHECK(std::abs(j) <= 1e-2);
    CHECK(a.detunings.size() == 8);
    CHECK(a.couplings.size() == 7);
}

TEST_CASE("detuning draws have the uniform-law mean") {
    const double delta = 0.02;
    ImperfectionConfig cfg = ImperfectionConfig::make(delta, 0.0);
    double sum = 0.0;
    const int draws = 10000;
    Rng rng(2718);
    for (int i = 0; i < draws; ++i) {
        ImperfectionRealization r = sample_realization(1, cfg, rng);
        sum += r.detunings[0];
    }
    const double sigma_mean = delta / std::sqrt(12.0) / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(sum / draws) < 3.0 * sigma_mean);
}

TEST_CASE("no imperfections, no evolution") {
    ImperfectionConfig cfg = ImperfectionConfig::make(0.0, 0.0);
    ImperfectionRealization r = sample_realization(4, cfg, 1u);
    StateVector psi = random_state(4, 3);
    StateVector orig = psi;
    intergate_evolution(psi, r, 1.0);
    CHECK(max_amp_diff(psi, orig) == 0.0);
}

TEST_CASE("single qubit detuning phases a sigma_z eigenstate") {
    ImperfectionRealization r;
    r.detunings = {0.37};
    const double tau = 0.8;
    StateVector psi(1, 0);
    intergate_evolution(psi, r, tau);
    CHECK(std::abs(psi[0] - std::polar(1.0, -0.37 * tau)) < 1e-15);

    StateVector one(1, 1);
    intergate_evolution(one, r, tau);
    CHECK(std::abs(one[1] - std::polar(1.0, 0.37 * tau)) < 1e-15);
}

TEST_CASE("two-qubit split against the dense exponential oracle") {
    ImperfectionConfig cfg = ImperfectionConfig::make(0.05, 0.05);
    ImperfectionRealization r = sample_realization(2, cfg, 99u);
    REQUIRE(r.has_coupling());
    const double tau = 1.0;

    StateVector psi = random_state(2, 12);
    std::vector<cd> ref = test::matvec(test::expm_minus_i(dense_hamiltonian(r), tau),
                                       psi.amplitudes());
    intergate_evolution(psi, r, tau);

    double hmax = 0.0;
    for (double d : r.detunings) hmax = std::max(hmax, std::abs(d));
    for (double j : r.couplings) hmax = std::max(hmax, std::abs(j));
    const double bound = std::pow(hmax * tau, 3.0);
    for (std::uint64_t j = 0; j < psi.size(); ++j)
        CHECK(std::abs(psi[j] - ref[j]) < bound);
}

TEST_CASE("three-qubit one-slot splitting error bound") {
    ImperfectionConfig cfg = ImperfectionConfig::make(0.08, 0.08);
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        ImperfectionRealization r = sample_realization(3, cfg, seed);
        const double tau = 1.0;
        StateVector psi = random_state(3, seed + 1);
        std::vector<cd> ref = test::matvec(test::expm_minus_i(dense_hamiltonian(r), tau),
                                           psi.amplitudes());
        intergate_evolution(psi, r, tau);

        double hmax = 0.0;
        for (double d : r.detunings) hmax = std::max(hmax, std::abs(d));
        for (double j : r.couplings) hmax = std::max(hmax, std::abs(j));
        double worst = 0.0;
        for (std::uint64_t j = 0; j < psi.size(); ++j)
            worst = std::max(worst, std::abs(psi[j] - ref[j]));
        CHECK(worst < 10.0 * std::pow(hmax * tau, 3.0));
    }
}

TEST_CASE("coupling-free realization takes the exact diagonal path") {
    ImperfectionConfig cfg = ImperfectionConfig::make(1e-3, 0.0);
    ImperfectionRealization r = sample_realization(5, cfg, 5u);
    StateVector a = random_state(5, 6);
    StateVector b = a;
    intergate_evolution(a, r, 1.0);
    const std::vector<double> z = detail::zsum_table(r);
    detail::intergate_diagonal(b, z, 1.0);
    CHECK(max_amp_diff(a, b) == 0.0);
}

TEST_CASE("noisy iteration at epsilon = 0 equals the noiseless program exactly") {
    MapParams p = MapParams::from_chaos(5, 2.0, kSqrt2, 0);
    GateProgram prog = compile_program(p);
    ImperfectionConfig cfg = ImperfectionConfig::from_epsilon(0.0, false);
    ImperfectionRealization r = sample_realization(5, cfg, 3u);

    StateVector noisy = random_state(5, 8);
    StateVector clean = noisy;
    noisy_iteration(noisy, prog, r, cfg);
    apply_program(clean, prog);
    CHECK(max_amp_diff(noisy, clean) == 0.0);
}

TEST_CASE("norm drift under 300 noisy iterations stays below 1e-11") {
    MapParams p = MapParams::from_chaos(5, 2.0, kSqrt2, 0);
    GateProgram prog = compile_program(p);
    ImperfectionConfig cfg = ImperfectionConfig::from_epsilon(1e-2, true);
    ImperfectionRealization r = sample_realization(5, cfg, 21u);

    StateVector psi(5, 0);
    for (int t = 0; t < 300; ++t) noisy_iteration(psi, prog, r, cfg);
    CHECK(std::abs(psi.norm2() - 1.0) < 1e-11);
}

TEST_CASE("fidelity loss grows as epsilon^2") {
    MapParams p = MapParams::from_chaos(5, 2.0, kSqrt2, 0);
    GateProgram prog = compile_program(p);
    const int t_steps = 10;

    StateVector clean(5, 0);
    for (int t = 0; t < t_steps; ++t) apply_program(clean, prog);

    std::vector<double> eps = {1e-5, 2e-5, 5e-5, 1e-4};
    std::vector<double> loss;
    for (double e : eps) {
        ImperfectionConfig cfg = ImperfectionConfig::from_epsilon(e, false);
        ImperfectionRealization r = sample_realization(5, cfg, 77u);
        StateVector psi(5, 0);
        for (int t = 0; t < t_steps; ++t) noisy_iteration(psi, prog, r, cfg);
        cd overlap{0.0, 0.0};
        for (std::uint64_t j = 0; j < psi.size(); ++j)
            overlap += std::conj(clean[j]) * psi[j];
        loss.push_back(1.0 - std::norm(overlap));
    }
    for (std::size_t i = 0; i + 1 < loss.size(); ++i) CHECK(loss[i] < loss[i + 1]);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        lx.push_back(std::log(eps[i]));
        ly.push_back(std::log(loss[i]));
    }
    const LineFit lf = fit_line(lx, ly);
    CHECK(lf.slope > 1.7);
    CHECK(lf.slope < 2.3);
}

TEST_CASE("precompiled evolver matches the slot-by-slot iteration") {
    MapParams p = MapParams::from_chaos(5, 2.0, kSqrt2, 0);
    GateProgram prog = compile_program(p);
    for (bool coupled : {false, true}) {
        ImperfectionConfig cfg = ImperfectionConfig::from_epsilon(3e-3, coupled);
        ImperfectionRealization r = sample_realization(5, cfg, 13u);
        NoisyEvolver fast(prog, r, cfg);
        StateVector a = random_state(5, 10);
        StateVector b = a;
        for (int t = 0; t < 20; ++t) {
            fast.iterate(a);
            noisy_iteration(b, prog, r, cfg);
        }
        CHECK(max_amp_diff(a, b) < 1e-12);
    }
}

TEST_CASE("weak imperfections preserve the peak and lift the far tails") {
    // Probability distributions at t = 100 for k = 2, n_q = 11, J = 0.
    MapParams p = MapParams::from_chaos(11, 2.0, kSqrt2, 0);
    GateProgram prog = compile_program(p);

    auto run = [&](double eps) {
        ImperfectionConfig cfg = ImperfectionConfig::from_epsilon(eps, false);
        ImperfectionRealization r = sample_realization(11, cfg, 4242u);
        NoisyEvolver evolver(prog, r, cfg);
        StateVector psi(11, 0);
        for (int t = 0; t < 100; ++t) evolver.iterate(psi);
        return distribution(psi);
    };

    MomentumDistribution clean = run(0.0);
    MomentumDistribution weak = run(1e-4);
    MomentumDistribution strong = run(1e-2);

    double peak_clean = 0.0, peak_weak = 0.0;
    for (int n = -5; n <= 5; ++n) {
        peak_clean += clean.at(n);
        peak_weak += weak.at(n);
    }
    CHECK(peak_weak > 0.5 * peak_clean);

    double tail_clean = 0.0, tail_weak = 0.0;
    for (int n = 400; n < 1024; ++n) {
        tail_clean += clean.at(n) + clean.at(-n);
        tail_weak += weak.at(n) + weak.at(-n);
    }
    CHECK(tail_weak > 10.0 * tail_clean);

    // strong imperfections: no localization peak left, spread ~ the full basis
    CHECK(ipr(strong) > 512.0);
    FitResult fit = fit_localization_length(strong, 0);
    if (fit.ok) CHECK(fit.value > 100.0);
}

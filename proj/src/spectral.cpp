#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <lapacke.h>

namespace qsaw {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

FloquetMatrix build_floquet_matrix(const MapParams& p, const ImperfectionRealization& r,
                                   const ImperfectionConfig& cfg, std::uint64_t dense_cap) {
    if (p.levels > dense_cap)
        throw std::runtime_error("dense Floquet construction capped at N = " +
                                 std::to_string(dense_cap));
    if (r.qubits() != p.n_q) throw std::invalid_argument("params/realization mismatch");

    const GateProgram prog = compile_program(p);
    FloquetMatrix m;
    m.n = p.levels;
    m.u.assign(m.n * m.n, cd{0.0, 0.0});
    m.params = p;
    m.epsilon = cfg.epsilon;
    m.seed = r.seed;
    for (std::uint64_t col = 0; col < m.n; ++col) {
        StateVector psi(p.n_q, col);
        noisy_iteration(psi, prog, r, cfg);
        for (std::uint64_t row = 0; row < m.n; ++row) m.u[row * m.n + col] = psi[row];
    }
    return m;
}

double unitarity_defect(const FloquetMatrix& m) {
    const std::uint64_t n = m.n;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) {
            cd acc{0.0, 0.0};
            for (std::uint64_t k = 0; k < n; ++k)
                acc += std::conj(m.u[k * n + i]) * m.u[k * n + j];
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

FloquetSpectrum eigenphases(const FloquetMatrix& m) {
    const lapack_int n = static_cast<lapack_int>(m.n);
    std::vector<cd> a = m.u; // zgeev overwrites its input
    std::vector<cd> w(m.n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_ROW_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, n, nullptr, n);
    if (info != 0)
        throw std::runtime_error("zgeev failed (info = " + std::to_string(info) +
                                 ") for N = " + std::to_string(m.n) +
                                 ", epsilon = " + std::to_string(m.epsilon) +
                                 ", seed = " + std::to_string(m.seed));

    FloquetSpectrum spec;
    spec.phases.reserve(m.n);
    for (const cd& z : w) {
        spec.modulus_defect = std::max(spec.modulus_defect, std::abs(std::abs(z) - 1.0));
        double phi = std::arg(z);
        if (phi <= -kPi) phi += 2.0 * kPi;
        spec.phases.push_back(phi);
    }
    std::sort(spec.phases.begin(), spec.phases.end());
    return spec;
}

std::vector<double> spacings(const FloquetSpectrum& spec) {
    const std::size_t n = spec.phases.size();
    if (n < 2) throw std::invalid_argument("need at least 2 eigenphases");
    const double scale = static_cast<double>(n) / (2.0 * kPi);
    std::vector<double> s;
    s.reserve(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        s.push_back((spec.phases[i + 1] - spec.phases[i]) * scale);
    s.push_back((spec.phases.front() + 2.0 * kPi - spec.phases.back()) * scale);
    return s;
}

double poisson_pdf(double s) {
    if (s < 0.0) throw std::invalid_argument("spacing must be >= 0");
    return std::exp(-s);
}

double wigner_dyson_pdf(double s) {
    if (s < 0.0) throw std::invalid_argument("spacing must be >= 0");
    return 32.0 * s * s / (kPi * kPi) * std::exp(-4.0 * s * s / kPi);
}

double poisson_cdf(double s) {
    if (s < 0.0) throw std::invalid_argument("spacing must be >= 0");
    return 1.0 - std::exp(-s);
}

double wigner_dyson_cdf(double s) {
    if (s < 0.0) throw std::invalid_argument("spacing must be >= 0");
    return std::erf(2.0 * s / std::sqrt(kPi)) - 4.0 * s / kPi * std::exp(-4.0 * s * s / kPi);
}

SpacingStats statistics_test(const std::vector<std::vector<double>>& pooled,
                             bool allow_low_statistics, std::uint64_t min_count) {
    std::vector<double> all;
    for (const auto& set : pooled) all.insert(all.end(), set.begin(), set.end());
    if (all.size() < 2) throw std::invalid_argument("no spacings to pool");
    if (all.size() < min_count && !allow_low_statistics)
        throw std::invalid_argument("only " + std::to_string(all.size()) +
                                    " spacings pooled; need " + std::to_string(min_count));
    std::sort(all.begin(), all.end());

    SpacingStats st;
    st.count = all.size();
    st.low_statistics = all.size() < min_count;

    constexpr int kBins = 40;
    constexpr double kRange = 4.0;
    st.hist.edges.resize(kBins + 1);
    for (int b = 0; b <= kBins; ++b) st.hist.edges[b] = kRange * b / kBins;
    st.hist.density.assign(kBins, 0.0);
    for (double s : all) {
        const int b = std::min(kBins - 1, static_cast<int>(s / kRange * kBins));
        st.hist.density[b] += 1.0;
    }
    const double norm = static_cast<double>(all.size()) * (kRange / kBins);
    for (double& d : st.hist.density) d /= norm;
    st.hist.count = all.size();

    const double inv = 1.0 / static_cast<double>(all.size());
    double dp = 0.0, dw = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const double below = static_cast<double>(i) * inv;
        const double above = static_cast<double>(i + 1) * inv;
        const double fp = poisson_cdf(all[i]);
        const double fw = wigner_dyson_cdf(all[i]);
        dp = std::max({dp, std::abs(fp - below), std::abs(fp - above)});
        dw = std::max({dw, std::abs(fw - below), std::abs(fw - above)});
    }
    st.d_poisson = dp;
    st.d_wigner = dw;
    return st;
}

} // namespace qsaw

#include "state_vector.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsaw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit(const StateVector& psi, int q) {
    if (q < 0 || q >= psi.qubits())
        throw std::invalid_argument("qubit index " + std::to_string(q) +
                                    " out of range for " + std::to_string(psi.qubits()) +
                                    " qubits");
}

} // namespace

StateVector::StateVector(int n_q, std::uint64_t j) : n_q_(n_q) {
    if (n_q < 1 || n_q > 30)
        throw std::invalid_argument("qubit count must be in [1, 30]");
    const std::uint64_t n = 1ULL << n_q;
    if (j >= n)
        throw std::invalid_argument("basis index " + std::to_string(j) +
                                    " out of range for " + std::to_string(n_q) + " qubits");
    amp_.assign(n, cd{0.0, 0.0});
    amp_[j] = cd{1.0, 0.0};
}

double StateVector::norm2() const {
    double s = 0.0;
    for (const cd& a : amp_) s += a.real() * a.real() + a.imag() * a.imag();
    return s;
}

void apply_hadamard(StateVector& psi, int q) {
    check_qubit(psi, q);
    const std::uint64_t m = psi.mask(q);
    const std::uint64_t lo = m - 1;
    const std::uint64_t half = psi.size() >> 1;
    cd* a = psi.data();
    for (std::uint64_t i = 0; i < half; ++i) {
        const std::uint64_t i0 = ((i & ~lo) << 1) | (i & lo);
        const std::uint64_t i1 = i0 | m;
        const double ur = a[i0].real(), ui = a[i0].imag();
        const double vr = a[i1].real(), vi = a[i1].imag();
        a[i0] = cd{(ur + vr) * kInvSqrt2, (ui + vi) * kInvSqrt2};
        a[i1] = cd{(ur - vr) * kInvSqrt2, (ui - vi) * kInvSqrt2};
    }
}

void apply_phase(StateVector& psi, int q, double phi) {
    check_qubit(psi, q);
    const std::uint64_t m = psi.mask(q);
    const std::uint64_t lo = m - 1;
    const std::uint64_t half = psi.size() >> 1;
    const double c = std::cos(phi), s = std::sin(phi);
    cd* a = psi.data();
    for (std::uint64_t i = 0; i < half; ++i) {
        const std::uint64_t i1 = (((i & ~lo) << 1) | (i & lo)) | m;
        const double r = a[i1].real(), im = a[i1].imag();
        a[i1] = cd{r * c - im * s, r * s + im * c};
    }
}

void apply_controlled_phase(StateVector& psi, int q1, int q2, double phi) {
    check_qubit(psi, q1);
    check_qubit(psi, q2);
    if (q1 == q2) throw std::invalid_argument("controlled phase needs two distinct qubits");
    const std::uint64_t ma = psi.mask(q1), mb = psi.mask(q2);
    const std::uint64_t mlo = ma < mb ? ma : mb;
    const std::uint64_t mhi = ma < mb ? mb : ma;
    const std::uint64_t lo_mask = mlo - 1;
    const std::uint64_t mid_mask = (mhi >> 1) - 1 - lo_mask;
    const std::uint64_t quarter = psi.size() >> 2;
    const double c = std::cos(phi), s = std::sin(phi);
    cd* a = psi.data();
    for (std::uint64_t i = 0; i < quarter; ++i) {
        const std::uint64_t base = ((i & ~(lo_mask | mid_mask)) << 2) |
                                   ((i & mid_mask) << 1) | (i & lo_mask);
        const std::uint64_t i11 = base | mlo | mhi;
        const double r = a[i11].real(), im = a[i11].imag();
        a[i11] = cd{r * c - im * s, r * s + im * c};
    }
}

void apply_gate(StateVector& psi, const Gate& g) {
    switch (g.kind) {
    case Gate::Kind::Hadamard: apply_hadamard(psi, g.q1); break;
    case Gate::Kind::Phase: apply_phase(psi, g.q1, g.phi); break;
    case Gate::Kind::ControlledPhase: apply_controlled_phase(psi, g.q1, g.q2, g.phi); break;
    }
}

void apply_diagonal(StateVector& psi, std::span<const double> phases) {
    if (phases.size() != psi.size())
        throw std::invalid_argument("diagonal phase array has length " +
                                    std::to_string(phases.size()) + ", state has " +
                                    std::to_string(psi.size()));
    cd* a = psi.data();
    for (std::uint64_t j = 0; j < psi.size(); ++j) {
        const double c = std::cos(phases[j]), s = std::sin(phases[j]);
        const double r = a[j].real(), im = a[j].imag();
        a[j] = cd{r * c - im * s, r * s + im * c};
    }
}

void apply_phase_factors(StateVector& psi, std::span<const cd> factors) {
    if (factors.size() != psi.size())
        throw std::invalid_argument("phase factor array length mismatch");
    cd* a = psi.data();
    const cd* f = factors.data();
    for (std::uint64_t j = 0; j < psi.size(); ++j) {
        const double r = a[j].real(), im = a[j].imag();
        const double c = f[j].real(), s = f[j].imag();
        a[j] = cd{r * c - im * s, r * s + im * c};
    }
}

void apply_global_phase(StateVector& psi, double phi) {
    if (phi == 0.0) return;
    const double c = std::cos(phi), s = std::sin(phi);
    cd* a = psi.data();
    for (std::uint64_t j = 0; j < psi.size(); ++j) {
        const double r = a[j].real(), im = a[j].imag();
        a[j] = cd{r * c - im * s, r * s + im * c};
    }
}

void fourier(StateVector& psi, Direction dir) {
    cd* a = psi.data();
    const std::uint64_t n = psi.size();
    if (n == 1) return;

    for (std::uint64_t i = 1, j = 0; i < n; ++i) {
        std::uint64_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double sgn = (dir == Direction::Forward) ? 1.0 : -1.0;
    std::vector<cd> tw(n / 2);
    for (std::uint64_t k = 0; k < n / 2; ++k)
        tw[k] = std::polar(1.0, sgn * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));

    for (std::uint64_t len = 2; len <= n; len <<= 1) {
        const std::uint64_t stride = n / len;
        for (std::uint64_t i = 0; i < n; i += len) {
            for (std::uint64_t j = 0; j < len / 2; ++j) {
                const cd w = tw[j * stride];
                const cd u = a[i + j];
                const cd v = {a[i + j + len / 2].real() * w.real() -
                                  a[i + j + len / 2].imag() * w.imag(),
                              a[i + j + len / 2].real() * w.imag() +
                                  a[i + j + len / 2].imag() * w.real()};
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t j = 0; j < n; ++j) a[j] *= scale;
}

void dft_oracle(StateVector& psi, Direction dir) {
    const std::uint64_t n = psi.size();
    const double sgn = (dir == Direction::Forward) ? 1.0 : -1.0;
    std::vector<cd> roots(n);
    for (std::uint64_t k = 0; k < n; ++k)
        roots[k] = std::polar(1.0, sgn * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));

    const cd* a = psi.data();
    std::vector<cd> out(n, cd{0.0, 0.0});
    for (std::uint64_t j = 0; j < n; ++j) {
        cd acc{0.0, 0.0};
        for (std::uint64_t m = 0; m < n; ++m) acc += roots[(j * m) % n] * a[m];
        out[j] = acc / std::sqrt(static_cast<double>(n));
    }
    psi.amplitudes() = std::move(out);
}

} // namespace qsaw

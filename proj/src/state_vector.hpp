#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qsaw {

using cd = std::complex<double>;

// Elementary gate set: Hadamard, single-qubit phase, symmetric controlled
// phase. Qubit 0 is the most significant bit of the basis index.
struct Gate {
    enum class Kind { Hadamard, Phase, ControlledPhase };

    Kind kind = Kind::Hadamard;
    int q1 = 0;
    int q2 = 0;
    double phi = 0.0;

    static Gate hadamard(int q) { return {Kind::Hadamard, q, q, 0.0}; }
    static Gate phase(int q, double phi) { return {Kind::Phase, q, q, phi}; }
    static Gate controlled_phase(int q1, int q2, double phi) {
        return {Kind::ControlledPhase, q1, q2, phi};
    }
};

// Dense amplitude vector of an n_q-qubit register over the computational
// (momentum) basis, index j in [0, 2^n_q).
class StateVector {
public:
    // Basis state |j>.
    StateVector(int n_q, std::uint64_t j);

    int qubits() const { return n_q_; }
    std::uint64_t size() const { return amp_.size(); }

    cd* data() { return amp_.data(); }
    const cd* data() const { return amp_.data(); }
    std::vector<cd>& amplitudes() { return amp_; }
    const std::vector<cd>& amplitudes() const { return amp_; }

    cd& operator[](std::uint64_t j) { return amp_[j]; }
    const cd& operator[](std::uint64_t j) const { return amp_[j]; }

    // Sum of |a_j|^2.
    double norm2() const;

    // Bit mask of qubit q (qubit 0 = most significant bit).
    std::uint64_t mask(int q) const { return 1ULL << (n_q_ - 1 - q); }

private:
    int n_q_;
    std::vector<cd> amp_;
};

void apply_hadamard(StateVector& psi, int q);
void apply_phase(StateVector& psi, int q, double phi);
void apply_controlled_phase(StateVector& psi, int q1, int q2, double phi);
void apply_gate(StateVector& psi, const Gate& g);

// a_j *= exp(i * phases[j])
void apply_diagonal(StateVector& psi, std::span<const double> phases);

// a_j *= factors[j]; factors are expected to be unit modulus.
void apply_phase_factors(StateVector& psi, std::span<const cd> factors);

void apply_global_phase(StateVector& psi, double phi);

enum class Direction { Forward, Inverse };

// Unitary discrete Fourier transform, forward convention
//   b_j = (1/sqrt(N)) sum_m exp(+2*pi*i*j*m/N) a_m,
// inverse is the adjoint. Radix-2, N must be a power of two.
void fourier(StateVector& psi, Direction dir);

// Same transform evaluated as the dense N^2 matrix sum. Reference
// implementation used to validate the fast path and the gate-level QFT.
void dft_oracle(StateVector& psi, Direction dir);

} // namespace qsaw

#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "sawtooth.hpp"
#include "state_vector.hpp"

namespace qsaw {

// Static-imperfection model of the qubit chain: detunings delta_i sigma_z and
// nearest-neighbor couplings J_ij sigma_x sigma_x, acting for a time tau_g
// between consecutive gates. The mean one-qubit spacing delta0 is recorded but
// removed from the dynamics (spin echo). Only epsilon = delta * tau_g matters
// when the couplings vanish.
struct ImperfectionConfig {
    double delta = 0.0;    // detuning half-width
    double coupling = 0.0; // J bound
    double tau_g = 1.0;
    double epsilon = 0.0;  // delta * tau_g
    double delta0 = 0.0;

    static ImperfectionConfig make(double delta, double coupling, double tau_g = 1.0,
                                   double delta0 = 0.0);
    // delta = epsilon / tau_g, coupling either 0 or equal to delta.
    static ImperfectionConfig from_epsilon(double epsilon, bool coupling_equals_delta,
                                           double tau_g = 1.0);
};

struct ImperfectionRealization {
    std::vector<double> detunings; // n_q values in [-delta/2, delta/2]
    std::vector<double> couplings; // n_q - 1 values in [-J, J], open chain
    std::uint64_t seed = 0;

    int qubits() const { return static_cast<int>(detunings.size()); }
    bool has_coupling() const;
};

ImperfectionRealization sample_realization(int n_q, const ImperfectionConfig& cfg, Rng& rng);
ImperfectionRealization sample_realization(int n_q, const ImperfectionConfig& cfg,
                                           std::uint64_t seed);

// exp(-i H_s tau_g). Exact diagonal phase when all couplings vanish; otherwise
// a second-order symmetric split: half z, the full xx chain (each pair term
// exponentiated exactly), half z.
void intergate_evolution(StateVector& psi, const ImperfectionRealization& r, double tau_g);

// One gate slot followed by one intergate interval, for every one of the n_g
// slots of the program; the padded identity slots still accumulate exposure,
// so the total imperfection time per iteration is exactly n_g * tau_g.
void noisy_iteration(StateVector& psi, const GateProgram& prog,
                     const ImperfectionRealization& r, const ImperfectionConfig& cfg);

namespace detail {

// Sum_i delta_i s_i(j) per basis index, s_i = +1 for bit clear, -1 for set.
std::vector<double> zsum_table(const ImperfectionRealization& r);

// Forced code paths, exposed for the splitting-error tests.
void intergate_diagonal(StateVector& psi, const std::vector<double>& zsum, double tau_g);
void intergate_split(StateVector& psi, const ImperfectionRealization& r,
                     const std::vector<double>& zsum, double tau_g);

} // namespace detail

// Precompiled noisy iteration: the gate program and the per-slot imperfection
// propagator are fixed for a whole run, so every stretch of mutually diagonal
// factors is folded into a single phase table built once. Hadamards and the
// xx chain are the only non-diagonal ops. Agrees with noisy_iteration to
// rounding error; used by the sweep pipelines where the slot-by-slot walk
// would dominate the runtime.
class NoisyEvolver {
public:
    NoisyEvolver(const GateProgram& prog, const ImperfectionRealization& r,
                 const ImperfectionConfig& cfg);

    void iterate(StateVector& psi) const;
    int qubits() const { return n_q_; }

private:
    struct Op {
        enum class Kind { Hadamard, Diagonal, XxChain } kind;
        int q = 0;
        int table = -1;
    };

    int n_q_ = 0;
    std::vector<Op> ops_;
    std::vector<std::vector<cd>> tables_;       // unit phase factors
    std::vector<std::uint64_t> xx_masks_;       // flipped bit pair per coupling
    std::vector<std::pair<double, double>> xx_cs_; // cos/sin of J_p * tau_g
};

} // namespace qsaw

#pragma once

#include <cstdint>
#include <vector>

#include "state_vector.hpp"

namespace qsaw {

// Sawtooth map instance: kick strength k, chaos parameter K = k*T, rotation
// parameter T, level count N = 2^n_q, cell count L = T*N/(2*pi) (kept real,
// never rounded), initial momentum level n0.
struct MapParams {
    int n_q = 1;
    std::uint64_t levels = 2;
    double kick = 0.0;     // k
    double chaos = 0.0;    // K
    double rotation = 0.0; // T
    double cells = 0.0;    // L
    int n0 = 0;

    // From (k, T); K = k*T. Valid for k = 0 (kick off).
    static MapParams from_rotation(int n_q, double kick, double rotation, int n0);
    // From (k, K); T = K/k, requires k > 0.
    static MapParams from_chaos(int n_q, double kick, double chaos, int n0);
};

// Signed momentum level of computational index m: levels -N/2 <= n < N/2,
// wrapping at m = N/2.
inline std::int64_t signed_momentum(std::uint64_t m, std::uint64_t n) {
    return m < n / 2 ? static_cast<std::int64_t>(m)
                     : static_cast<std::int64_t>(m) - static_cast<std::int64_t>(n);
}

// Kick operator phases in the coordinate basis: k*(theta_j - pi)^2 / 2 with
// theta_j = 2*pi*j/N.
std::vector<double> kick_phases(const MapParams& p);

// Free rotation phases in the momentum basis: -T*n(m)^2 / 2.
std::vector<double> rotation_phases(const MapParams& p);

// One Floquet step, split-operator form: forward Fourier, kick diagonal,
// inverse Fourier, rotation diagonal.
void exact_step(StateVector& psi, const MapParams& p);

// Adjoint of exact_step (time-reversed iteration).
void exact_step_adjoint(StateVector& psi, const MapParams& p);

// Gate realization of one map iteration. slot_count is the paper-level gate
// budget n_g = 3*n_q^2 + n_q used as the imperfection clock; the emitted gate
// list is shorter and the remaining slots act as identity. global_phase is a
// basis-independent correction applied once per iteration, outside the slot
// structure, so the composed action matches exact_step including phase.
struct GateProgram {
    int n_q = 0;
    std::vector<Gate> gates;
    std::uint64_t slot_count = 0;
    double global_phase = 0.0;
};

GateProgram compile_program(const MapParams& p);

// Noiseless application of a compiled iteration.
void apply_program(StateVector& psi, const GateProgram& prog);

// Classical sawtooth map on the cylinder.
struct ClassicalState {
    double action = 0.0; // n
    double angle = 0.0;  // theta in [0, 2*pi)
};

ClassicalState classical_step(const ClassicalState& s, const MapParams& p);

struct ClassicalDiffusion {
    double d = 0.0;                 // D_n, level^2 per iteration
    std::vector<double> m2;         // <(Delta n)^2> at t = 1..t_max
};

// Ensemble estimate of the classical diffusion coefficient: n = 0, uniform
// random angles, fit of <(Delta n)^2> = D_n * t through the origin.
ClassicalDiffusion classical_diffusion(double chaos, double kick, std::uint64_t n_traj,
                                       int t_max, std::uint64_t seed);

} // namespace qsaw

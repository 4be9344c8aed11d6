#include "sawtooth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rng.hpp"

namespace qsaw {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const MapParams& p) {
    if (p.n_q < 1 || p.n_q > 30) throw std::invalid_argument("qubit count must be in [1, 30]");
    if (p.kick < 0.0) throw std::invalid_argument("kick strength must be >= 0");
    const std::int64_t half = static_cast<std::int64_t>(p.levels / 2);
    if (p.n0 < -half || p.n0 >= half)
        throw std::invalid_argument("initial momentum n0 = " + std::to_string(p.n0) +
                                    " outside [-N/2, N/2)");
}

// Emits the single-qubit and pairwise controlled phases realizing a diagonal
// quadratic phase. The quadratic form is over the qubit bits b_i of index j,
//   phase(j) = sum_i lin[i] b_i + sum_{i<l} quad[i][l] b_i b_l + constant;
// when `reversed` is set the emitted gates address qubit n-1-i instead of i,
// which evaluates the form on the bit-reversed index (used between the QFT
// blocks, where the register holds bit-reversed coordinate amplitudes).
void emit_quadratic_diagonal(int n_q, const std::vector<double>& lin,
                             const std::vector<std::vector<double>>& quad, bool reversed,
                             std::vector<Gate>& out) {
    auto map_q = [&](int i) { return reversed ? n_q - 1 - i : i; };
    for (int i = 0; i < n_q; ++i)
        out.push_back(Gate::phase(map_q(i), lin[i]));
    for (int i = 0; i < n_q; ++i)
        for (int l = i + 1; l < n_q; ++l)
            out.push_back(Gate::controlled_phase(map_q(i), map_q(l), quad[i][l]));
}

// Kick diagonal k*(theta_j - pi)^2/2 = c*(j - N/2)^2, c = (k/2)*(2*pi/N)^2,
// expanded over qubit bits. Returns the j-independent constant (the global
// phase carried by the program).
double kick_quadratic(const MapParams& p, std::vector<double>& lin,
                      std::vector<std::vector<double>>& quad) {
    const int n = p.n_q;
    const double nn = static_cast<double>(p.levels);
    const double c = 0.5 * p.kick * (2.0 * kPi / nn) * (2.0 * kPi / nn);
    lin.assign(n, 0.0);
    quad.assign(n, std::vector<double>(n, 0.0));
    // (j - N/2)^2 = s^2 - N s + N b_0 s + N^2/4 - b_0 N^2/4, s = sum_{i>=1} b_i w_i
    lin[0] = -c * nn * nn / 4.0;
    for (int i = 1; i < n; ++i) {
        const double w = static_cast<double>(1ULL << (n - 1 - i));
        lin[i] = c * (w * w - nn * w);
        quad[0][i] = c * nn * w;
        for (int l = i + 1; l < n; ++l) {
            const double wl = static_cast<double>(1ULL << (n - 1 - l));
            quad[i][l] = 2.0 * c * w * wl;
        }
    }
    return c * nn * nn / 4.0;
}

// Rotation diagonal -T*n(m)^2/2 with n = s - b_0 N/2; no constant term.
void rotation_quadratic(const MapParams& p, std::vector<double>& lin,
                        std::vector<std::vector<double>>& quad) {
    const int n = p.n_q;
    const double nn = static_cast<double>(p.levels);
    const double t = p.rotation;
    lin.assign(n, 0.0);
    quad.assign(n, std::vector<double>(n, 0.0));
    lin[0] = -t * nn * nn / 8.0;
    for (int i = 1; i < n; ++i) {
        const double w = static_cast<double>(1ULL << (n - 1 - i));
        lin[i] = -0.5 * t * w * w;
        quad[0][i] = 0.5 * t * nn * w;
        for (int l = i + 1; l < n; ++l) {
            const double wl = static_cast<double>(1ULL << (n - 1 - l));
            quad[i][l] = -t * w * wl;
        }
    }
}

// Standard QFT circuit, qubit 0 first. Output amplitudes come out in
// bit-reversed order: the gate sequence realizes Rev * F with F the forward
// transform of fourier(). No swap network is emitted; the reversal is
// absorbed by evaluating the kick diagonal on reversed bits.
std::vector<Gate> qft_block(int n_q) {
    std::vector<Gate> g;
    for (int q = 0; q < n_q; ++q) {
        g.push_back(Gate::hadamard(q));
        for (int r = q + 1; r < n_q; ++r)
            g.push_back(Gate::controlled_phase(q, r, kPi / static_cast<double>(1 << (r - q))));
    }
    return g;
}

std::vector<Gate> adjoint_block(const std::vector<Gate>& fwd) {
    std::vector<Gate> g(fwd.rbegin(), fwd.rend());
    for (Gate& gate : g)
        if (gate.kind != Gate::Kind::Hadamard) gate.phi = -gate.phi;
    return g;
}

} // namespace

MapParams MapParams::from_rotation(int n_q, double kick, double rotation, int n0) {
    MapParams p;
    p.n_q = n_q;
    p.levels = n_q >= 1 && n_q <= 30 ? (1ULL << n_q) : 0;
    p.kick = kick;
    p.rotation = rotation;
    p.chaos = kick * rotation;
    p.cells = rotation * static_cast<double>(p.levels) / (2.0 * kPi);
    p.n0 = n0;
    validate(p);
    return p;
}

MapParams MapParams::from_chaos(int n_q, double kick, double chaos, int n0) {
    if (kick <= 0.0) throw std::invalid_argument("k must be > 0 to derive T = K/k");
    return from_rotation(n_q, kick, chaos / kick, n0);
}

std::vector<double> kick_phases(const MapParams& p) {
    validate(p);
    const std::uint64_t n = p.levels;
    std::vector<double> ph(n);
    for (std::uint64_t j = 0; j < n; ++j) {
        const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        ph[j] = 0.5 * p.kick * (theta - kPi) * (theta - kPi);
    }
    return ph;
}

std::vector<double> rotation_phases(const MapParams& p) {
    validate(p);
    const std::uint64_t n = p.levels;
    std::vector<double> ph(n);
    for (std::uint64_t m = 0; m < n; ++m) {
        const double nm = static_cast<double>(signed_momentum(m, n));
        ph[m] = -0.5 * p.rotation * nm * nm;
    }
    return ph;
}

void exact_step(StateVector& psi, const MapParams& p) {
    if (psi.size() != p.levels) throw std::invalid_argument("state dimension mismatch");
    fourier(psi, Direction::Forward);
    apply_diagonal(psi, kick_phases(p));
    fourier(psi, Direction::Inverse);
    apply_diagonal(psi, rotation_phases(p));
}

void exact_step_adjoint(StateVector& psi, const MapParams& p) {
    if (psi.size() != p.levels) throw std::invalid_argument("state dimension mismatch");
    std::vector<double> rot = rotation_phases(p);
    for (double& x : rot) x = -x;
    std::vector<double> kik = kick_phases(p);
    for (double& x : kik) x = -x;
    apply_diagonal(psi, rot);
    fourier(psi, Direction::Forward);
    apply_diagonal(psi, kik);
    fourier(psi, Direction::Inverse);
}

GateProgram compile_program(const MapParams& p) {
    validate(p);
    GateProgram prog;
    prog.n_q = p.n_q;
    prog.slot_count = 3ULL * p.n_q * p.n_q + p.n_q;

    std::vector<double> lin;
    std::vector<std::vector<double>> quad;

    const std::vector<Gate> qft = qft_block(p.n_q);
    prog.gates = qft;

    prog.global_phase = kick_quadratic(p, lin, quad);
    emit_quadratic_diagonal(p.n_q, lin, quad, /*reversed=*/true, prog.gates);

    const std::vector<Gate> iqft = adjoint_block(qft);
    prog.gates.insert(prog.gates.end(), iqft.begin(), iqft.end());

    rotation_quadratic(p, lin, quad);
    emit_quadratic_diagonal(p.n_q, lin, quad, /*reversed=*/false, prog.gates);

    // 2*n_q Hadamards + 2*n_q phases + 2*n_q*(n_q-1) controlled phases; always
    // fits the n_g slot budget.
    if (prog.gates.size() > prog.slot_count)
        throw std::runtime_error("compiled gate count exceeds slot budget");
    return prog;
}

void apply_program(StateVector& psi, const GateProgram& prog) {
    if (psi.qubits() != prog.n_q) throw std::invalid_argument("state/program qubit mismatch");
    for (const Gate& g : prog.gates) apply_gate(psi, g);
    apply_global_phase(psi, prog.global_phase);
}

ClassicalState classical_step(const ClassicalState& s, const MapParams& p) {
    ClassicalState out;
    out.action = s.action + p.kick * (s.angle - kPi);
    out.angle = std::fmod(s.angle + p.rotation * out.action, 2.0 * kPi);
    if (out.angle < 0.0) out.angle += 2.0 * kPi;
    return out;
}

ClassicalDiffusion classical_diffusion(double chaos, double kick, std::uint64_t n_traj,
                                       int t_max, std::uint64_t seed) {
    if (t_max < 2) throw std::invalid_argument("diffusion fit needs t_max >= 2");
    if (n_traj < 1) throw std::invalid_argument("need at least one trajectory");

    const double rotation = kick > 0.0 ? chaos / kick : 0.0;
    MapParams p = MapParams::from_rotation(1, kick, rotation, 0);

    ClassicalDiffusion result;
    result.m2.assign(static_cast<std::size_t>(t_max), 0.0);
    for (std::uint64_t traj = 0; traj < n_traj; ++traj) {
        Rng rng(derive_seed(seed, {0x636c61u, traj}));
        ClassicalState s{0.0, rng.uniform(0.0, 2.0 * kPi)};
        for (int t = 1; t <= t_max; ++t) {
            s = classical_step(s, p);
            result.m2[t - 1] += s.action * s.action;
        }
    }
    for (double& v : result.m2) v /= static_cast<double>(n_traj);

    double num = 0.0, den = 0.0;
    for (int t = 1; t <= t_max; ++t) {
        num += static_cast<double>(t) * result.m2[t - 1];
        den += static_cast<double>(t) * static_cast<double>(t);
    }
    result.d = num / den;
    return result;
}

} // namespace qsaw

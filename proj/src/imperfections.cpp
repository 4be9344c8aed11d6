#include "imperfections.hpp"

#include <cmath>
#include <stdexcept>

namespace qsaw {

namespace {

void check_config(const ImperfectionConfig& cfg) {
    if (cfg.delta < 0.0 || cfg.coupling < 0.0)
        throw std::invalid_argument("imperfection bounds must be >= 0");
    if (cfg.tau_g <= 0.0) throw std::invalid_argument("tau_g must be > 0");
    if (std::abs(cfg.epsilon - cfg.delta * cfg.tau_g) >
        1e-14 * (1.0 + std::abs(cfg.epsilon)))
        throw std::invalid_argument("epsilon inconsistent with delta * tau_g");
}

// exp(-i theta XX) on the pair flipping both bits of `mask`.
void xx_rotation(StateVector& psi, std::uint64_t mask, double c, double s) {
    cd* a = psi.data();
    const std::uint64_t n = psi.size();
    for (std::uint64_t j = 0; j < n; ++j) {
        const std::uint64_t partner = j ^ mask;
        if (partner < j) continue;
        const double ar = a[j].real(), ai = a[j].imag();
        const double br = a[partner].real(), bi = a[partner].imag();
        a[j] = cd{c * ar + s * bi, c * ai - s * br};
        a[partner] = cd{c * br + s * ai, c * bi - s * ar};
    }
}

} // namespace

ImperfectionConfig ImperfectionConfig::make(double delta, double coupling, double tau_g,
                                            double delta0) {
    ImperfectionConfig cfg;
    cfg.delta = delta;
    cfg.coupling = coupling;
    cfg.tau_g = tau_g;
    cfg.epsilon = delta * tau_g;
    cfg.delta0 = delta0;
    check_config(cfg);
    return cfg;
}

ImperfectionConfig ImperfectionConfig::from_epsilon(double epsilon, bool coupling_equals_delta,
                                                    double tau_g) {
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    const double delta = epsilon / tau_g;
    return make(delta, coupling_equals_delta ? delta : 0.0, tau_g);
}

bool ImperfectionRealization::has_coupling() const {
    for (double j : couplings)
        if (j != 0.0) return true;
    return false;
}

ImperfectionRealization sample_realization(int n_q, const ImperfectionConfig& cfg, Rng& rng) {
    check_config(cfg);
    if (n_q < 1) throw std::invalid_argument("qubit count must be >= 1");
    ImperfectionRealization r;
    r.detunings.resize(n_q);
    for (int i = 0; i < n_q; ++i) r.detunings[i] = cfg.delta * (rng.uniform() - 0.5);
    r.couplings.resize(n_q > 1 ? n_q - 1 : 0);
    for (double& j : r.couplings) j = cfg.coupling * (2.0 * rng.uniform() - 1.0);
    return r;
}

ImperfectionRealization sample_realization(int n_q, const ImperfectionConfig& cfg,
                                           std::uint64_t seed) {
    Rng rng(seed);
    ImperfectionRealization r = sample_realization(n_q, cfg, rng);
    r.seed = seed;
    return r;
}

namespace detail {

std::vector<double> zsum_table(const ImperfectionRealization& r) {
    const int n_q = r.qubits();
    const std::uint64_t n = 1ULL << n_q;
    std::vector<double> z(n, 0.0);
    for (std::uint64_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n_q; ++i)
            s += ((j >> (n_q - 1 - i)) & 1ULL) ? -r.detunings[i] : r.detunings[i];
        z[j] = s;
    }
    return z;
}

void intergate_diagonal(StateVector& psi, const std::vector<double>& zsum, double tau_g) {
    cd* a = psi.data();
    for (std::uint64_t j = 0; j < psi.size(); ++j) {
        const double phi = -tau_g * zsum[j];
        const double c = std::cos(phi), s = std::sin(phi);
        const double r = a[j].real(), im = a[j].imag();
        a[j] = cd{r * c - im * s, r * s + im * c};
    }
}

void intergate_split(StateVector& psi, const ImperfectionRealization& r,
                     const std::vector<double>& zsum, double tau_g) {
    const int n_q = r.qubits();
    intergate_diagonal(psi, zsum, 0.5 * tau_g);
    for (int p = 0; p + 1 < n_q; ++p) {
        const double theta = r.couplings[p] * tau_g;
        const std::uint64_t mask = psi.mask(p) | psi.mask(p + 1);
        xx_rotation(psi, mask, std::cos(theta), std::sin(theta));
    }
    intergate_diagonal(psi, zsum, 0.5 * tau_g);
}

} // namespace detail

void intergate_evolution(StateVector& psi, const ImperfectionRealization& r, double tau_g) {
    if (psi.qubits() != r.qubits()) throw std::invalid_argument("state/realization mismatch");
    const std::vector<double> zsum = detail::zsum_table(r);
    if (r.has_coupling())
        detail::intergate_split(psi, r, zsum, tau_g);
    else
        detail::intergate_diagonal(psi, zsum, tau_g);
}

void noisy_iteration(StateVector& psi, const GateProgram& prog,
                     const ImperfectionRealization& r, const ImperfectionConfig& cfg) {
    if (psi.qubits() != prog.n_q || r.qubits() != prog.n_q)
        throw std::invalid_argument("state/program/realization mismatch");
    check_config(cfg);
    const std::vector<double> zsum = detail::zsum_table(r);
    const bool coupled = r.has_coupling();
    for (std::uint64_t slot = 0; slot < prog.slot_count; ++slot) {
        if (slot < prog.gates.size()) apply_gate(psi, prog.gates[slot]);
        if (coupled)
            detail::intergate_split(psi, r, zsum, cfg.tau_g);
        else
            detail::intergate_diagonal(psi, zsum, cfg.tau_g);
    }
    apply_global_phase(psi, prog.global_phase);
}

NoisyEvolver::NoisyEvolver(const GateProgram& prog, const ImperfectionRealization& r,
                           const ImperfectionConfig& cfg) {
    if (r.qubits() != prog.n_q) throw std::invalid_argument("program/realization mismatch");
    n_q_ = prog.n_q;
    const std::uint64_t n = 1ULL << n_q_;
    const std::vector<double> zsum = detail::zsum_table(r);
    const bool coupled = r.has_coupling();

    StateVector probe(n_q_, 0); // mask helper only
    if (coupled) {
        for (int p = 0; p + 1 < n_q_; ++p) {
            const double theta = r.couplings[p] * cfg.tau_g;
            xx_masks_.push_back(probe.mask(p) | probe.mask(p + 1));
            xx_cs_.emplace_back(std::cos(theta), std::sin(theta));
        }
    }

    std::vector<double> acc(n, 0.0);
    auto flush = [&]() {
        std::vector<cd> table(n);
        for (std::uint64_t j = 0; j < n; ++j) table[j] = cd{std::cos(acc[j]), std::sin(acc[j])};
        tables_.push_back(std::move(table));
        ops_.push_back({Op::Kind::Diagonal, 0, static_cast<int>(tables_.size()) - 1});
        std::fill(acc.begin(), acc.end(), 0.0);
    };
    auto add_half_z = [&]() {
        for (std::uint64_t j = 0; j < n; ++j) acc[j] += -0.5 * cfg.tau_g * zsum[j];
    };

    for (std::uint64_t slot = 0; slot < prog.slot_count; ++slot) {
        if (slot < prog.gates.size()) {
            const Gate& g = prog.gates[slot];
            switch (g.kind) {
            case Gate::Kind::Hadamard:
                flush();
                ops_.push_back({Op::Kind::Hadamard, g.q1, -1});
                break;
            case Gate::Kind::Phase: {
                const std::uint64_t m = probe.mask(g.q1);
                for (std::uint64_t j = 0; j < n; ++j)
                    if (j & m) acc[j] += g.phi;
                break;
            }
            case Gate::Kind::ControlledPhase: {
                const std::uint64_t m = probe.mask(g.q1) | probe.mask(g.q2);
                for (std::uint64_t j = 0; j < n; ++j)
                    if ((j & m) == m) acc[j] += g.phi;
                break;
            }
            }
        }
        if (coupled) {
            add_half_z();
            flush();
            ops_.push_back({Op::Kind::XxChain, 0, -1});
            add_half_z();
        } else {
            for (std::uint64_t j = 0; j < n; ++j) acc[j] += -cfg.tau_g * zsum[j];
        }
    }
    for (std::uint64_t j = 0; j < n; ++j) acc[j] += prog.global_phase;
    flush();
}

void NoisyEvolver::iterate(StateVector& psi) const {
    if (psi.qubits() != n_q_) throw std::invalid_argument("state dimension mismatch");
    for (const Op& op : ops_) {
        switch (op.kind) {
        case Op::Kind::Hadamard:
            apply_hadamard(psi, op.q);
            break;
        case Op::Kind::Diagonal:
            apply_phase_factors(psi, tables_[op.table]);
            break;
        case Op::Kind::XxChain:
            for (std::size_t p = 0; p < xx_masks_.size(); ++p)
                xx_rotation(psi, xx_masks_[p], xx_cs_[p].first, xx_cs_[p].second);
            break;
        }
    }
}

} // namespace qsaw

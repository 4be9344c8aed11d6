#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"
#include "state_vector.hpp"

namespace qsaw {

// Probability distribution over signed momentum n in [-N/2, N/2); slot r
// holds W at n = r - N/2. t_lo/t_hi record the iteration window averaged over.
struct MomentumDistribution {
    std::vector<double> w;
    int t_lo = 0;
    int t_hi = 0;

    std::uint64_t levels() const { return w.size(); }
    std::int64_t momentum_min() const { return -static_cast<std::int64_t>(w.size() / 2); }
    double at(std::int64_t n) const { return w[static_cast<std::uint64_t>(n - momentum_min())]; }
};

MomentumDistribution distribution(const StateVector& psi);

// Accumulates |psi|^2 into an existing distribution (time/ensemble averages);
// divide by the weight afterwards.
void accumulate_distribution(MomentumDistribution& acc, const StateVector& psi);

double second_moment(const MomentumDistribution& w, int n0);

// Inverse participation ratio 1 / sum W_n^2.
double ipr(const MomentumDistribution& w);

struct FitResult {
    double value = 0.0;
    double std_error = 0.0;
    double residual = 0.0; // rms residual in log space
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool ok = false;
    bool contaminated = false;
    std::string message;
};

// Least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double rms_residual = 0.0;
    std::size_t points = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Exponential-decay fit W_n ~ exp(-2|n - n0|/ell) over |n - n0| <= min(n_c, N/2),
// the crossover n_c being iterated self-consistently from the fitted ell.
FitResult fit_localization_length(const MomentumDistribution& w, int n0);

// Power-law tail fit W_n ~ |n - n0|^(-alpha) over |n - n0| in [2 n_c, N/2].
FitResult fit_tail_exponent(const MomentumDistribution& w, int n0);

// Crossover between the exponential body and the power-law tail:
// n_c = (3/2) ell ln(ell), W_c = 1 / (ell^4 ln(ell)). Natural logarithm.
struct Crossover {
    double n_c = 0.0;
    double w_c = 0.0;
};
Crossover crossover_estimate(double ell);

// <(Delta n)^2>(t) with averaging provenance.
struct DiffusionSeries {
    std::vector<int> t;
    std::vector<double> m2;
    int realizations = 1;
    int initial_conditions = 1;
};

// Line through the origin over t in [1, min(10, floor(t*/2))], t* = (pi^2/3) k^2.
FitResult fit_diffusion(const DiffusionSeries& series, double kick);

// Closed-form predictors.
double break_time(double kick);                    // t* = (pi^2/3) k^2
double ell_estimate(double kick);                  // ell ~ D_n
double dbar_epsilon(double epsilon, int n_q, double levels); // eps^2 nq^4 N^2
double epsilon_d_theory(double d0, int n_q, double levels, double b = 3.6);
double epsilon_xie_theory(int n_q, double ell, double a = 0.5); // A / (nq^(5/2) sqrt(ell))
double epsilon_xie_fig_form(int n_q, double a = 0.5);           // A * nq^(-5/2)

// One projective measurement in the momentum basis.
std::int64_t sample_measurement(const StateVector& psi, Rng& rng);

// Coarse-grained measurement record: one signed momentum per run, histogram
// resolution bin_width (power of two, i.e. only the most significant qubits
// are read out).
struct MeasurementRecord {
    std::vector<std::int64_t> samples;
    std::uint64_t bin_width = 0;
    std::uint64_t runs = 0;
};

// Power of two nearest to ell/4 (at least 1).
std::uint64_t coarse_bin_width(double ell_guess);

// Exponential fit of the coarse-grained histogram; value is the localization
// length estimate, std_error its accuracy nu.
FitResult estimate_ell_from_samples(const MeasurementRecord& rec, double ell_guess, int n_q);

} // namespace qsaw

#include "observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "sawtooth.hpp"

namespace qsaw {

namespace {

constexpr double kPi = std::numbers::pi;

// Residual above this flags a power-law window contaminated by non-power-law
// decay; calibrated on synthetic exponential/power-law mixtures.
constexpr double kTailResidualLimit = 0.35;

FitResult failure(const std::string& why) {
    FitResult f;
    f.ok = false;
    f.message = why;
    return f;
}

// Exponential fit over distances [0, win]; returns ok=false on upward slope
// or too few points.
FitResult exp_fit_window(const MomentumDistribution& w, int n0, double win) {
    const std::int64_t lo = w.momentum_min();
    const std::int64_t hi = -lo;
    std::vector<double> x, y;
    for (std::int64_t n = lo; n < hi; ++n) {
        const double d = std::abs(static_cast<double>(n - n0));
        if (d > win) continue;
        const double v = w.at(n);
        if (v <= 0.0) continue;
        x.push_back(d);
        y.push_back(std::log(v));
    }
    if (x.size() < 3) return failure("fewer than 3 usable points in fit window");
    const LineFit lf = fit_line(x, y);
    if (lf.slope >= 0.0) return failure("distribution does not decay over the fit window");
    FitResult f;
    f.ok = true;
    f.value = -2.0 / lf.slope;
    f.std_error = 2.0 * lf.slope_stderr / (lf.slope * lf.slope);
    f.residual = lf.rms_residual;
    f.window_lo = 0.0;
    f.window_hi = win;
    return f;
}

// Self-consistent localization fit: the window is capped at the crossover
// n_c(ell) of the current estimate and the fit repeated.
FitResult iterate_exp_fit(const MomentumDistribution& w, int n0, double start_window) {
    const double half = static_cast<double>(w.levels() / 2);
    double win = std::min(start_window, half);
    FitResult f = exp_fit_window(w, n0, win);
    for (int pass = 0; pass < 4 && f.ok; ++pass) {
        if (f.value <= 1.0) return failure("fitted localization length below one level");
        const double n_c = crossover_estimate(f.value).n_c;
        const double next = std::min(n_c, half);
        if (std::abs(next - win) < 1.0) break;
        win = next;
        f = exp_fit_window(w, n0, win);
    }
    return f;
}

} // namespace

MomentumDistribution distribution(const StateVector& psi) {
    MomentumDistribution d;
    d.w.assign(psi.size(), 0.0);
    accumulate_distribution(d, psi);
    return d;
}

void accumulate_distribution(MomentumDistribution& acc, const StateVector& psi) {
    if (acc.w.size() != psi.size()) throw std::invalid_argument("distribution size mismatch");
    const std::uint64_t n = psi.size();
    const cd* a = psi.data();
    for (std::uint64_t m = 0; m < n; ++m) {
        const std::uint64_t r = (m + n / 2) % n;
        acc.w[r] += a[m].real() * a[m].real() + a[m].imag() * a[m].imag();
    }
}

double second_moment(const MomentumDistribution& w, int n0) {
    double s = 0.0;
    std::int64_t n = w.momentum_min();
    for (double v : w.w) {
        const double d = static_cast<double>(n - n0);
        s += d * d * v;
        ++n;
    }
    return s;
}

double ipr(const MomentumDistribution& w) {
    double s = 0.0;
    for (double v : w.w) s += v * v;
    if (s <= 0.0) throw std::invalid_argument("empty distribution");
    return 1.0 / s;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.rms_residual = std::sqrt(ss / n);
    f.slope_stderr = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
    f.points = x.size();
    return f;
}

FitResult fit_localization_length(const MomentumDistribution& w, int n0) {
    return iterate_exp_fit(w, n0, static_cast<double>(w.levels() / 2));
}

FitResult fit_tail_exponent(const MomentumDistribution& w, int n0) {
    // The crossover scale comes from a peak-region exponential fit; starting
    // from N/8 keeps the estimate local when the body is not exponential.
    const double half = static_cast<double>(w.levels() / 2);
    FitResult body = iterate_exp_fit(w, n0, half / 4.0);
    if (!body.ok) return failure("no usable peak-region fit: " + body.message);
    const double n_c = crossover_estimate(body.value).n_c;

    const double lo_edge = 2.0 * n_c;
    if (lo_edge >= half) return failure("crossover beyond half the momentum range");
    std::vector<double> x, y;
    const std::int64_t lo = w.momentum_min();
    for (std::int64_t n = lo; n < -lo; ++n) {
        const double d = std::abs(static_cast<double>(n - n0));
        if (d < lo_edge || d > half) continue;
        const double v = w.at(n);
        if (v <= 0.0) continue;
        x.push_back(std::log(d));
        y.push_back(std::log(v));
    }
    if (x.size() < 3) return failure("fewer than 3 usable points in tail window");
    const LineFit lf = fit_line(x, y);
    FitResult f;
    f.ok = true;
    f.value = -lf.slope;
    f.std_error = lf.slope_stderr;
    f.residual = lf.rms_residual;
    f.window_lo = lo_edge;
    f.window_hi = half;
    f.contaminated = lf.rms_residual > kTailResidualLimit;
    return f;
}

Crossover crossover_estimate(double ell) {
    if (ell <= 1.0) throw std::invalid_argument("crossover needs ell > 1");
    const double lg = std::log(ell);
    return {1.5 * ell * lg, 1.0 / (ell * ell * ell * ell * lg)};
}

FitResult fit_diffusion(const DiffusionSeries& series, double kick) {
    if (series.t.size() != series.m2.size()) throw std::invalid_argument("ragged series");
    if (series.t.size() < 3) throw std::invalid_argument("diffusion series needs >= 3 points");
    const double t_star = break_time(kick);
    const int t_fit = std::min(10, static_cast<int>(std::floor(t_star / 2.0)));
    std::vector<double> tt, mm;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        if (series.t[i] >= 1 && series.t[i] <= t_fit) {
            tt.push_back(static_cast<double>(series.t[i]));
            mm.push_back(series.m2[i]);
        }
    }
    if (tt.size() < 3) throw std::invalid_argument("fewer than 3 points inside diffusion window");

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < tt.size(); ++i) {
        num += tt[i] * mm[i];
        den += tt[i] * tt[i];
    }
    const double d = num / den;
    double ss = 0.0;
    for (std::size_t i = 0; i < tt.size(); ++i) {
        const double e = mm[i] - d * tt[i];
        ss += e * e;
    }
    FitResult f;
    f.ok = true;
    f.value = d;
    f.std_error = std::sqrt(ss / (static_cast<double>(tt.size()) - 1.0) / den);
    f.residual = std::sqrt(ss / static_cast<double>(tt.size()));
    f.window_lo = 1.0;
    f.window_hi = static_cast<double>(t_fit);
    return f;
}

double break_time(double kick) {
    if (kick <= 0.0) throw std::invalid_argument("kick strength must be > 0");
    return kPi * kPi / 3.0 * kick * kick;
}

double ell_estimate(double kick) { return break_time(kick); }

double dbar_epsilon(double epsilon, int n_q, double levels) {
    if (epsilon <= 0.0 || n_q <= 0 || levels <= 0.0)
        throw std::invalid_argument("dbar_epsilon needs positive arguments");
    const double nq = static_cast<double>(n_q);
    return epsilon * epsilon * nq * nq * nq * nq * levels * levels;
}

double epsilon_d_theory(double d0, int n_q, double levels, double b) {
    if (d0 <= 0.0 || n_q <= 0 || levels <= 0.0 || b <= 0.0)
        throw std::invalid_argument("epsilon_d_theory needs positive arguments");
    const double nq = static_cast<double>(n_q);
    return b * std::sqrt(d0) / (nq * nq * levels);
}

double epsilon_xie_theory(int n_q, double ell, double a) {
    if (n_q <= 0 || ell <= 0.0 || a <= 0.0)
        throw std::invalid_argument("epsilon_xie_theory needs positive arguments");
    return a / (std::pow(static_cast<double>(n_q), 2.5) * std::sqrt(ell));
}

double epsilon_xie_fig_form(int n_q, double a) {
    if (n_q <= 0 || a <= 0.0)
        throw std::invalid_argument("epsilon_xie_fig_form needs positive arguments");
    return a * std::pow(static_cast<double>(n_q), -2.5);
}

std::int64_t sample_measurement(const StateVector& psi, Rng& rng) {
    const double u = rng.uniform();
    const std::uint64_t n = psi.size();
    const cd* a = psi.data();
    double acc = 0.0;
    for (std::uint64_t m = 0; m < n; ++m) {
        acc += a[m].real() * a[m].real() + a[m].imag() * a[m].imag();
        if (u < acc) return signed_momentum(m, n);
    }
    return signed_momentum(n - 1, n);
}

std::uint64_t coarse_bin_width(double ell_guess) {
    if (ell_guess <= 0.0) throw std::invalid_argument("ell guess must be > 0");
    const double target = std::max(ell_guess / 4.0, 1.0);
    const long exp2 = std::lround(std::log2(target));
    return 1ULL << std::max(0L, exp2);
}

FitResult estimate_ell_from_samples(const MeasurementRecord& rec, double ell_guess, int n_q) {
    const std::uint64_t n = 1ULL << n_q;
    std::uint64_t width = rec.bin_width ? rec.bin_width : coarse_bin_width(ell_guess);
    if ((width & (width - 1)) != 0) throw std::invalid_argument("bin width must be a power of two");
    if (width > n / 2) width = n / 2;
    if (rec.samples.empty()) return failure("no samples");

    const std::int64_t half = static_cast<std::int64_t>(n / 2);
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::int64_t s : rec.samples) {
        if (s < -half || s >= half) throw std::invalid_argument("sample outside momentum range");
        const std::uint64_t m = static_cast<std::uint64_t>(s >= 0 ? s : s + static_cast<std::int64_t>(n));
        counts[m / width] += 1;
    }

    // Bin centers in signed momentum; the bin containing the peak mixes both
    // decay directions and is left out of the fit.
    std::vector<double> x, y;
    for (const auto& [bin, cnt] : counts) {
        const std::int64_t base = static_cast<std::int64_t>(bin * width);
        double center = static_cast<double>(base) + 0.5 * static_cast<double>(width - 1);
        if (base >= half) center -= static_cast<double>(n);
        const double d = std::abs(center);
        if (d < static_cast<double>(width)) continue;
        x.push_back(d);
        y.push_back(std::log(static_cast<double>(cnt)));
    }
    if (x.size() < 3) return failure("fewer than 3 nonempty histogram bins");
    const LineFit lf = fit_line(x, y);
    if (lf.slope >= 0.0) return failure("histogram does not decay");
    FitResult f;
    f.ok = true;
    f.value = -2.0 / lf.slope;
    f.std_error = 2.0 * lf.slope_stderr / (lf.slope * lf.slope);
    f.residual = lf.rms_residual;
    f.window_lo = static_cast<double>(width);
    f.window_hi = static_cast<double>(half);
    return f;
}

} // namespace qsaw

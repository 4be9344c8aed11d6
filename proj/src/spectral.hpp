#pragma once

#include <cstdint>
#include <vector>

#include "imperfections.hpp"
#include "sawtooth.hpp"
#include "state_vector.hpp"

namespace qsaw {

// Dense one-iteration evolution operator in the momentum basis, column m
// built by running the (noisy) gate algorithm on basis state m.
struct FloquetMatrix {
    std::uint64_t n = 0;
    std::vector<cd> u; // row-major n x n
    MapParams params;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

FloquetMatrix build_floquet_matrix(const MapParams& p, const ImperfectionRealization& r,
                                   const ImperfectionConfig& cfg,
                                   std::uint64_t dense_cap = 2048);

// max |(U^dag U - I)_ij|
double unitarity_defect(const FloquetMatrix& m);

// Quasienergy eigenphases in (-pi, pi], sorted ascending. modulus_defect is
// the largest deviation of an eigenvalue modulus from one before projection
// onto the unit circle.
struct FloquetSpectrum {
    std::vector<double> phases;
    double modulus_defect = 0.0;
};

FloquetSpectrum eigenphases(const FloquetMatrix& m);

// Nearest-neighbor gaps in units of the mean spacing 2*pi/N, including the
// wraparound gap; mean is one by construction.
std::vector<double> spacings(const FloquetSpectrum& spec);

double poisson_pdf(double s);
double wigner_dyson_pdf(double s);
double poisson_cdf(double s);
double wigner_dyson_cdf(double s);

struct SpacingHistogram {
    std::vector<double> edges;   // bins + 1 edges
    std::vector<double> density; // normalized so the histogram integrates to 1
    std::uint64_t count = 0;
};

struct SpacingStats {
    SpacingHistogram hist;
    double d_poisson = 0.0; // Kolmogorov-Smirnov distance to exp(-s)
    double d_wigner = 0.0;  // and to the Wigner-Dyson surmise
    std::uint64_t count = 0;
    bool low_statistics = false;
};

// Pools spacing arrays over disorder realizations, bins them (40 bins on
// [0, 4]) and reports the KS distance to each limiting law. Throws below
// `min_count` samples unless allow_low_statistics is set, in which case the
// result is only flagged.
SpacingStats statistics_test(const std::vector<std::vector<double>>& pooled,
                             bool allow_low_statistics = false,
                             std::uint64_t min_count = 1000);

} // namespace qsaw

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qsaw {

// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds a tuple of stream coordinates (run index, epsilon index, ...) into a
// base seed. Deterministic: same inputs give the same stream everywhere.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t w : words) h = splitmix64(h ^ (w + 0x9e3779b97f4a7c15ULL));
    return h;
}

// Explicitly seeded generator. The uniform mapping uses the top 53 bits of the
// engine output so draws do not depend on the standard library's distribution
// implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

} // namespace qsaw

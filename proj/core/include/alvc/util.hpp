// Deterministic sampling utilities shared by tests, identity checks and the
// CLI.  All randomness flows through Rng so that a (seed, call-sequence) pair
// produces identical streams on every platform: values are built from raw
// mt19937_64 output instead of std::uniform_real_distribution, whose results
// are implementation-defined.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace alvc {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) { return eng_() % n; }

    std::vector<double> vector(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 eng_;
};

// Halton low-discrepancy sequence, used for axiom spot checks so the sample
// points are reproducible and reasonably space-filling.
inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    std::uint64_t i = index;
    while (i > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

// dim-dimensional Halton point (bases 2,3,5,7,...) mapped to [lo,hi]^dim.
inline std::vector<double> halton_point(std::uint64_t index, std::size_t dim,
                                        double lo, double hi) {
    static constexpr std::uint64_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                               23, 29, 31, 37, 41, 43, 47, 53};
    std::vector<double> p(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const std::uint64_t b = d < std::size(primes) ? primes[d] : primes[d % std::size(primes)];
        p[d] = lo + (hi - lo) * halton(index + 1, b);
    }
    return p;
}

} // namespace alvc

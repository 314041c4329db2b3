#ifndef ONSU_RNG_HPP
#define ONSU_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace onsu {

// mt19937_64 with hand-rolled draw methods. The std:: distribution objects
// are not guaranteed to produce the same stream across standard library
// implementations, and schedules must replay bit-identically, so every draw
// goes through the explicit formulas below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t v = gen_() % span; // modulo bias is irrelevant at these spans
        return lo + static_cast<std::int64_t>(v);
    }

    // Knuth's product method; fine for the small means used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        double prod = 1.0;
        int k = -1;
        do {
            ++k;
            prod *= uniform01();
        } while (prod > limit);
        return k;
    }

    double exponential(double mean) {
        double u = uniform01();
        return -mean * std::log1p(-u);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace onsu

#endif

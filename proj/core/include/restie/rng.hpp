#ifndef RESTIE_RNG_HPP
#define RESTIE_RNG_HPP

#include <cstdint>
#include <random>

namespace restie {

// mt19937_64 with explicit output conversions. std::*_distribution is not
// pinned down by the standard, so results would differ across standard
// libraries; these conversions make every seeded run bit-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1) with 53 random bits
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace restie

#endif

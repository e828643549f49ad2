#pragma once

#include <cstdint>
#include <random>

namespace liectrl {

// Seeded RNG with explicit uint64 -> double conversion. std::mt19937_64 is
// fully specified by the standard, so identical seeds give identical sample
// streams on every platform; the distributions in <random> are not, which is
// why we do not use them.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Inclusive bounds. Modulo bias is irrelevant for test-sized spans.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace liectrl

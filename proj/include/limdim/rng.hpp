#pragma once

#include "limdim/rational.hpp"

#include <cstdint>
#include <random>

namespace limdim {

/// Seeded generator with hand-rolled draw helpers. std::mt19937_64's output
/// sequence is pinned by the standard; the distributions here avoid
/// std::uniform_*_distribution, whose results vary across library
/// implementations, so identical seeds give byte-identical runs everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform dyadic rational in [0, 1) with 53-bit resolution.
    Rat unit_rat() {
        std::uint64_t m = eng_() >> 11;
        return make_rat(Int(static_cast<unsigned long>(m)), Int(1) << 53);
    }

    double unit_double() { return double(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi] over a dyadic grid.
    Rat rat_in(const Rat& lo, const Rat& hi) { return lo + unit_rat() * (hi - lo); }

private:
    std::mt19937_64 eng_;
};

}  // namespace limdim

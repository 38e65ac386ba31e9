#pragma once

#include "limdim/exact_real.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace limdim {

struct RealCoord {
    Rat x;  // in [0,1]
};

struct PAdicCoord {
    Rat witness;  // element of Z_p as a rational with p-free denominator
};

struct GaussCoord {
    Rat re, im;  // in the fundamental square [-1/2, 1/2)^2
};

struct MissingCoord {
    std::vector<std::uint8_t> word;  // i in J^k; value = f_i(z)
    Rat value;
};

using Coordinate = std::variant<RealCoord, PAdicCoord, GaussCoord, MissingCoord>;

struct Point {
    std::vector<Coordinate> coords;
};

/// Exact distance value; Gaussian factors carry the squared Euclidean
/// distance so every comparison stays rational.
struct Dist {
    Rat v;
    bool squared = false;

    static Dist plain(Rat value) { return Dist{std::move(value), false}; }
    static Dist sqrt_of(Rat value) { return Dist{std::move(value), true}; }

    bool is_zero() const { return v == 0; }
    double to_double() const {
        double d = rat_to_double(v);
        return squared ? std::sqrt(d) : d;
    }

    static int sgn(int raw) { return raw < 0 ? -1 : (raw > 0 ? 1 : 0); }

    int cmp(const Dist& o) const {
        if (squared == o.squared) return sgn(::cmp(v, o.v));
        const Rat& s = squared ? v : o.v;      // squared side
        const Rat& p = squared ? o.v : v;      // plain side
        int c = sgn(::cmp(s, Rat(p * p)));
        return squared ? c : -c;
    }

    /// distance vs rational r.
    int cmp(const Rat& r) const {
        if (r <= 0) return v == 0 && r == 0 ? 0 : 1;
        if (!squared) return sgn(::cmp(v, r));
        return sgn(::cmp(v, Rat(r * r)));
    }

    /// distance vs ExactReal r > 0.
    int cmp(const ExactReal& r) const {
        if (v == 0) return -1;
        if (!squared) return -r.cmp(v);
        return -r.pow(2).cmp(v);
    }

    /// sign(distance - (a + r)) for rational a >= 0 and ExactReal r; used by
    /// ball-rectangle intersection tests. `undecided` only matters on the
    /// Gaussian sqrt path when enclosures cannot separate the sides.
    int cmp_plus(const Rat& a, const ExactReal& r, int undecided) const;
};

std::string coordinate_to_string(const Coordinate& c);
std::string point_to_string(const Point& p);

}  // namespace limdim

#pragma once

#include "limdim/exact_real.hpp"

#include <optional>

namespace limdim {

/// Ahlfors exponent, kept symbolic so (r*beta)^delta stays exact where the
/// algebra allows: either a rational, or log(num)/log(den) for missing-digit
/// factors (delta = log #J / log b).
struct DeltaExp {
    enum class Kind { Rational, LogRatio };
    Kind kind = Kind::Rational;
    Rat rational{1};
    Int log_num{2}, log_den{3};

    static DeltaExp from_rat(Rat r) {
        DeltaExp d;
        d.kind = Kind::Rational;
        d.rational = std::move(r);
        return d;
    }
    static DeltaExp log_ratio(Int num, Int den) {
        DeltaExp d;
        d.kind = Kind::LogRatio;
        d.log_num = std::move(num);
        d.log_den = std::move(den);
        return d;
    }
    double to_double() const {
        if (kind == Kind::Rational) return rat_to_double(rational);
        return rat_log(Rat(log_num)) / rat_log(Rat(log_den));
    }
};

/// x^delta, exact when representable (rational delta always; log-ratio delta
/// when x's base is a power of the ratio's denominator).
std::optional<ExactReal> pow_delta(const ExactReal& x, const DeltaExp& delta);

/// One product factor's regularity data: c_lower * r^delta <= mu(B(x,r)) <=
/// c_upper * r^delta for r < r_max.
struct AhlforsFactor {
    DeltaExp delta;
    Rat c_lower{1};
    Rat c_upper{1};
    Rat r_max{1};

    void validate() const;
};

}  // namespace limdim

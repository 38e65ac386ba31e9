#pragma once

#include "limdim/rational.hpp"

namespace limdim {

/// Positive real represented exactly as base^exponent with rational base > 0
/// and rational exponent. Closed under multiplication and rational powers;
/// comparisons against other ExactReals and rationals reduce to integer-power
/// comparisons, so separation/membership tests never touch floating point.
class ExactReal {
public:
    ExactReal() : base_(1), exp_(0) {}
    static ExactReal one() { return ExactReal(); }
    static ExactReal from_rat(const Rat& r);
    static ExactReal power(const Rat& base, const Rat& exp);

    const Rat& base() const { return base_; }
    const Rat& exponent() const { return exp_; }

    bool is_one() const { return exp_ == 0 || base_ == 1; }
    /// True when the exponent is an integer, i.e. the value is rational.
    bool is_rational() const;
    Rat to_rational() const;  // requires is_rational()

    /// -1 / 0 / +1 against another value. Exact except for astronomically
    /// sized cross-base powers, where a guarded log comparison decides.
    int cmp(const ExactReal& o) const;
    int cmp(const Rat& r) const;

    ExactReal mul(const ExactReal& o) const;
    ExactReal mul_rat(const Rat& r) const;
    ExactReal pow(const Rat& t) const;

    /// Smallest integer >= value (value must be > 0).
    Int ceil_int() const;

    /// Certified rational bounds: lower <= value <= upper, gap < 2^-bits * value-scale.
    Rat lower_bound(unsigned bits) const;
    Rat upper_bound(unsigned bits) const;

    double log() const;
    double to_double() const;

    /// Rewrite an integer base as its smallest integer root (4^e -> 2^(2e)),
    /// so sequences over a common base compare exponents exactly.
    ExactReal normalized() const;

private:
    ExactReal(Rat b, Rat e) : base_(std::move(b)), exp_(std::move(e)) { canonicalize(); }
    void canonicalize();
    Rat base_;  // > 0
    Rat exp_;
};

/// sign(a + x - y) for rational a >= 0 and positive x, y. Exact along the
/// rational and shared-base fast paths; otherwise certified enclosures with
/// escalating precision decide, and `undecided` is returned if 1024 bits
/// cannot separate the sides (callers pick the conservative direction).
int cmp_rat_plus_er_vs_er(const Rat& a, const ExactReal& x, const ExactReal& y, int undecided);

/// sign(w + x - y) for positive ExactReals; same guarantees as above.
int cmp_er_plus_er_vs_er(const ExactReal& w, const ExactReal& x, const ExactReal& y, int undecided);

}  // namespace limdim

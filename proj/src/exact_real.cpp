#include "limdim/exact_real.hpp"

#include <cmath>
#include <stdexcept>

namespace limdim {

namespace {

// Refuse exact cross-powers past ~2^24 bits; the guarded log path takes over.
constexpr double kMaxExactBits = double(1 << 24);

double bits_of(const Rat& r) {
    return double(mpz_sizeinbase(r.get_num().get_mpz_t(), 2)) +
           double(mpz_sizeinbase(r.get_den().get_mpz_t(), 2));
}

int sgn(int raw) { return raw < 0 ? -1 : (raw > 0 ? 1 : 0); }

long to_long_checked(const Int& z, const char* what) {
    if (!z.fits_slong_p()) throw std::overflow_error(std::string("exponent too large in ") + what);
    return z.get_si();
}

}  // namespace

void ExactReal::canonicalize() {
    if (base_ <= 0) throw std::domain_error("ExactReal base must be positive");
    if (base_ == 1 || exp_ == 0) {
        base_ = 1;
        exp_ = 0;
        return;
    }
    if (base_ < 1) {  // normalize to base > 1 so exponent sign tracks log sign
        base_ = 1 / base_;
        exp_ = -exp_;
    }
}

ExactReal ExactReal::from_rat(const Rat& r) { return ExactReal(r, Rat(1)); }

ExactReal ExactReal::power(const Rat& base, const Rat& exp) { return ExactReal(base, exp); }

bool ExactReal::is_rational() const { return exp_.get_den() == 1; }

Rat ExactReal::to_rational() const {
    if (!is_rational()) throw std::domain_error("ExactReal is irrational");
    if (is_one()) return Rat(1);
    return rat_pow_int(base_, to_long_checked(exp_.get_num(), "to_rational"));
}

double ExactReal::log() const {
    if (is_one()) return 0.0;
    return rat_to_double(exp_) * rat_log(base_);
}

double ExactReal::to_double() const { return std::exp(log()); }

int ExactReal::cmp(const ExactReal& o) const {
    if (base_ == o.base_) {
        // same base > 1 (canonical): order follows exponents
        if (is_one() && o.is_one()) return 0;
        return sgn(::cmp(exp_, o.exp_));
    }
    if (is_rational() && o.is_rational()) {
        Rat a = to_rational(), b = o.to_rational();
        return sgn(::cmp(a, b));
    }
    // cross powers: raise both sides to lcm of exponent denominators
    Int d1 = exp_.get_den(), d2 = o.exp_.get_den();
    Int l;
    mpz_lcm(l.get_mpz_t(), d1.get_mpz_t(), d2.get_mpz_t());
    Int e1 = exp_.get_num() * (l / d1);
    Int e2 = o.exp_.get_num() * (l / d2);
    double cost1 = std::abs(mpz_get_d(e1.get_mpz_t())) * bits_of(base_);
    double cost2 = std::abs(mpz_get_d(e2.get_mpz_t())) * bits_of(o.base_);
    if (cost1 < kMaxExactBits && cost2 < kMaxExactBits) {
        Rat p1 = rat_pow_int(base_, to_long_checked(e1, "cmp"));
        Rat p2 = rat_pow_int(o.base_, to_long_checked(e2, "cmp"));
        return sgn(::cmp(p1, p2));
    }
    // guarded log fallback; only reachable for gigantic well-separated values
    double la = log(), lb = o.log();
    double margin = 1e-9 * std::max({1.0, std::fabs(la), std::fabs(lb)});
    if (la < lb - margin) return -1;
    if (la > lb + margin) return 1;
    throw std::runtime_error("ExactReal::cmp: values too large for exact comparison");
}

int ExactReal::cmp(const Rat& r) const {
    if (r <= 0) return 1;  // value is always positive
    return cmp(ExactReal::from_rat(r));
}

ExactReal ExactReal::mul(const ExactReal& o) const {
    if (is_one()) return o;
    if (o.is_one()) return *this;
    Int d1 = exp_.get_den(), d2 = o.exp_.get_den();
    Int l;
    mpz_lcm(l.get_mpz_t(), d1.get_mpz_t(), d2.get_mpz_t());
    long e1 = to_long_checked(exp_.get_num() * (l / d1), "mul");
    long e2 = to_long_checked(o.exp_.get_num() * (l / d2), "mul");
    Rat b = rat_pow_int(base_, e1) * rat_pow_int(o.base_, e2);
    ExactReal r(b, make_rat(Int(1), l));
    // products like 3^(1/2) * 3^(1/2) land as 9^(1/2); recover the rational
    if (l != 1) return r.normalized();
    return r;
}

ExactReal ExactReal::mul_rat(const Rat& r) const {
    if (r <= 0) throw std::domain_error("ExactReal::mul_rat needs positive factor");
    return mul(ExactReal::from_rat(r));
}

ExactReal ExactReal::pow(const Rat& t) const {
    if (is_one() || t == 0) return ExactReal::one();
    return ExactReal(base_, Rat(exp_ * t));
}

Rat ExactReal::lower_bound(unsigned bits) const {
    if (is_one()) return Rat(1);
    Rat b = base_;
    Rat e = exp_;
    if (e < 0) {  // (p/q)^(-u/v) = (q/p)^(u/v)
        b = 1 / b;
        e = -e;
    }
    unsigned long v = static_cast<unsigned long>(to_long_checked(e.get_den(), "lower_bound"));
    long u = to_long_checked(e.get_num(), "lower_bound");
    Int pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), b.get_num().get_mpz_t(), static_cast<unsigned long>(u));
    mpz_pow_ui(pd.get_mpz_t(), b.get_den().get_mpz_t(), static_cast<unsigned long>(u));
    Int shifted = pn << (static_cast<size_t>(v) * bits);
    Int t = shifted / pd;  // floor
    Int root = iroot_floor(t, v);
    Int scale = Int(1) << bits;
    return make_rat(root, scale);
}

Rat ExactReal::upper_bound(unsigned bits) const {
    if (is_one()) return Rat(1);
    Rat b = base_;
    Rat e = exp_;
    if (e < 0) {
        b = 1 / b;
        e = -e;
    }
    unsigned long v = static_cast<unsigned long>(to_long_checked(e.get_den(), "upper_bound"));
    long u = to_long_checked(e.get_num(), "upper_bound");
    Int pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), b.get_num().get_mpz_t(), static_cast<unsigned long>(u));
    mpz_pow_ui(pd.get_mpz_t(), b.get_den().get_mpz_t(), static_cast<unsigned long>(u));
    Int shifted = pn << (static_cast<size_t>(v) * bits);
    Int t = shifted / pd;
    Int root = iroot_floor(t, v) + 1;
    Int scale = Int(1) << bits;
    return make_rat(root, scale);
}

Int ExactReal::ceil_int() const {
    if (is_one()) return Int(1);
    if (is_rational()) return rat_ceil(to_rational());
    Int cand = rat_ceil(upper_bound(64));
    // exact adjustment: smallest n with value <= n
    while (cand > 1 && cmp(Rat(cand - 1)) <= 0) --cand;
    while (cmp(Rat(cand)) > 0) ++cand;
    return cand;
}

ExactReal ExactReal::normalized() const {
    if (is_one()) return *this;
    if (base_.get_den() == 1 && base_.get_num() > 1) {
        auto [root, t] = largest_power_root(base_.get_num());
        if (t > 1) return ExactReal(Rat(root), Rat(exp_ * static_cast<long>(t)));
    }
    return *this;
}

int cmp_rat_plus_er_vs_er(const Rat& a, const ExactReal& x, const ExactReal& y, int undecided) {
    if (x.is_rational() && y.is_rational()) {
        Rat lhs = a + x.to_rational();
        Rat rhs = y.to_rational();
        return sgn(::cmp(lhs, rhs));
    }
    for (unsigned bits = 64; bits <= 1024; bits *= 2) {
        Rat xl = x.lower_bound(bits), xu = x.upper_bound(bits);
        Rat yl = y.lower_bound(bits), yu = y.upper_bound(bits);
        if (a + xu < yl) return -1;
        if (a + xl > yu) return 1;
    }
    return undecided;
}

int cmp_er_plus_er_vs_er(const ExactReal& w, const ExactReal& x, const ExactReal& y, int undecided) {
    if (w.is_rational()) return cmp_rat_plus_er_vs_er(w.to_rational(), x, y, undecided);
    if (x.is_rational()) return cmp_rat_plus_er_vs_er(x.to_rational(), w, y, undecided);
    for (unsigned bits = 64; bits <= 1024; bits *= 2) {
        Rat wl = w.lower_bound(bits), wu = w.upper_bound(bits);
        Rat xl = x.lower_bound(bits), xu = x.upper_bound(bits);
        Rat yl = y.lower_bound(bits), yu = y.upper_bound(bits);
        if (wu + xu < yl) return -1;
        if (wl + xl > yu) return 1;
    }
    return undecided;
}

}  // namespace limdim

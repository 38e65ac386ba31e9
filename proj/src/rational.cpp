#include "limdim/rational.hpp"

#include <cctype>
#include <cmath>

namespace limdim {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        return make_rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        return Rat(Int(s));
    }
    // decimal literal: sign, integer part, fractional part
    std::string head = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    for (char c : frac)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("bad decimal literal: " + s);
    bool neg = !head.empty() && head[0] == '-';
    if (neg || (!head.empty() && head[0] == '+')) head = head.substr(1);
    if (head.empty()) head = "0";
    Int ip(head);
    Int scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Int fp = frac.empty() ? Int(0) : Int(frac);
    Int num = ip * scale + fp;
    if (neg) num = -num;
    return make_rat(num, scale);
}

std::string rat_to_string(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat rat_pow_int(const Rat& r, long e) {
    if (e == 0) return Rat(1);
    bool inv = e < 0;
    unsigned long ue = inv ? static_cast<unsigned long>(-(e + 1)) + 1ul : static_cast<unsigned long>(e);
    if (inv && r == 0) throw std::domain_error("zero to negative power");
    Int num, den;
    mpz_pow_ui(num.get_mpz_t(), r.get_num().get_mpz_t(), ue);
    mpz_pow_ui(den.get_mpz_t(), r.get_den().get_mpz_t(), ue);
    return inv ? make_rat(den, num) : make_rat(num, den);
}

namespace {
double log_mpz(const Int& z) {
    signed long exp2;
    double m = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(m) + static_cast<double>(exp2) * M_LN2;
}
}  // namespace

double rat_log(const Rat& r) {
    if (r <= 0) throw std::domain_error("log of non-positive rational");
    return log_mpz(r.get_num()) - log_mpz(r.get_den());
}

double rat_to_double(const Rat& r) { return mpq_get_d(r.get_mpq_t()); }

Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

Int rat_ceil(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

long padic_valuation(const Rat& r, const Int& p) {
    if (r == 0) throw std::domain_error("valuation of zero");
    Int tmp;
    long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), r.get_num().get_mpz_t(), p.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), r.get_den().get_mpz_t(), p.get_mpz_t()));
    return vn - vd;
}

Int iroot_floor(const Int& x, unsigned long n) {
    if (x < 0) throw std::domain_error("root of negative");
    Int r;
    mpz_root(r.get_mpz_t(), x.get_mpz_t(), n);
    return r;
}

std::pair<Int, unsigned long> largest_power_root(const Int& n) {
    if (n < 1) throw std::domain_error("largest_power_root needs n >= 1");
    if (n == 1) return {Int(1), 1};
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (unsigned long t = bits; t >= 2; --t) {
        Int r = iroot_floor(n, t);
        if (r <= 1) continue;
        Int chk;
        mpz_pow_ui(chk.get_mpz_t(), r.get_mpz_t(), t);
        if (chk == n) {
            auto [m, inner] = largest_power_root(r);
            return {m, inner * t};
        }
    }
    return {n, 1};
}

}  // namespace limdim

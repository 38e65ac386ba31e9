#include "limdim/system.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace limdim {

std::string kind_name(SystemKind k) {
    switch (k) {
        case SystemKind::RealLattice: return "real_lattice";
        case SystemKind::PAdic: return "p_adic";
        case SystemKind::Gaussian: return "gaussian";
        case SystemKind::MissingDigit: return "missing_digit";
    }
    return "?";
}

std::string level_to_string(const Level& l) {
    std::ostringstream os;
    if (std::holds_alternative<IntLevel>(l)) {
        os << "q=" << std::get<IntLevel>(l).q.get_str();
    } else if (std::holds_alternative<ExpLevel>(l)) {
        os << "k=" << std::get<ExpLevel>(l).k;
    } else {
        const auto& g = std::get<GaussLevel>(l);
        os << "q=" << g.re.get_str() << "+" << g.im.get_str() << "i";
    }
    return os.str();
}

bool level_equal(const Level& a, const Level& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<IntLevel>(a))
        return std::get<IntLevel>(a).q == std::get<IntLevel>(b).q;
    if (std::holds_alternative<ExpLevel>(a))
        return std::get<ExpLevel>(a).k == std::get<ExpLevel>(b).k;
    return std::get<GaussLevel>(a).re == std::get<GaussLevel>(b).re &&
           std::get<GaussLevel>(a).im == std::get<GaussLevel>(b).im;
}

std::vector<Rat> ThetaTable::at(const Int& q, int n) const {
    auto it = per_level.find(q);
    if (it != per_level.end()) {
        if (static_cast<int>(it->second.size()) != n)
            throw ValidationError("theta entry arity does not match n");
        return it->second;
    }
    if (static_cast<int>(fallback.size()) == n) return fallback;
    if (fallback.empty()) return std::vector<Rat>(n, Rat(0));  // homogeneous setting
    throw ValidationError("theta table arity does not match n");
}

void SystemConfig::validate() const {
    if (n < 1) throw ValidationError("n must be >= 1");
    if (static_cast<int>(factors.size()) != n)
        throw ValidationError("factors length must equal n");
    for (const auto& f : factors) f.validate();
    if (enum_cap < 1) throw ValidationError("enumeration cap must be positive");
    switch (kind) {
        case SystemKind::RealLattice: {
            auto check = [](const std::vector<Rat>& t) {
                for (const auto& v : t)
                    if (v < 0 || v > 1) throw ValidationError("theta values must lie in [0,1]");
            };
            if (!theta.fallback.empty()) check(theta.fallback);
            for (const auto& [q, t] : theta.per_level) {
                if (static_cast<int>(t.size()) != n)
                    throw ValidationError("theta entry arity does not match n");
                check(t);
            }
            break;
        }
        case SystemKind::PAdic: {
            if (mpz_probab_prime_p(prime.get_mpz_t(), 30) == 0)
                throw ValidationError("p must be prime");
            if (trunc_depth < 1) throw ValidationError("truncation depth must be >= 1");
            break;
        }
        case SystemKind::Gaussian:
            break;
        case SystemKind::MissingDigit: {
            if (base < 3) throw ValidationError("missing-digit base must be >= 3");
            std::set<int> uniq(digit_set.begin(), digit_set.end());
            if (uniq.size() != digit_set.size()) throw ValidationError("digit set has duplicates");
            if (digit_set.size() < 2) throw ValidationError("digit set needs at least 2 digits");
            if (static_cast<long>(digit_set.size()) >= base)
                throw ValidationError("digit set must be a proper subset of {0..b-1}");
            for (int d : digit_set)
                if (d < 0 || d >= base) throw ValidationError("digit outside 0..b-1");
            if (!std::is_sorted(digit_set.begin(), digit_set.end()))
                throw ValidationError("digit set must be sorted");
            if (anchor < 0 || anchor >= 1)
                throw ValidationError("anchor must lie in [0,1)");
            // anchor must have an eventually periodic base-b expansion over J
            {
                Rat r = anchor;
                std::set<std::string> seen;
                for (;;) {
                    std::string key = r.get_str();
                    if (!seen.insert(key).second) break;
                    Rat scaled = r * base;
                    Int d = rat_floor(scaled);
                    if (std::find(digit_set.begin(), digit_set.end(), int(d.get_si())) ==
                        digit_set.end())
                        throw ValidationError("anchor digit expansion leaves the digit set");
                    r = scaled - Rat(d);
                }
            }
            break;
        }
    }
}

Rat SystemConfig::space_diameter() const {
    switch (kind) {
        case SystemKind::RealLattice: return Rat(1);
        case SystemKind::PAdic: return Rat(1);
        case SystemKind::Gaussian: return Rat(1);  // wrapped torus metric, diam <= sqrt(2)/2 < 1
        case SystemKind::MissingDigit:
            return make_rat(Int(digit_set.back() - digit_set.front()), Int(base - 1));
    }
    return Rat(1);
}

SystemConfig make_real_lattice(int n) {
    SystemConfig cfg;
    cfg.kind = SystemKind::RealLattice;
    cfg.n = n;
    AhlforsFactor f;
    f.delta = DeltaExp::from_rat(Rat(1));
    f.c_lower = Rat(1);
    f.c_upper = Rat(2);  // boundary truncation on [0,1]
    f.r_max = Rat(1);
    cfg.factors.assign(n, f);
    return cfg;
}

SystemConfig make_padic(const Int& p, int n, long trunc_depth) {
    SystemConfig cfg;
    cfg.kind = SystemKind::PAdic;
    cfg.n = n;
    cfg.prime = p;
    cfg.trunc_depth = trunc_depth;
    AhlforsFactor f;
    f.delta = DeltaExp::from_rat(Rat(1));
    f.c_lower = make_rat(Int(1), p);  // open ball of radius r has Haar measure in [r/p, r)
    f.c_upper = Rat(1);
    f.r_max = Rat(1);
    cfg.factors.assign(n, f);
    return cfg;
}

SystemConfig make_gaussian() {
    SystemConfig cfg;
    cfg.kind = SystemKind::Gaussian;
    cfg.n = 1;
    AhlforsFactor f;
    f.delta = DeltaExp::from_rat(Rat(2));
    // wrapped metric on the unit torus: mu(B(x,r)) = pi r^2 for r <= 1/2
    f.c_lower = Rat(3);
    f.c_upper = make_rat(Int(22), Int(7));
    f.r_max = make_rat(Int(1), Int(2));
    cfg.factors.assign(1, f);
    return cfg;
}

SystemConfig make_missing_digit(long base, std::vector<int> digits, std::optional<Rat> anchor) {
    SystemConfig cfg;
    cfg.kind = SystemKind::MissingDigit;
    cfg.n = 1;
    cfg.base = base;
    std::sort(digits.begin(), digits.end());
    cfg.digit_set = std::move(digits);
    cfg.anchor = anchor ? *anchor
                        : make_rat(Int(cfg.digit_set.front()), Int(base - 1));
    AhlforsFactor f;
    f.delta = DeltaExp::log_ratio(Int(static_cast<long>(cfg.digit_set.size())), Int(base));
    f.c_lower = make_rat(Int(1), Int(static_cast<long>(cfg.digit_set.size())));
    f.c_upper = Rat(3 * base);
    f.r_max = Rat(1);
    cfg.factors.assign(1, f);
    return cfg;
}

LevelWeight beta_weight(const SystemConfig& cfg, const Level& level) {
    LevelWeight w;
    w.level = level;
    switch (cfg.kind) {
        case SystemKind::RealLattice: {
            if (!std::holds_alternative<IntLevel>(level))
                throw ValidationError("real lattice level must be an integer q");
            const Int& q = std::get<IntLevel>(level).q;
            if (q < 1) throw ValidationError("level q must be >= 1");
            w.beta = ExactReal::from_rat(Rat(q)).normalized();
            break;
        }
        case SystemKind::PAdic: {
            if (!std::holds_alternative<ExpLevel>(level))
                throw ValidationError("p-adic level must be an exponent k");
            long k = std::get<ExpLevel>(level).k;
            if (k < 1) throw ValidationError("level exponent k must be >= 1");
            w.beta = ExactReal::power(Rat(cfg.prime), Rat(k));
            break;
        }
        case SystemKind::Gaussian: {
            if (!std::holds_alternative<GaussLevel>(level))
                throw ValidationError("gaussian level must be a Gaussian integer");
            const auto& g = std::get<GaussLevel>(level);
            if (g.re == 0 && g.im == 0) throw ValidationError("gaussian level must be nonzero");
            Int normsq = g.re * g.re + g.im * g.im;
            w.beta = ExactReal::power(Rat(normsq), make_rat(Int(1), Int(2))).normalized();
            break;
        }
        case SystemKind::MissingDigit: {
            if (!std::holds_alternative<ExpLevel>(level))
                throw ValidationError("missing-digit level must be an exponent k");
            long k = std::get<ExpLevel>(level).k;
            if (k < 1) throw ValidationError("level exponent k must be >= 1");
            w.beta = ExactReal::power(Rat(cfg.base), Rat(k)).normalized();
            break;
        }
    }
    w.log_beta = w.beta.log();
    return w;
}

std::vector<int> padic_digits(const Rat& x, const Int& p, long count) {
    Int u = x.get_num(), v = x.get_den();
    if (mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t()))
        throw ValidationError("not a p-adic integer: denominator divisible by p");
    Int vinv;
    if (mpz_invert(vinv.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t()) == 0)
        throw ValidationError("denominator not invertible mod p");
    std::vector<int> out;
    out.reserve(count);
    for (long i = 0; i < count; ++i) {
        Int d = (u % p) * vinv % p;
        if (d < 0) d += p;
        out.push_back(static_cast<int>(d.get_si()));
        u = (u - d * v) / p;  // exact by construction
    }
    return out;
}

long padic_effective_prefix(const Int& p, const ExactReal& radius, const Rat& scale) {
    // smallest m >= 0 with p^-m < scale * radius
    double est = -(radius.log() + rat_log(scale)) / rat_log(Rat(p));
    long m = std::max(0L, static_cast<long>(std::floor(est)) - 2);
    auto ball_holds = [&](long mm) {
        Rat pw = rat_pow_int(Rat(p), -mm);
        return radius.mul_rat(scale).cmp(pw) > 0;  // p^-mm < scale*radius
    };
    while (!ball_holds(m)) ++m;
    while (m > 0 && ball_holds(m - 1)) --m;
    return m;
}

std::vector<int> anchor_digits(const Rat& z, long b, long count) {
    std::vector<int> out;
    out.reserve(count);
    Rat r = z;
    for (long i = 0; i < count; ++i) {
        Rat scaled = r * b;
        Int d = rat_floor(scaled);
        out.push_back(static_cast<int>(d.get_si()));
        r = scaled - Rat(d);
    }
    return out;
}

Rat missing_value(const SystemConfig& cfg, const std::vector<std::uint8_t>& word) {
    Int w(0);
    for (auto d : word) w = w * cfg.base + d;
    Int bk;
    mpz_ui_pow_ui(bk.get_mpz_t(), static_cast<unsigned long>(cfg.base), word.size());
    // f_w(z) = (W + z)/b^k
    return make_rat(w * cfg.anchor.get_den() + cfg.anchor.get_num(),
                    bk * cfg.anchor.get_den());
}

namespace {

Rat wrap_to_half(const Rat& d) {
    // reduce mod 1 into [-1/2, 1/2]
    Rat shifted = d + make_rat(Int(1), Int(2));
    Int fl = rat_floor(shifted);
    Rat r = d - Rat(fl);
    return r;
}

}  // namespace

Dist factor_distance(const SystemConfig& cfg, const Coordinate& a, const Coordinate& b) {
    switch (cfg.kind) {
        case SystemKind::RealLattice: {
            if (!std::holds_alternative<RealCoord>(a) || !std::holds_alternative<RealCoord>(b))
                throw ValidationError("coordinate kind mismatch");
            Rat d = std::get<RealCoord>(a).x - std::get<RealCoord>(b).x;
            if (d < 0) d = -d;
            return Dist::plain(d);
        }
        case SystemKind::PAdic: {
            if (!std::holds_alternative<PAdicCoord>(a) || !std::holds_alternative<PAdicCoord>(b))
                throw ValidationError("coordinate kind mismatch");
            Rat d = std::get<PAdicCoord>(a).witness - std::get<PAdicCoord>(b).witness;
            if (d == 0) return Dist::plain(Rat(0));
            long v = padic_valuation(d, cfg.prime);
            return Dist::plain(rat_pow_int(Rat(cfg.prime), -v));
        }
        case SystemKind::Gaussian: {
            if (!std::holds_alternative<GaussCoord>(a) || !std::holds_alternative<GaussCoord>(b))
                throw ValidationError("coordinate kind mismatch");
            // wrapped (torus) metric; representatives live in [-1/2, 1/2)^2
            Rat dre = wrap_to_half(std::get<GaussCoord>(a).re - std::get<GaussCoord>(b).re);
            Rat dim = wrap_to_half(std::get<GaussCoord>(a).im - std::get<GaussCoord>(b).im);
            return Dist::sqrt_of(dre * dre + dim * dim);
        }
        case SystemKind::MissingDigit: {
            if (!std::holds_alternative<MissingCoord>(a) || !std::holds_alternative<MissingCoord>(b))
                throw ValidationError("coordinate kind mismatch");
            Rat d = std::get<MissingCoord>(a).value - std::get<MissingCoord>(b).value;
            if (d < 0) d = -d;
            return Dist::plain(d);
        }
    }
    throw ValidationError("unknown kind");
}

Dist distance(const SystemConfig& cfg, const Point& a, const Point& b) {
    if (a.coords.size() != b.coords.size() || static_cast<int>(a.coords.size()) != cfg.n)
        throw ValidationError("point arity mismatch");
    Dist best = factor_distance(cfg, a.coords[0], b.coords[0]);
    for (int i = 1; i < cfg.n; ++i) {
        Dist d = factor_distance(cfg, a.coords[i], b.coords[i]);
        if (d.cmp(best) > 0) best = d;
    }
    return best;
}

}  // namespace limdim

#include "limdim/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace limdim {

namespace {

Int pow_int(const Int& b, long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

struct FactorSeparation {
    Dist min_dist = Dist::plain(Rat(2));  // sentinel above any in-space distance
    std::string pair;
    Int count{0};
    bool nontrivial = false;
};

FactorSeparation separation_1d(const std::vector<Coordinate>& pts, bool missing) {
    // coordinates arrive sorted by value
    FactorSeparation rep;
    rep.count = Int(static_cast<unsigned long>(pts.size()));
    if (pts.size() < 2) return rep;
    rep.nontrivial = true;
    auto value = [&](const Coordinate& c) -> const Rat& {
        return missing ? std::get<MissingCoord>(c).value : std::get<RealCoord>(c).x;
    };
    Rat best = value(pts[1]) - value(pts[0]);
    size_t at = 0;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        Rat d = value(pts[i + 1]) - value(pts[i]);
        if (d < best) {
            best = d;
            at = i;
        }
    }
    rep.min_dist = Dist::plain(best);
    rep.pair = coordinate_to_string(pts[at]) + " , " + coordinate_to_string(pts[at + 1]);
    return rep;
}

FactorSeparation separation_padic(const SystemConfig& cfg, const Level& level,
                                  const std::vector<Coordinate>& pts) {
    FactorSeparation rep;
    rep.count = Int(static_cast<unsigned long>(pts.size()));
    if (pts.size() < 2) return rep;
    rep.nontrivial = true;
    long k = std::get<ExpLevel>(level).k;
    std::vector<std::pair<std::vector<int>, size_t>> keyed(pts.size());
    for (size_t i = 0; i < pts.size(); ++i)
        keyed[i] = {padic_digits(std::get<PAdicCoord>(pts[i]).witness, cfg.prime, k), i};
    std::sort(keyed.begin(), keyed.end());
    long best_lcp = -1;
    size_t at = 0;
    for (size_t i = 0; i + 1 < keyed.size(); ++i) {
        long lcp = 0;
        while (lcp < k && keyed[i].first[lcp] == keyed[i + 1].first[lcp]) ++lcp;
        if (lcp > best_lcp) {
            best_lcp = lcp;
            at = i;
        }
    }
    rep.min_dist = Dist::plain(rat_pow_int(Rat(cfg.prime), -best_lcp));
    rep.pair = coordinate_to_string(pts[keyed[at].second]) + " , " +
               coordinate_to_string(pts[keyed[at + 1].second]);
    return rep;
}

FactorSeparation separation_gauss(const Level& level,
                                  const std::vector<Coordinate>& pts) {
    FactorSeparation rep;
    rep.count = Int(static_cast<unsigned long>(pts.size()));
    if (pts.size() < 2) return rep;
    rep.nontrivial = true;
    const auto& g = std::get<GaussLevel>(level);
    const Int &a = g.re, &b = g.im;
    Int normsq = a * a + b * b;
    // recover integer numerators: u = (a*reN - b*imN)/N, v = (b*reN + a*imN)/N
    std::vector<std::pair<Int, Int>> num(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto& c = std::get<GaussCoord>(pts[i]);
        Int reN = c.re.get_num() * (normsq / c.re.get_den());
        Int imN = c.im.get_num() * (normsq / c.im.get_den());
        num[i] = {(a * reN - b * imN) / normsq, (b * reN + a * imN) / normsq};
    }
    // wrapped squared distance * N = min over shifts s of |Delta - q*s|^2 / N;
    // numerators are tiny, so the pair scan runs on int64
    const long al = a.get_si(), bl = b.get_si();
    std::vector<std::pair<long, long>> nl(num.size());
    bool small = a.fits_slong_p() && b.fits_slong_p();
    for (size_t i = 0; i < num.size() && small; ++i) {
        small = num[i].first.fits_slong_p() && num[i].second.fits_slong_p();
        if (small) nl[i] = {num[i].first.get_si(), num[i].second.get_si()};
    }
    if (!small) throw ValidationError("gaussian level too large for separation scan");
    long best = -1;
    size_t bi = 0, bj = 1;
    for (size_t i = 0; i < nl.size(); ++i) {
        for (size_t j = i + 1; j < nl.size(); ++j) {
            long du = nl[i].first - nl[j].first;
            long dv = nl[i].second - nl[j].second;
            long local = -1;
            for (int sr = -1; sr <= 1; ++sr)
                for (int si = -1; si <= 1; ++si) {
                    // q*(sr+si*i) = (a*sr - b*si) + (b*sr + a*si) i
                    long wu = du - (al * sr - bl * si);
                    long wv = dv - (bl * sr + al * si);
                    long nn = wu * wu + wv * wv;
                    if (local < 0 || nn < local) local = nn;
                }
            if (best < 0 || local < best) {
                best = local;
                bi = i;
                bj = j;
            }
        }
    }
    rep.min_dist = Dist::sqrt_of(make_rat(Int(best), normsq));
    rep.pair = coordinate_to_string(pts[bi]) + " , " + coordinate_to_string(pts[bj]);
    return rep;
}

}  // namespace

namespace {

// The real-lattice factor is an arithmetic progression: numerators p*td + tn
// over the fixed denominator q*td for consecutive p. The sorted-neighbor scan
// therefore reduces to the exact progression invariants.
FactorSeparation separation_real(const SystemConfig& cfg, const Level& level, int factor) {
    const Int& q = std::get<IntLevel>(level).q;
    Rat theta = cfg.theta.at(q, cfg.n).at(factor);
    Int lo = rat_ceil(-theta), hi = rat_floor(Rat(q) - theta);
    FactorSeparation rep;
    if (lo > hi) return rep;
    rep.count = hi - lo + 1;
    if (rep.count < 2) return rep;
    rep.nontrivial = true;
    const Int& td = theta.get_den();
    // consecutive numerators differ by exactly td: verify the progression span
    Int first = lo * td + theta.get_num();
    Int last = hi * td + theta.get_num();
    if (last - first != (hi - lo) * td)
        throw std::logic_error("real lattice numerators are not a progression");
    rep.min_dist = Dist::plain(make_rat(td, q * td));
    rep.pair = rat_to_string(make_rat(first, q * td)) + " , " +
               rat_to_string(make_rat(first + td, q * td));
    return rep;
}

}  // namespace

SeparationReport verify_separated(const SystemConfig& cfg, const Level& level) {
    cfg.validate();
    SeparationReport rep;
    rep.min_distance = Dist::plain(Rat(2));
    bool any = false;
    for (int i = 0; i < cfg.n; ++i) {
        FactorSeparation fs;
        if (cfg.kind == SystemKind::RealLattice) {
            fs = separation_real(cfg, level, i);
        } else {
            auto pts = enumerate_factor(cfg, level, i, nullptr);
            switch (cfg.kind) {
                case SystemKind::MissingDigit: fs = separation_1d(pts, true); break;
                case SystemKind::PAdic: fs = separation_padic(cfg, level, pts); break;
                case SystemKind::Gaussian: fs = separation_gauss(level, pts); break;
                default: break;
            }
        }
        rep.points_checked += fs.count;
        if (fs.nontrivial && (!any || fs.min_dist.cmp(rep.min_distance) < 0)) {
            rep.min_distance = fs.min_dist;
            rep.worst_pair = "factor " + std::to_string(i + 1) + ": " + fs.pair;
            any = true;
        }
    }
    if (!any) {
        rep.ok = true;
        rep.worst_pair = "fewer than 2 points per factor";
        return rep;
    }
    ExactReal beta_inv = beta_weight(cfg, level).beta.pow(Rat(-1));
    rep.ok = rep.min_distance.cmp(beta_inv) >= 0;
    return rep;
}

Point random_probe(const SystemConfig& cfg, const Level& level, Rng& rng) {
    Point p;
    p.coords.reserve(cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
        switch (cfg.kind) {
            case SystemKind::RealLattice:
                p.coords.push_back(RealCoord{rng.unit_rat()});
                break;
            case SystemKind::PAdic: {
                // random digit string of the configured depth
                Int w(0);
                for (long d = cfg.trunc_depth - 1; d >= 0; --d)
                    w = w * cfg.prime + static_cast<long>(rng.below(cfg.prime.get_ui()));
                p.coords.push_back(PAdicCoord{Rat(w)});
                break;
            }
            case SystemKind::Gaussian: {
                Rat half = make_rat(Int(1), Int(2));
                p.coords.push_back(GaussCoord{rng.unit_rat() - half, rng.unit_rat() - half});
                break;
            }
            case SystemKind::MissingDigit: {
                long k = std::get<ExpLevel>(level).k;
                std::vector<std::uint8_t> word(k + 8);
                for (auto& d : word)
                    d = static_cast<std::uint8_t>(
                        cfg.digit_set[rng.below(cfg.digit_set.size())]);
                p.coords.push_back(MissingCoord{word, missing_value(cfg, word)});
                break;
            }
        }
    }
    return p;
}

namespace {

Dist nearest_real(const SystemConfig& cfg, const Level& level, int factor, const Rat& x) {
    const Int& q = std::get<IntLevel>(level).q;
    Rat theta = cfg.theta.at(q, cfg.n).at(factor);
    Int lo = rat_ceil(-theta), hi = rat_floor(Rat(q) - theta);
    Rat t = Rat(q) * x - theta;
    Int p0 = rat_floor(t);
    Dist best = Dist::plain(Rat(2));
    for (Int p = p0 - 1; p <= p0 + 1; ++p) {
        if (p < lo || p > hi) continue;
        Rat d = x - make_rat(p * theta.get_den() + theta.get_num(), q * theta.get_den());
        if (d < 0) d = -d;
        if (Dist::plain(d).cmp(best) < 0) best = Dist::plain(d);
    }
    return best;
}

Dist nearest_padic(const SystemConfig& cfg, const Level& level, const Rat& x) {
    long k = std::get<ExpLevel>(level).k;
    Int pk = pow_int(cfg.prime, k);
    Int u = x.get_num() % pk;
    if (u < 0) u += pk;
    Int v = x.get_den() % pk;
    Int vinv;
    if (mpz_invert(vinv.get_mpz_t(), v.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw ValidationError("probe is not a p-adic integer");
    Int xr = u * vinv % pk;
    Int a0 = (pk - xr) % pk;
    if (a0 == 0) a0 = pk;
    Rat pt = make_rat(a0, Int(pk - 1));
    Rat diff = x - pt;
    if (diff == 0) return Dist::plain(Rat(0));
    long val = padic_valuation(diff, cfg.prime);
    return Dist::plain(rat_pow_int(Rat(cfg.prime), -val));
}

Dist nearest_gauss(const Level& level, const GaussCoord& c) {
    const auto& g = std::get<GaussLevel>(level);
    const Int &a = g.re, &b = g.im;
    Int normsq = a * a + b * b;
    Rat wre = c.re * Rat(a) - c.im * Rat(b);
    Rat wim = c.re * Rat(b) + c.im * Rat(a);
    Int u0 = rat_floor(wre), v0 = rat_floor(wim);
    Rat best(-1);
    for (int du = 0; du <= 1; ++du)
        for (int dv = 0; dv <= 1; ++dv) {
            Rat dre = wre - Rat(u0 + du);
            Rat dim = wim - Rat(v0 + dv);
            Rat nn = dre * dre + dim * dim;
            if (best < 0 || nn < best) best = nn;
        }
    return Dist::sqrt_of(best / Rat(normsq));
}

Dist nearest_sorted_values(const std::vector<Rat>& values, const Rat& x) {
    auto it = std::lower_bound(values.begin(), values.end(), x);
    Dist best = Dist::plain(Rat(2));
    if (it != values.end()) {
        Rat d = *it - x;
        if (d < 0) d = -d;
        best = Dist::plain(d);
    }
    if (it != values.begin()) {
        Rat d = x - *(it - 1);
        if (d < 0) d = -d;
        if (Dist::plain(d).cmp(best) < 0) best = Dist::plain(d);
    }
    return best;
}

}  // namespace

Dist nearest_level_distance(const SystemConfig& cfg, const Level& level, const Coordinate& probe) {
    switch (cfg.kind) {
        case SystemKind::RealLattice:
            return nearest_real(cfg, level, 0, std::get<RealCoord>(probe).x);
        case SystemKind::PAdic:
            return nearest_padic(cfg, level, std::get<PAdicCoord>(probe).witness);
        case SystemKind::Gaussian:
            return nearest_gauss(level, std::get<GaussCoord>(probe));
        case SystemKind::MissingDigit: {
            auto pts = enumerate_factor(cfg, level, 0, nullptr);
            std::vector<Rat> values;
            values.reserve(pts.size());
            for (const auto& c : pts) values.push_back(std::get<MissingCoord>(c).value);
            return nearest_sorted_values(values, std::get<MissingCoord>(probe).value);
        }
    }
    throw ValidationError("unknown kind");
}

namespace {

/// Integer-only probe sweep for the real lattice; the generic path costs a
/// handful of canonicalizations per probe, which dominates large level sweeps.
MaximalityReport maximal_real_fast(const SystemConfig& cfg, const Level& level, long probes,
                                   Rng& rng) {
    MaximalityReport rep;
    rep.worst_gap = Dist::plain(Rat(0));
    const Int& q = std::get<IntLevel>(level).q;
    struct FactorCtx {
        Int td, tn, lo, hi, den;  // den = q * td
    };
    std::vector<FactorCtx> fac(cfg.n);
    for (int f = 0; f < cfg.n; ++f) {
        Rat theta = cfg.theta.at(q, cfg.n).at(f);
        fac[f] = FactorCtx{theta.get_den(), theta.get_num(), rat_ceil(-theta),
                           rat_floor(Rat(q) - theta), Int(q * theta.get_den())};
    }
    bool ok = true;
    Int worst_num(0), worst_den(1);
    std::string worst_desc;
    Int g, t_num, p0, cand, best;
    for (long i = 0; i < probes; ++i) {
        std::vector<Rat> xs(cfg.n);
        for (auto& x : xs) x = rng.unit_rat();
        // per-factor nearest gap as a fraction best/(den*xd); product metric
        // takes the max across factors
        Int probe_num(0), probe_den(1);
        for (int f = 0; f < cfg.n; ++f) {
            const Int& xn = xs[f].get_num();
            const Int& xd = xs[f].get_den();
            t_num = q * xn * fac[f].td - fac[f].tn * xd;
            mpz_fdiv_q(p0.get_mpz_t(), t_num.get_mpz_t(), Int(fac[f].td * xd).get_mpz_t());
            bool have = false;
            for (long dp = -1; dp <= 1; ++dp) {
                cand = p0 + dp;
                if (cand < fac[f].lo || cand > fac[f].hi) continue;
                g = xn * fac[f].den - (cand * fac[f].td + fac[f].tn) * xd;
                if (g < 0) g = -g;
                if (!have || g < best) {
                    best = g;
                    have = true;
                }
            }
            Int d = fac[f].den * xd;
            if (!have) {
                best = d * 2;  // no candidate in range; cannot happen for q >= 1
            }
            // max over factors: best/d vs probe_num/probe_den
            if (f == 0 || best * probe_den > probe_num * d) {
                probe_num = best;
                probe_den = d;
            }
        }
        // strict maximality: gap < 1/q  <=>  probe_num * q < probe_den
        if (!(probe_num * q < probe_den)) ok = false;
        if (probe_num * worst_den > worst_num * probe_den) {
            worst_num = probe_num;
            worst_den = probe_den;
            rep.worst_gap = Dist::plain(make_rat(probe_num, probe_den));
            std::string desc;
            for (int f = 0; f < cfg.n; ++f)
                desc += (f ? "|" : "") + rat_to_string(xs[f]);
            worst_desc = desc;
        }
        ++rep.probes;
    }
    rep.ok = ok;
    rep.worst_probe = worst_desc;
    return rep;
}

}  // namespace

MaximalityReport verify_maximal(const SystemConfig& cfg, const Level& level, long probes,
                                Rng& rng) {
    cfg.validate();
    if (cfg.kind == SystemKind::RealLattice) return maximal_real_fast(cfg, level, probes, rng);
    MaximalityReport rep;
    rep.closed_ball = cfg.ultrametric();
    rep.worst_gap = Dist::plain(Rat(0));
    ExactReal beta_inv = beta_weight(cfg, level).beta.pow(Rat(-1));

    // per-factor nearest-point context (missing digit needs the sorted values)
    std::vector<Rat> missing_values;
    if (cfg.kind == SystemKind::MissingDigit) {
        auto pts = enumerate_factor(cfg, level, 0, nullptr);
        missing_values.reserve(pts.size());
        for (const auto& c : pts) missing_values.push_back(std::get<MissingCoord>(c).value);
    }

    bool ok = true;
    for (long i = 0; i < probes; ++i) {
        Point probe = random_probe(cfg, level, rng);
        Dist gap = Dist::plain(Rat(0));
        for (int f = 0; f < cfg.n; ++f) {
            Dist d;
            switch (cfg.kind) {
                case SystemKind::RealLattice:
                    d = nearest_real(cfg, level, f, std::get<RealCoord>(probe.coords[f]).x);
                    break;
                case SystemKind::PAdic:
                    d = nearest_padic(cfg, level, std::get<PAdicCoord>(probe.coords[f]).witness);
                    break;
                case SystemKind::Gaussian:
                    d = nearest_gauss(level, std::get<GaussCoord>(probe.coords[f]));
                    break;
                case SystemKind::MissingDigit:
                    d = nearest_sorted_values(missing_values,
                                              std::get<MissingCoord>(probe.coords[f]).value);
                    break;
            }
            if (d.cmp(gap) > 0) gap = d;  // product metric: max over factors
        }
        int c = gap.cmp(beta_inv);
        bool probe_ok = rep.closed_ball ? c <= 0 : c < 0;
        if (!probe_ok) ok = false;
        if (gap.cmp(rep.worst_gap) > 0) {
            rep.worst_gap = gap;
            rep.worst_probe = point_to_string(probe);
        }
        ++rep.probes;
    }
    rep.ok = ok;
    return rep;
}

CountReport count_in_ball(const SystemConfig& cfg, const Level& level, const Point& center,
                          const ExactReal& radius) {
    cfg.validate();
    if (static_cast<int>(center.coords.size()) != cfg.n)
        throw ValidationError("center arity mismatch");
    LevelWeight w = beta_weight(cfg, level);
    ExactReal beta_inv = w.beta.pow(Rat(-1));
    if (radius.cmp(beta_inv) <= 0)
        throw ValidationError("count_in_ball requires radius > beta(level)^-1");

    CountReport rep;
    ExactReal rbeta = radius.mul(w.beta);
    for (int i = 0; i < cfg.n; ++i) {
        const AhlforsFactor& fac = cfg.factors[i];
        BallConstraint ball;
        ball.center = &center.coords[i];
        ball.radius = radius;
        FactorCountReport fr;
        fr.count = count_factor(cfg, level, i, &ball);

        Rat c_ratio = fac.c_lower / fac.c_upper;
        auto rb_delta = pow_delta(rbeta, fac.delta);
        auto half_delta = pow_delta(ExactReal::power(Rat(2), Rat(-1)), fac.delta);
        auto two_delta = pow_delta(ExactReal::power(Rat(2), Rat(1)), fac.delta);
        if (rb_delta && half_delta && two_delta) {
            ExactReal lower = rb_delta->mul(*half_delta).mul_rat(c_ratio);
            ExactReal upper = rb_delta->mul(*two_delta).mul_rat(Rat(2) / c_ratio);
            fr.lower = lower.to_double();
            fr.upper = upper.to_double();
            fr.within = lower.cmp(Rat(fr.count)) <= 0 && upper.cmp(Rat(fr.count)) >= 0;
            fr.exact_bounds = true;
        } else {
            double d = fac.delta.to_double();
            double lg = rbeta.log();
            fr.lower = rat_to_double(c_ratio) * std::exp(d * (lg - M_LN2));
            fr.upper = (1.0 / rat_to_double(c_ratio)) * std::exp((d + 1) * M_LN2 + d * lg);
            double cnt = mpz_get_d(fr.count.get_mpz_t());
            fr.within = fr.lower <= cnt && cnt <= fr.upper;
        }
        if (!fr.within) rep.all_within = false;
        rep.product_count *= fr.count;
        rep.factors.push_back(std::move(fr));
    }
    return rep;
}

}  // namespace limdim

#include "limdim/system.hpp"

#include <cmath>
#include <functional>

namespace limdim {

namespace {

long level_exp(const Level& level) { return std::get<ExpLevel>(level).k; }

Int pow_int(const Int& b, long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

// --- real lattice -----------------------------------------------------------

struct RealWindow {
    Int lo, hi;  // inclusive integer range of p; empty when lo > hi
};

RealWindow real_domain(const Int& q, const Rat& theta) {
    // (p + theta)/q in [0,1]
    return RealWindow{rat_ceil(-theta), rat_floor(Rat(q) - theta)};
}

// Window of p with (p+theta)/q strictly inside (c - rho, c + rho), rho = scale*radius,
// clipped to the [0,1] domain.
RealWindow real_open_window(const Int& q, const Rat& theta, const Rat& c, const ExactReal& radius,
                            const Rat& scale) {
    ExactReal qrho = radius.mul_rat(Rat(q) * scale);
    Rat t = Rat(q) * c - theta;
    auto inside = [&](const Int& p) {
        Rat g = t - Rat(p);
        if (g < 0) g = -g;
        return qrho.cmp(g) > 0;
    };
    double td = rat_to_double(t);
    double rd = qrho.to_double();
    RealWindow dom = real_domain(q, theta);
    Int lo(static_cast<long>(std::floor(td - rd)) - 2);
    Int hi(static_cast<long>(std::ceil(td + rd)) + 2);
    if (lo < dom.lo) lo = dom.lo;
    if (hi > dom.hi) hi = dom.hi;
    while (lo <= hi && !inside(lo)) ++lo;
    while (hi >= lo && !inside(hi)) --hi;
    return RealWindow{lo, hi};
}

bool real_strict_ok(const Int& q, const Rat& theta, const Rat& c, const ExactReal& radius,
                    const Rat& scale, const ExactReal& child, const Int& p) {
    // |(p+theta)/q - c| + child <= scale*radius, scaled through by q
    Rat g = Rat(q) * c - theta - Rat(p);
    if (g < 0) g = -g;
    return cmp_rat_plus_er_vs_er(g, child.mul_rat(Rat(q)), radius.mul_rat(Rat(q) * scale), 1) <= 0;
}

// --- p-adic ------------------------------------------------------------------

struct PAdicClass {
    Int step;   // p^min(m,k)
    Int first;  // smallest admissible a in [1, p^k]
    Int count;
};

Int residue_of(const Rat& x, const Int& modulus) {
    Int u = x.get_num() % modulus;
    if (u < 0) u += modulus;
    Int v = x.get_den() % modulus;
    Int vinv;
    if (mpz_invert(vinv.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw ValidationError("p-adic center has denominator divisible by p");
    return u * vinv % modulus;
}

PAdicClass padic_ball_class(const SystemConfig& cfg, long k, const Rat& center,
                            const ExactReal& radius, const Rat& scale) {
    long m = padic_effective_prefix(cfg.prime, radius, scale);
    Int pk = pow_int(cfg.prime, k);
    if (m == 0) return PAdicClass{Int(1), Int(1), pk};
    long mm = std::min(m, k);
    Int pm = pow_int(cfg.prime, mm);
    Int xr = residue_of(center, pm);
    Int a0 = (pm - xr) % pm;  // point value == -a (mod p^m), so a == -x
    if (a0 == 0) a0 = pm;
    if (m <= k) return PAdicClass{pm, a0, pow_int(cfg.prime, k - m)};
    // deeper than the level's prefix: at most the unique k-prefix match
    Rat pt = make_rat(a0, Int(pk - 1));
    Rat diff = center - pt;
    bool in;
    if (diff == 0) {
        in = true;
    } else {
        long v = padic_valuation(diff, cfg.prime);
        in = radius.mul_rat(scale).cmp(rat_pow_int(Rat(cfg.prime), -v)) > 0;
    }
    return PAdicClass{pm, a0, Int(in ? 1 : 0)};
}

// --- missing digit -----------------------------------------------------------

/// Scaled branch-and-bound state for one (level, ball-shape) pair. All parent
/// rectangles of a layer share it; only the center numerator varies, so the
/// construction is cached thread-locally. When the center's denominator
/// divides b^k * zd (always true for refinement centers) everything runs on a
/// common cd = 1 scale.
struct MissingCtx {
    long k = 0;
    long base = 0;
    Int zd, zn;
    Int scale;  // b^k * zd
    Int cd;     // residual center-denominator factor (1 on the fast path)
    std::vector<Int> pw;                // pw[t] = b^(k-t)
    std::vector<Int> span_lo, span_hi;  // attainable tail contribution, pre-scaled
    std::vector<Int> digit_step;        // contribution of digit value 1 at position t
    ExactReal threshold;                // membership is |D| < T (open ball)
    bool rational_threshold = false;    // fast path: |D| * tden < tnum
    Int tnum, tden;
    bool constrained = false;
    bool strict = false;
    ExactReal child_scaled;  // child radius * b^k * zd * cd
    Rat scale_rat;           // the ball's scale multiplier (key component)
    ExactReal radius, child_radius;

    Int base_d_of(const Rat& center) const {
        // D_0 = zn*cd - cn * (scale*cd / center_den), exact by cd's choice
        return zn * cd - center.get_num() * ((scale * cd) / center.get_den());
    }

    // sign of (x - T); mpz fast path when T is rational
    int cmp_threshold(const Int& x) const {
        if (rational_threshold) {
            Int lhs = x * tden;
            return lhs < tnum ? -1 : (lhs > tnum ? 1 : 0);
        }
        return -threshold.cmp(Rat(x));
    }
};

bool er_equal(const ExactReal& a, const ExactReal& b) {
    return a.base() == b.base() && a.exponent() == b.exponent();
}

bool ctx_matches(const MissingCtx& ctx, const SystemConfig& cfg, long k,
                 const BallConstraint* ball) {
    if (ctx.k != k || ctx.base != cfg.base || ctx.zd != cfg.anchor.get_den() ||
        ctx.zn != cfg.anchor.get_num())
        return false;
    bool constrained = ball && ball->center;
    if (ctx.constrained != constrained) return false;
    if (!constrained) return true;
    const Rat& c = std::get<MissingCoord>(*ball->center).value;
    Int cd_needed = mpz_divisible_p(ctx.scale.get_mpz_t(), c.get_den().get_mpz_t())
                        ? Int(1)
                        : c.get_den();
    if (ctx.cd != cd_needed) return false;
    if (ctx.scale_rat != ball->scale) return false;
    if (!er_equal(ctx.radius, ball->radius)) return false;
    if (ctx.strict != ball->shrink_by_child) return false;
    if (ctx.strict && !er_equal(ctx.child_radius, ball->child_radius)) return false;
    return true;
}

const MissingCtx& make_missing_ctx(const SystemConfig& cfg, long k, const BallConstraint* ball) {
    thread_local MissingCtx cache;
    if (ctx_matches(cache, cfg, k, ball)) return cache;
    MissingCtx ctx;
    ctx.k = k;
    ctx.base = cfg.base;
    ctx.zd = cfg.anchor.get_den();
    ctx.zn = cfg.anchor.get_num();
    ctx.pw.resize(k + 1);
    ctx.pw[k] = Int(1);
    for (long t = k - 1; t >= 0; --t) ctx.pw[t] = ctx.pw[t + 1] * cfg.base;
    ctx.scale = ctx.pw[0] * ctx.zd;
    ctx.cd = Int(1);
    if (ball && ball->center) {
        ctx.constrained = true;
        const Rat& c = std::get<MissingCoord>(*ball->center).value;
        if (!mpz_divisible_p(ctx.scale.get_mpz_t(), c.get_den().get_mpz_t()))
            ctx.cd = c.get_den();
        ctx.scale_rat = ball->scale;
        ctx.radius = ball->radius;
        ctx.threshold = ball->radius.mul_rat(ball->scale * Rat(ctx.scale) * Rat(ctx.cd));
        if (ctx.threshold.is_rational()) {
            Rat t = ctx.threshold.to_rational();
            ctx.rational_threshold = true;
            ctx.tnum = t.get_num();
            ctx.tden = t.get_den();
        }
        if (ball->shrink_by_child) {
            ctx.strict = true;
            ctx.child_radius = ball->child_radius;
            ctx.child_scaled = ball->child_radius.mul_rat(Rat(ctx.scale) * Rat(ctx.cd));
        }
    }
    long minJ = cfg.digit_set.front(), maxJ = cfg.digit_set.back();
    ctx.span_lo.resize(k + 1);
    ctx.span_hi.resize(k + 1);
    ctx.digit_step.resize(k + 1);
    for (long t = 0; t <= k; ++t) {
        // sum_{i=t+1..k} b^(k-i) = (b^(k-t) - 1)/(b - 1)
        Int s = (ctx.pw[t] - 1) / (cfg.base - 1);
        ctx.span_lo[t] = Int(minJ) * s * ctx.zd * ctx.cd;
        ctx.span_hi[t] = Int(maxJ) * s * ctx.zd * ctx.cd;
        if (t >= 1) ctx.digit_step[t] = ctx.pw[t] * ctx.zd * ctx.cd;
    }
    cache = std::move(ctx);
    return cache;
}

enum class Fit { Outside, Partial, Inside };

// Attainable D over completions of the depth-t prefix is [d+span_lo, d+span_hi];
// classify against the ball |D| < T (or |D| + child <= T in strict mode).
Fit missing_fit(const MissingCtx& ctx, const Int& d_at_t, long t) {
    Int dlo = d_at_t + ctx.span_lo[t];
    Int dhi = d_at_t + ctx.span_hi[t];
    if (ctx.cmp_threshold(Int(-dhi)) >= 0) return Fit::Outside;  // dhi <= -T
    if (ctx.cmp_threshold(dlo) >= 0) return Fit::Outside;        // dlo >= T
    Int worst = std::max(iabs(dlo), iabs(dhi));
    if (ctx.strict) {
        if (cmp_rat_plus_er_vs_er(Rat(worst), ctx.child_scaled, ctx.threshold, 1) <= 0)
            return Fit::Inside;
        return Fit::Partial;
    }
    if (ctx.cmp_threshold(worst) < 0) return Fit::Inside;
    return Fit::Partial;
}

bool missing_leaf_ok(const MissingCtx& ctx, const Int& d) {
    Int ad = iabs(d);
    if (ctx.strict) return cmp_rat_plus_er_vs_er(Rat(ad), ctx.child_scaled, ctx.threshold, 1) <= 0;
    return ctx.cmp_threshold(ad) < 0;
}

bool gauss_ball_member(const Rat& dist_sq, const BallConstraint& ball) {
    Dist d = Dist::sqrt_of(dist_sq);
    ExactReal rho = ball.radius.mul_rat(ball.scale);
    if (!ball.shrink_by_child) return d.cmp(rho) < 0;
    if (dist_sq == 0) return ball.child_radius.cmp(rho) <= 0;
    ExactReal sd = ExactReal::power(dist_sq, make_rat(Int(1), Int(2)));
    return cmp_er_plus_er_vs_er(sd, ball.child_radius, rho, 1) <= 0;
}

Rat theta_of(const SystemConfig& cfg, const Level& level, int factor) {
    const Int& q = std::get<IntLevel>(level).q;
    return cfg.theta.at(q, cfg.n).at(factor);
}

}  // namespace

Int count_factor(const SystemConfig& cfg, const Level& level, int factor,
                 const BallConstraint* ball) {
    switch (cfg.kind) {
        case SystemKind::RealLattice: {
            const Int& q = std::get<IntLevel>(level).q;
            Rat theta = theta_of(cfg, level, factor);
            if (ball && ball->center) {
                const Rat& c = std::get<RealCoord>(*ball->center).x;
                RealWindow w = real_open_window(q, theta, c, ball->radius, ball->scale);
                if (w.lo > w.hi) return Int(0);
                if (ball->shrink_by_child) {
                    Int lo = w.lo, hi = w.hi;
                    while (lo <= hi && !real_strict_ok(q, theta, c, ball->radius, ball->scale,
                                                       ball->child_radius, lo))
                        ++lo;
                    while (hi >= lo && !real_strict_ok(q, theta, c, ball->radius, ball->scale,
                                                       ball->child_radius, hi))
                        --hi;
                    return lo > hi ? Int(0) : Int(hi - lo + 1);
                }
                return w.hi - w.lo + 1;
            }
            RealWindow dom = real_domain(q, theta);
            return dom.lo > dom.hi ? Int(0) : Int(dom.hi - dom.lo + 1);
        }
        case SystemKind::PAdic: {
            long k = level_exp(level);
            if (ball && ball->center) {
                const Rat& c = std::get<PAdicCoord>(*ball->center).witness;
                return padic_ball_class(cfg, k, c, ball->radius, ball->scale).count;
            }
            return pow_int(cfg.prime, k);
        }
        case SystemKind::Gaussian: {
            const auto& g = std::get<GaussLevel>(level);
            if (!(ball && ball->center)) return g.re * g.re + g.im * g.im;
            return Int(static_cast<unsigned long>(enumerate_factor(cfg, level, factor, ball).size()));
        }
        case SystemKind::MissingDigit: {
            long k = level_exp(level);
            Int nj(static_cast<long>(cfg.digit_set.size()));
            if (!(ball && ball->center)) return pow_int(nj, k);
            const MissingCtx& ctx = make_missing_ctx(cfg, k, ball);
            const Rat& c = std::get<MissingCoord>(*ball->center).value;
            Int base_d = ctx.base_d_of(c);
            Int total(0);
            std::function<void(long, const Int&)> walk = [&](long t, const Int& d) {
                Fit f = missing_fit(ctx, d, t);
                if (f == Fit::Outside) return;
                if (f == Fit::Inside) {
                    total += pow_int(nj, k - t);
                    return;
                }
                if (t == k) {
                    if (missing_leaf_ok(ctx, d)) ++total;
                    return;
                }
                for (int dig : cfg.digit_set) walk(t + 1, Int(d + dig * ctx.digit_step[t + 1]));
            };
            walk(0, base_d);
            return total;
        }
    }
    throw ValidationError("unknown kind");
}

std::vector<Coordinate> enumerate_factor(const SystemConfig& cfg, const Level& level, int factor,
                                         const BallConstraint* ball) {
    std::vector<Coordinate> out;
    switch (cfg.kind) {
        case SystemKind::RealLattice: {
            const Int& q = std::get<IntLevel>(level).q;
            Rat theta = theta_of(cfg, level, factor);
            RealWindow w;
            if (ball && ball->center) {
                const Rat& c = std::get<RealCoord>(*ball->center).x;
                w = real_open_window(q, theta, c, ball->radius, ball->scale);
            } else {
                w = real_domain(q, theta);
            }
            if (w.lo > w.hi) return out;
            Int count = w.hi - w.lo + 1;
            if (count > cfg.enum_cap) throw ResourceCapError(count, cfg.enum_cap);
            for (Int p = w.lo; p <= w.hi; ++p) {
                if (ball && ball->center && ball->shrink_by_child &&
                    !real_strict_ok(q, theta, std::get<RealCoord>(*ball->center).x, ball->radius,
                                    ball->scale, ball->child_radius, p))
                    continue;
                out.push_back(RealCoord{
                    make_rat(p * theta.get_den() + theta.get_num(), q * theta.get_den())});
            }
            return out;
        }
        case SystemKind::PAdic: {
            long k = level_exp(level);
            Int pk = pow_int(cfg.prime, k);
            Int den = pk - 1;
            PAdicClass cls{Int(1), Int(1), pk};
            if (ball && ball->center)
                cls = padic_ball_class(cfg, k, std::get<PAdicCoord>(*ball->center).witness,
                                       ball->radius, ball->scale);
            if (cls.count > cfg.enum_cap) throw ResourceCapError(cls.count, cfg.enum_cap);
            Int emitted(0);
            for (Int a = cls.first; a <= pk && emitted < cls.count; a += cls.step, ++emitted)
                out.push_back(PAdicCoord{make_rat(a, den)});
            return out;
        }
        case SystemKind::Gaussian: {
            const auto& g = std::get<GaussLevel>(level);
            const Int &a = g.re, &b = g.im;
            Int normsq = a * a + b * b;
            if (!(ball && ball->center)) {
                if (normsq > cfg.enum_cap) throw ResourceCapError(normsq, cfg.enum_cap);
                long B = static_cast<long>(0.70711 * std::sqrt(mpz_get_d(normsq.get_mpz_t()))) + 2;
                for (long v = -B; v <= B; ++v)
                    for (long u = -B; u <= B; ++u) {
                        Int re2 = 2 * (Int(u) * a + Int(v) * b);
                        Int im2 = 2 * (Int(v) * a - Int(u) * b);
                        if (re2 < -normsq || re2 >= normsq) continue;
                        if (im2 < -normsq || im2 >= normsq) continue;
                        out.push_back(
                            GaussCoord{make_rat(re2, 2 * normsq), make_rat(im2, 2 * normsq)});
                    }
                return out;
            }
            const auto& c = std::get<GaussCoord>(*ball->center);
            ExactReal rho = ball->radius.mul_rat(ball->scale);
            if (rho.cmp(make_rat(Int(1), Int(2))) >= 0)
                throw ValidationError("gaussian ball radius must be < 1/2 (torus metric)");
            // numerator-space window around w = c*q of radius rho*|q|
            Rat wre = c.re * Rat(a) - c.im * Rat(b);
            Rat wim = c.re * Rat(b) + c.im * Rat(a);
            ExactReal rn = rho.mul(ExactReal::power(Rat(normsq), make_rat(Int(1), Int(2))));
            Rat rb = rn.upper_bound(32);
            Int ulo = rat_floor(wre - rb) - 1, uhi = rat_ceil(wre + rb) + 1;
            Int vlo = rat_floor(wim - rb) - 1, vhi = rat_ceil(wim + rb) + 1;
            Int box = (uhi - ulo + 1) * (vhi - vlo + 1);
            if (box > cfg.enum_cap) throw ResourceCapError(box, cfg.enum_cap);
            Rat half = make_rat(Int(1), Int(2));
            for (Int v = vlo; v <= vhi; ++v)
                for (Int u = ulo; u <= uhi; ++u) {
                    Rat dre = Rat(u) - wre;
                    Rat dim = Rat(v) - wim;
                    Rat dist_sq = (dre * dre + dim * dim) / Rat(normsq);
                    if (!gauss_ball_member(dist_sq, *ball)) continue;
                    Rat re = make_rat(u * a + v * b, normsq);
                    Rat im = make_rat(v * a - u * b, normsq);
                    out.push_back(GaussCoord{re - Rat(rat_floor(re + half)),
                                             im - Rat(rat_floor(im + half))});
                }
            return out;
        }
        case SystemKind::MissingDigit: {
            long k = level_exp(level);
            Int total = count_factor(cfg, level, factor, ball);
            if (total > cfg.enum_cap) throw ResourceCapError(total, cfg.enum_cap);
            const MissingCtx& ctx = make_missing_ctx(cfg, k, ball);
            bool constrained = ball && ball->center;
            Int base_d(0);
            if (constrained) {
                const Rat& c = std::get<MissingCoord>(*ball->center).value;
                base_d = ctx.base_d_of(c);
            }
            const Int bk_zd = ctx.pw[0] * cfg.anchor.get_den();
            std::vector<std::uint8_t> word(k);
            std::function<void(long, const Int&, bool)> walk = [&](long t, const Int& d,
                                                                   bool check) {
                if (check) {
                    Fit f = missing_fit(ctx, d, t);
                    if (f == Fit::Outside) return;
                    if (f == Fit::Inside) check = false;
                    if (check && t == k) {
                        if (!missing_leaf_ok(ctx, d)) return;
                        check = false;
                    }
                }
                if (t == k) {
                    Int w(0);
                    for (long i = 0; i < k; ++i) w = w * cfg.base + word[i];
                    out.push_back(
                        MissingCoord{word, make_rat(w * cfg.anchor.get_den() + cfg.anchor.get_num(),
                                                    bk_zd)});
                    return;
                }
                for (int dig : cfg.digit_set) {
                    word[t] = static_cast<std::uint8_t>(dig);
                    walk(t + 1, check ? Int(d + dig * ctx.digit_step[t + 1]) : d, check);
                }
            };
            walk(0, base_d, constrained);
            return out;
        }
    }
    throw ValidationError("unknown kind");
}

Int level_cardinality(const SystemConfig& cfg, const Level& level) {
    Int prod(1);
    for (int i = 0; i < cfg.n; ++i) prod *= count_factor(cfg, level, i, nullptr);
    return prod;
}

std::vector<Point> generate_level(const SystemConfig& cfg, const Level& level) {
    cfg.validate();
    Int total = level_cardinality(cfg, level);
    if (total > cfg.enum_cap) throw ResourceCapError(total, cfg.enum_cap);
    std::vector<std::vector<Coordinate>> per_factor(cfg.n);
    for (int i = 0; i < cfg.n; ++i) per_factor[i] = enumerate_factor(cfg, level, i, nullptr);
    std::vector<Point> pts;
    if (total.fits_ulong_p()) pts.reserve(total.get_ui());
    std::vector<size_t> idx(cfg.n, 0);
    for (;;) {
        Point p;
        p.coords.reserve(cfg.n);
        for (int i = 0; i < cfg.n; ++i) p.coords.push_back(per_factor[i][idx[i]]);
        pts.push_back(std::move(p));
        int i = cfg.n - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < per_factor[i].size()) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
    return pts;
}

}  // namespace limdim

#include "limdim/sequence.hpp"

#include <algorithm>
#include <cmath>

namespace limdim {

namespace {

Int pow_int_l(long b, long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
    return r;
}

void check_kind(const SequenceSpec& spec, const SystemConfig& cfg) {
    if (std::holds_alternative<DoublyExponentialSeq>(spec.form) &&
        cfg.kind != SystemKind::RealLattice)
        throw ValidationError("doubly-exponential sequences require integer levels (real lattice)");
    if (std::holds_alternative<GeometricExponentsSeq>(spec.form) &&
        cfg.kind != SystemKind::PAdic && cfg.kind != SystemKind::MissingDigit)
        throw ValidationError("geometric-exponent sequences require exponent levels");
}

constexpr long kMaxLevelBits = 1 << 22;

}  // namespace

Level seq_level(const SequenceSpec& spec, const SystemConfig& cfg, int j) {
    if (j < 1 || j > spec.depth) throw ValidationError("sequence index out of range");
    check_kind(spec, cfg);
    if (const auto* e = std::get_if<ExplicitSeq>(&spec.form)) return e->levels.at(j - 1);
    if (const auto* d = std::get_if<DoublyExponentialSeq>(&spec.form)) {
        long c = d->start + j - 1;
        double bits = std::pow(double(d->b), double(c)) * std::log2(double(d->a));
        if (!(bits < double(kMaxLevelBits)))
            throw ValidationError("sequence level a^(b^c) too large to materialize");
        Int exp = pow_int_l(d->b, c);
        Int q;
        mpz_pow_ui(q.get_mpz_t(), Int(d->a).get_mpz_t(), exp.get_ui());
        return IntLevel{q};
    }
    const auto& g = std::get<GeometricExponentsSeq>(spec.form);
    Int k = Int(g.k1) * pow_int_l(g.ratio, g.start + j - 1);
    if (!k.fits_slong_p() || k > kMaxLevelBits)
        throw ValidationError("sequence exponent too large to materialize");
    return ExpLevel{k.get_si()};
}

ExactReal seq_beta(const SequenceSpec& spec, const SystemConfig& cfg, int j) {
    if (j < 1 || j > spec.depth) throw ValidationError("sequence index out of range");
    check_kind(spec, cfg);
    if (const auto* e = std::get_if<ExplicitSeq>(&spec.form))
        return beta_weight(cfg, e->levels.at(j - 1)).beta;
    if (const auto* d = std::get_if<DoublyExponentialSeq>(&spec.form)) {
        Int exp = pow_int_l(d->b, d->start + j - 1);
        return ExactReal::power(Rat(d->a), Rat(exp)).normalized();
    }
    const auto& g = std::get<GeometricExponentsSeq>(spec.form);
    Int k = Int(g.k1) * pow_int_l(g.ratio, g.start + j - 1);
    Rat base = cfg.kind == SystemKind::PAdic ? Rat(cfg.prime) : Rat(cfg.base);
    return ExactReal::power(base, Rat(k)).normalized();
}

SequenceStats stats(const SequenceSpec& spec, const SystemConfig& cfg) {
    if (spec.depth < 3) throw ValidationError("sequence depth must be at least 3");
    check_kind(spec, cfg);
    const int J = spec.depth;

    std::vector<ExactReal> betas;
    betas.reserve(J);
    for (int j = 1; j <= J; ++j) betas.push_back(seq_beta(spec, cfg, j));

    if (betas[0].cmp(Rat(1)) <= 0)
        throw AdmissibilityError("beta must exceed 1 along the sequence");
    for (int j = 1; j < J; ++j)
        if (betas[j].cmp(betas[j - 1]) <= 0)
            throw AdmissibilityError("beta not strictly increasing");

    SequenceStats st;
    st.depth = J;
    if (J == 3) st.warnings.push_back("shallow depth");
    st.log_betas.reserve(J);
    for (const auto& b : betas) st.log_betas.push_back(b.log());

    bool common_base = true;
    for (int j = 1; j < J; ++j)
        if (betas[j].base() != betas[0].base()) common_base = false;

    if (common_base) {
        // log beta(q_j) = e_j * log(base): ratios and alpha are exact rationals
        std::vector<Rat> exps;
        exps.reserve(J);
        for (const auto& b : betas) exps.push_back(b.exponent());
        Rat h = exps[1] / exps[0];
        for (int j = 2; j < J; ++j) h = std::min(h, Rat(exps[j] / exps[j - 1]), std::less<Rat>());
        Rat htail = exps[J - 1] / exps[J - 2];
        for (int j = J / 2 + 1; j < J; ++j)
            htail = std::min(htail, Rat(exps[j] / exps[j - 1]), std::less<Rat>());
        Rat sum(0);
        for (int j = 0; j + 1 < J; ++j) sum += exps[j];
        st.h_inf_exact = h;
        st.alpha_finite_exact = sum / exps[J - 1];
        st.h_inf = rat_to_double(h);
        st.h_liminf = rat_to_double(htail);
        st.alpha_finite = rat_to_double(*st.alpha_finite_exact);
    } else {
        double h = st.log_betas[1] / st.log_betas[0];
        for (int j = 2; j < J; ++j) h = std::min(h, st.log_betas[j] / st.log_betas[j - 1]);
        double htail = st.log_betas[J - 1] / st.log_betas[J - 2];
        for (int j = J / 2 + 1; j < J; ++j)
            htail = std::min(htail, st.log_betas[j] / st.log_betas[j - 1]);
        double sum = 0;
        for (int j = 0; j + 1 < J; ++j) sum += st.log_betas[j];
        st.h_inf = h;
        st.h_liminf = htail;
        st.alpha_finite = sum / st.log_betas[J - 1];
    }

    if (const auto* d = std::get_if<DoublyExponentialSeq>(&spec.form))
        st.alpha_limit = 1.0 / (double(d->b) - 1.0);
    else if (const auto* g = std::get_if<GeometricExponentsSeq>(&spec.form))
        st.alpha_limit = 1.0 / (double(g->ratio) - 1.0);

    // j / log beta(q_j) must decrease toward 0: strictly decreasing over the
    // final stretch and the last value below the first
    {
        auto v = [&](int j) { return double(j + 1) / st.log_betas[j]; };
        int tail = std::max(2, J / 3);
        bool dec = true;
        for (int j = J - tail; j < J; ++j)
            if (j >= 1 && !(v(j) < v(j - 1))) dec = false;
        st.vanishing_ok = dec && v(J - 1) < v(0);
    }
    return st;
}

SequenceSpec shift(const SequenceSpec& spec, int t) {
    if (t < 0) throw ValidationError("shift must be nonnegative");
    if (t >= spec.depth) throw ValidationError("shift beyond sequence depth");
    if (spec.depth - t < 3) throw ValidationError("shifted depth below the 3-term minimum");
    SequenceSpec out = spec;
    out.depth = spec.depth - t;
    if (auto* e = std::get_if<ExplicitSeq>(&out.form)) {
        e->levels.erase(e->levels.begin(), e->levels.begin() + t);
    } else if (auto* d = std::get_if<DoublyExponentialSeq>(&out.form)) {
        d->start += t;
    } else {
        std::get<GeometricExponentsSeq>(out.form).start += t;
    }
    return out;
}

AdmissibilityReport admissible(const SequenceStats& st, const std::vector<Rat>& taus,
                               AdmissibilityMode mode) {
    AdmissibilityReport rep;
    for (size_t i = 0; i < taus.size(); ++i) {
        const Rat& tau = taus[i];
        std::string axis = "tau_" + std::to_string(i + 1);
        if (mode == AdmissibilityMode::General) {
            if (!(tau > 1)) {
                rep.ok = false;
                rep.reasons.push_back(axis + " <= 1");
            }
            bool below_h = st.h_inf_exact ? tau < *st.h_inf_exact
                                          : rat_to_double(tau) < st.h_inf;
            if (!below_h) {
                rep.ok = false;
                rep.reasons.push_back(axis + " >= h_S");
            }
        } else {
            if (!(tau > 0)) {
                rep.ok = false;
                rep.reasons.push_back(axis + " <= 0");
            }
            bool below = st.h_inf_exact ? tau < *st.h_inf_exact - 1
                                        : rat_to_double(tau) < st.h_inf - 1;
            if (!below) {
                rep.ok = false;
                rep.reasons.push_back(axis + " >= h_S - 1");
            }
        }
    }
    return rep;
}

}  // namespace limdim

#include "limdim/estimator.hpp"

#include "limdim/dimension.hpp"

#include <algorithm>
#include <cmath>

namespace limdim {

namespace {

double log_int(const Int& z) {
    signed long e;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(m) + double(e) * M_LN2;
}

/// Per-rectangle splitting factor along `axis`: product over the wider sides
/// of ceil(beta^((tau_axis - tau_i) * delta_i)).
Int splitting_factor(const SystemConfig& cfg, const WeightVector& w, const ExactReal& beta,
                     int axis) {
    Int split(1);
    const Rat& tau_axis = w.taus[axis - 1];
    for (int i = 0; i < w.n(); ++i) {
        Rat gap = tau_axis - w.taus[i];
        if (gap <= 0) continue;
        auto exact = pow_delta(beta.pow(gap), cfg.factors[i].delta);
        if (exact) {
            split *= exact->ceil_int();
        } else {
            double v = std::exp(cfg.factors[i].delta.to_double() * rat_to_double(gap) * beta.log());
            split *= Int(static_cast<long>(std::ceil(v - 1e-12)));
        }
    }
    return split;
}

}  // namespace

CoverSeries covering_counts(const SystemConfig& cfg, const SequenceSpec& seq,
                            const WeightVector& w, const LayerSet& layers, int axis,
                            int extend_depth) {
    if (axis < 1 || axis > w.n()) throw ValidationError("axis out of range");
    CoverSeries series;
    series.axis = axis;
    const Rat& tau_axis = w.taus[axis - 1];
    for (const auto& layer : layers.layers) {
        if (layer.rects.empty()) throw EmptyRefinementError(layer.level_index, -1, "empty layer");
        CoverEntry e;
        e.depth = layer.level_index;
        e.radius = layer.weight.beta.pow(Rat(-tau_axis));
        e.count = Int(static_cast<unsigned long>(layer.rects.size())) *
                  splitting_factor(cfg, w, layer.weight.beta, axis);
        e.log_count = log_int(e.count);
        e.neg_log_radius = -e.radius.log();
        series.entries.push_back(std::move(e));
    }
    int have = static_cast<int>(layers.layers.size());
    if (extend_depth > have + 1)
        throw ValidationError("streaming extension is limited to one level past the layers");
    if (extend_depth == have + 1) {
        int j = extend_depth;
        Int rects = count_next_layer(cfg, seq, w, layers.layers.back(), j, layers.rule);
        if (rects == 0) throw EmptyRefinementError(j, -1, "empty layer");
        LevelWeight lw = beta_weight(cfg, seq_level(seq, cfg, j));
        CoverEntry e;
        e.depth = j;
        e.radius = lw.beta.pow(Rat(-tau_axis));
        e.count = rects * splitting_factor(cfg, w, lw.beta, axis);
        e.log_count = log_int(e.count);
        e.neg_log_radius = -e.radius.log();
        series.entries.push_back(std::move(e));
    }
    for (size_t i = 0; i + 1 < series.entries.size(); ++i) {
        if (series.entries[i + 1].radius.cmp(series.entries[i].radius) >= 0)
            throw ValidationError("cover radii must be strictly decreasing");
        series.entries[i + 1].local_slope =
            (series.entries[i + 1].log_count - series.entries[i].log_count) /
            (series.entries[i + 1].neg_log_radius - series.entries[i].neg_log_radius);
    }
    return series;
}

SlopeFit slope_estimate(const CoverSeries& series, int window) {
    if (window < 2) throw ValidationError("slope window needs at least 2 entries");
    if (static_cast<int>(series.entries.size()) < 2)
        throw ValidationError("cover series needs at least 2 entries");
    window = std::min<int>(window, static_cast<int>(series.entries.size()));
    SlopeFit fit;
    fit.window = window;
    size_t lo = series.entries.size() - window;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = lo; i < series.entries.size(); ++i) {
        double x = series.entries[i].neg_log_radius;
        double y = series.entries[i].log_count;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double nn = double(window);
    fit.window_slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    const auto& last = series.entries.back();
    fit.single_point = last.log_count / last.neg_log_radius;
    for (const auto& e : series.entries)
        if (e.local_slope) fit.local_slopes.push_back(*e.local_slope);
    return fit;
}

EstimateReport run_estimate(const SystemConfig& cfg, const SequenceSpec& seq,
                            const WeightVector& w, int depth, int axis, int window) {
    cfg.validate();
    w.validate();
    SequenceStats st = stats(seq, cfg);
    if (depth < 1 || depth > seq.depth) throw ValidationError("estimate depth out of range");

    // materialize as deep as the cap allows; stream the final level if needed
    LayerSet layers;
    layers.rule = NestingRule::Cover;
    layers.layers.push_back(build_layer(cfg, seq, w, 1));
    int materialize = 1;
    std::optional<ResourceCapError> capped;
    while (materialize < depth) {
        try {
            layers.layers.push_back(
                refine(cfg, seq, w, layers.layers.back(), materialize + 1, NestingRule::Cover));
            ++materialize;
        } catch (const ResourceCapError& e) {
            capped = e;
            break;
        }
    }
    compute_radii_halving(layers);
    if (capped && materialize + 1 < depth) throw *capped;  // can stream only one level
    CoverSeries series = covering_counts(cfg, seq, w, layers, axis, capped ? depth : 0);

    EstimateReport rep;
    rep.series = series;
    if (series.entries.size() >= 2) {
        rep.fit = slope_estimate(series, window);
    } else {
        rep.fit.window = 1;
        rep.fit.single_point =
            series.entries.back().log_count / series.entries.back().neg_log_radius;
        rep.fit.window_slope = rep.fit.single_point;
        rep.warnings.push_back("no slope window");
    }
    rep.alpha_finite = st.alpha_finite;
    rep.alpha_limit = st.alpha_limit;
    DimensionResult finite = dim_general(w.taus_d(), w.deltas_d(), st.alpha_finite);
    rep.finite_depth_formula = finite.value;
    DimensionResult limit =
        dim_general(w.taus_d(), w.deltas_d(), st.alpha_limit ? *st.alpha_limit : st.alpha_finite);
    rep.formula_value = limit.value;
    rep.abs_error = std::fabs(rep.fit.single_point - rep.finite_depth_formula);
    return rep;
}

namespace {

/// Sorted-numerator index over the deepest layer for one-dimensional
/// archimedean factors: the deepest-layer mass of a ball reduces to a prefix
/// sum over a numerator window, with the same open-ball predicate the layer
/// walk uses.
struct LeafIndex {
    bool valid = false;
    Int den;
    std::vector<Int> nums;   // sorted
    std::vector<Rat> prefix; // prefix[i] = mass of the first i sorted leaves
    Rat rho;                 // leaf rectangle radius
};

LeafIndex build_leaf_index(const MeasureTree& tree, const LayerSet& layers,
                           const SystemConfig& cfg) {
    LeafIndex idx;
    if (cfg.n != 1) return idx;
    if (cfg.kind != SystemKind::RealLattice && cfg.kind != SystemKind::MissingDigit) return idx;
    const auto& leaves = layers.layers.back();
    if (!leaves.radii[0].is_rational()) return idx;
    idx.rho = leaves.radii[0].to_rational();
    auto value_of = [&](const Rectangle& r) -> const Rat& {
        return cfg.kind == SystemKind::RealLattice
                   ? std::get<RealCoord>(r.center.coords[0]).x
                   : std::get<MissingCoord>(r.center.coords[0]).value;
    };
    idx.den = Int(1);
    for (const auto& r : leaves.rects)
        mpz_lcm(idx.den.get_mpz_t(), idx.den.get_mpz_t(), value_of(r).get_den().get_mpz_t());
    std::vector<std::pair<Int, size_t>> keyed(leaves.rects.size());
    for (size_t i = 0; i < leaves.rects.size(); ++i) {
        const Rat& v = value_of(leaves.rects[i]);
        keyed[i] = {Int(v.get_num() * (idx.den / v.get_den())), i};
    }
    std::sort(keyed.begin(), keyed.end());
    idx.nums.reserve(keyed.size());
    idx.prefix.reserve(keyed.size() + 1);
    idx.prefix.push_back(Rat(0));
    const auto& masses = tree.masses.back();
    for (const auto& [num, i] : keyed) {
        idx.nums.push_back(num);
        idx.prefix.push_back(Rat(idx.prefix.back() + masses[i]));
    }
    idx.valid = true;
    return idx;
}

Rat leaf_window_mass(const LeafIndex& idx, const Rat& center, const Rat& r) {
    // open-ball rect intersection: |n/D - c| < r + rho
    Rat bound = (r + idx.rho) * Rat(idx.den);
    Rat c_scaled = center * Rat(idx.den);
    Int lo = rat_floor(c_scaled - bound) + 1;
    Int hi = rat_ceil(c_scaled + bound) - 1;
    auto lo_it = std::lower_bound(idx.nums.begin(), idx.nums.end(), lo);
    auto hi_it = std::upper_bound(idx.nums.begin(), idx.nums.end(), hi);
    size_t a = static_cast<size_t>(lo_it - idx.nums.begin());
    size_t b = static_cast<size_t>(hi_it - idx.nums.begin());
    return Rat(idx.prefix[b] - idx.prefix[a]);
}

}  // namespace

HolderReport holder_probe(const MeasureTree& tree, const LayerSet& layers,
                          const SystemConfig& cfg, const WeightVector& w, double s, long samples,
                          std::uint64_t seed) {
    if (layers.layers.empty()) throw ValidationError("no layers");
    HolderReport rep;
    rep.seed = seed;
    Rng rng(seed);
    const auto& leaves = layers.layers.back();
    LeafIndex idx = build_leaf_index(tree, layers, cfg);
    double log_leaf_radius = leaves.radii[0].log();
    for (const auto& rad : leaves.radii) log_leaf_radius = std::min(log_leaf_radius, rad.log());
    double log_root = rat_log(root_scale(layers, cfg));
    bool first = true;
    bool first_expo = true;
    for (long i = 0; i < samples; ++i) {
        size_t leaf = static_cast<size_t>(rng.below(leaves.rects.size()));
        // log-uniform radius; endpoints pinned on the first two samples
        double u = i == 0 ? 1.0 : (i == 1 ? 0.0 : rng.unit_double());
        double lr = u * log_root + (1.0 - u) * log_leaf_radius;
        Rat r = Rat(mpq_class(std::exp(lr)));  // exact dyadic snap of the sample
        if (r <= 0) continue;
        Rat mass;
        if (idx.valid) {
            const Rat& center = cfg.kind == SystemKind::RealLattice
                                    ? std::get<RealCoord>(leaves.rects[leaf].center.coords[0]).x
                                    : std::get<MissingCoord>(leaves.rects[leaf].center.coords[0])
                                          .value;
            mass = leaf_window_mass(idx, center, r);
        } else {
            mass = measure_of_ball(tree, layers, cfg, w, leaves.rects[leaf].center, r).mass;
        }
        if (mass == 0) continue;  // sampled ball missed the support entirely
        double log_mass = rat_log(mass);
        double log_r = rat_log(r);
        double ratio = std::exp(log_mass - s * log_r);
        if (first || ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst_ball = "leaf " + std::to_string(leaf) + " r=" + rat_to_string(r);
        }
        first = false;
        // the scaling exponent is only informative on balls that see part of
        // the support at a genuinely small radius
        if (mass < 1 && r < 1) {
            double expo = log_mass / log_r;
            if (first_expo || expo < rep.empirical_exponent) rep.empirical_exponent = expo;
            first_expo = false;
        }
        ++rep.samples;
    }
    return rep;
}

double s_value(const SystemConfig& cfg, const WeightVector& w, const SequenceStats& st, int j,
               int axis) {
    if (j < 1 || j > st.depth) throw ValidationError("s_value depth out of range");
    auto deltas = w.deltas_d();
    auto taus = w.taus_d();
    double delta_sum = 0, c1 = 1, c2 = 1;
    for (int i = 0; i < w.n(); ++i) {
        delta_sum += deltas[i];
        c1 *= rat_to_double(cfg.factors[i].c_lower);
        c2 *= rat_to_double(cfg.factors[i].c_upper);
    }
    double log_beta_j = st.log_betas[j - 1];
    double alpha_j = 0;
    for (int i = 0; i + 1 < j; ++i) alpha_j += st.log_betas[i];
    alpha_j /= log_beta_j;
    double corr = double(j - 1) * std::log((c2 / c1) * std::pow(2.0, w.n() + delta_sum)) / log_beta_j;
    double weighted = 0;
    for (int i = 0; i < w.n(); ++i) weighted += (taus[i] - 1.0) * deltas[i];
    double wide = 0;
    for (int i = 0; i < w.n(); ++i)
        if (taus[axis - 1] > taus[i]) wide += (taus[axis - 1] - taus[i]) * deltas[i];
    return (delta_sum + corr - weighted * alpha_j + wide) / taus[axis - 1];
}

}  // namespace limdim

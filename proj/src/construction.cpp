#include "limdim/construction.hpp"

#include <algorithm>
#include <map>

namespace limdim {

namespace {

std::vector<ExactReal> layer_radii(const LevelWeight& w, const WeightVector& wv) {
    std::vector<ExactReal> out;
    out.reserve(wv.taus.size());
    for (const auto& tau : wv.taus) out.push_back(w.beta.pow(Rat(-tau)));
    return out;
}

std::vector<long> layer_prefixes(const SystemConfig& cfg, const std::vector<ExactReal>& radii) {
    std::vector<long> out;
    if (cfg.kind != SystemKind::PAdic) return out;
    out.reserve(radii.size());
    for (const auto& r : radii) out.push_back(padic_effective_prefix(cfg.prime, r, Rat(1)));
    return out;
}

int coord_cmp(const Coordinate& a, const Coordinate& b) {
    if (std::holds_alternative<RealCoord>(a))
        return ::cmp(std::get<RealCoord>(a).x, std::get<RealCoord>(b).x);
    if (std::holds_alternative<PAdicCoord>(a))
        return ::cmp(std::get<PAdicCoord>(a).witness, std::get<PAdicCoord>(b).witness);
    if (std::holds_alternative<GaussCoord>(a)) {
        int c = ::cmp(std::get<GaussCoord>(a).re, std::get<GaussCoord>(b).re);
        if (c) return c;
        return ::cmp(std::get<GaussCoord>(a).im, std::get<GaussCoord>(b).im);
    }
    const auto& ma = std::get<MissingCoord>(a);
    const auto& mb = std::get<MissingCoord>(b);
    if (ma.word != mb.word) return ma.word < mb.word ? -1 : 1;
    return 0;
}

int point_cmp(const Point& a, const Point& b) {
    for (size_t i = 0; i < a.coords.size(); ++i)
        if (int c = coord_cmp(a.coords[i], b.coords[i])) return c;
    return 0;
}

/// Parent rectangles are pairwise disjoint when twice the (effective) radius
/// stays below the level's separation bound beta^-1; exact check per factor.
bool parents_disjoint(const SystemConfig& cfg, const Layer& parent) {
    const ExactReal beta_inv = parent.weight.beta.pow(Rat(-1));
    for (size_t i = 0; i < parent.radii.size(); ++i) {
        if (cfg.kind == SystemKind::PAdic) {
            long k = std::get<ExpLevel>(parent.level).k;
            if (parent.padic_prefix[i] < k - 1) return false;
        } else {
            if (parent.radii[i].mul_rat(Rat(2)).cmp(beta_inv) > 0) return false;
        }
    }
    return true;
}

struct ChildQuery {
    std::vector<BallConstraint> balls;  // per factor
};

ChildQuery make_child_query(const Layer& parent, const Rectangle& rect,
                            const std::vector<ExactReal>& child_radii, int j, NestingRule rule) {
    ChildQuery q;
    const int n = static_cast<int>(parent.radii.size());
    q.balls.resize(n);
    const bool halve = (rule == NestingRule::Cantor || rule == NestingRule::CantorStrict) && j == 2;
    for (int i = 0; i < n; ++i) {
        BallConstraint& b = q.balls[i];
        b.center = &rect.center.coords[i];
        b.radius = parent.radii[i];
        b.scale = halve ? make_rat(Int(1), Int(2)) : Rat(1);
        if (rule == NestingRule::CantorStrict) {
            b.shrink_by_child = true;
            b.child_radius = child_radii[i];
        }
    }
    return q;
}

}  // namespace

Layer build_layer(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w, int j) {
    cfg.validate();
    w.validate();
    if (w.n() != cfg.n) throw ValidationError("weight arity does not match system");
    Layer layer;
    layer.level_index = j;
    layer.level = seq_level(seq, cfg, j);
    layer.weight = beta_weight(cfg, layer.level);
    layer.radii = layer_radii(layer.weight, w);
    layer.padic_prefix = layer_prefixes(cfg, layer.radii);
    auto pts = generate_level(cfg, layer.level);
    layer.rects.reserve(pts.size());
    for (auto& p : pts) layer.rects.push_back(Rectangle{std::move(p), -1});
    return layer;
}

Layer refine(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w,
             const Layer& parent, int j, NestingRule rule, RefineStats* stats) {
    if (parent.rects.empty()) throw ValidationError("refine needs a nonempty parent layer");
    if (j != parent.level_index + 1) throw ValidationError("refine layer index mismatch");
    Layer layer;
    layer.level_index = j;
    layer.level = seq_level(seq, cfg, j);
    layer.weight = beta_weight(cfg, layer.level);
    layer.radii = layer_radii(layer.weight, w);
    layer.padic_prefix = layer_prefixes(cfg, layer.radii);

    // counting pass: exact totals per parent before materializing anything;
    // bails out as soon as the cap is provably exceeded
    std::vector<Int> per_parent(parent.rects.size());
    Int total(0);
    for (size_t pi = 0; pi < parent.rects.size(); ++pi) {
        ChildQuery q = make_child_query(parent, parent.rects[pi], layer.radii, j, rule);
        Int c(1);
        for (int i = 0; i < cfg.n && c > 0; ++i)
            c *= count_factor(cfg, layer.level, i, &q.balls[i]);
        per_parent[pi] = c;
        total += c;
        if (total > cfg.enum_cap) throw ResourceCapError(total, cfg.enum_cap);
        if (c == 0 && rule != NestingRule::Cover)
            throw EmptyRefinementError(j, static_cast<long>(pi),
                                       point_to_string(parent.rects[pi].center));
    }
    if (total == 0)
        throw EmptyRefinementError(j, -1, "all parents");
    if (stats) stats->per_parent_children = per_parent;

    for (size_t pi = 0; pi < parent.rects.size(); ++pi) {
        if (per_parent[pi] == 0) continue;
        ChildQuery q = make_child_query(parent, parent.rects[pi], layer.radii, j, rule);
        std::vector<std::vector<Coordinate>> per_factor(cfg.n);
        for (int i = 0; i < cfg.n; ++i)
            per_factor[i] = enumerate_factor(cfg, layer.level, i, &q.balls[i]);
        std::vector<size_t> idx(cfg.n, 0);
        for (;;) {
            Point p;
            p.coords.reserve(cfg.n);
            for (int i = 0; i < cfg.n; ++i) p.coords.push_back(per_factor[i][idx[i]]);
            layer.rects.push_back(Rectangle{std::move(p), static_cast<long>(pi)});
            int i = cfg.n - 1;
            for (; i >= 0; --i) {
                if (++idx[i] < per_factor[i].size()) break;
                idx[i] = 0;
            }
            if (i < 0) break;
        }
    }

    // a point can fall inside two overlapping parents; keep the first copy
    if (!parents_disjoint(cfg, parent)) {
        std::vector<size_t> order(layer.rects.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
            return point_cmp(layer.rects[x].center, layer.rects[y].center) < 0;
        });
        std::vector<bool> drop(layer.rects.size(), false);
        for (size_t i = 0; i + 1 < order.size(); ++i) {
            if (point_cmp(layer.rects[order[i]].center, layer.rects[order[i + 1]].center) == 0) {
                size_t victim = std::max(order[i], order[i + 1]);
                size_t keeper = std::min(order[i], order[i + 1]);
                drop[victim] = true;
                if (victim == order[i + 1]) order[i + 1] = keeper;
            }
        }
        std::vector<Rectangle> kept;
        kept.reserve(layer.rects.size());
        for (size_t i = 0; i < layer.rects.size(); ++i)
            if (!drop[i]) kept.push_back(std::move(layer.rects[i]));
        layer.rects = std::move(kept);
    }
    return layer;
}

LayerSet build_layers(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w,
                      int depth, NestingRule rule) {
    if (depth < 1 || depth > seq.depth) throw ValidationError("construction depth out of range");
    LayerSet set;
    set.rule = rule;
    set.layers.push_back(build_layer(cfg, seq, w, 1));
    for (int j = 2; j <= depth; ++j)
        set.layers.push_back(refine(cfg, seq, w, set.layers.back(), j, rule));
    compute_radii_halving(set);
    return set;
}

void compute_radii_halving(LayerSet& set) {
    set.radii_halving = true;
    for (size_t j = 1; j < set.layers.size() && set.radii_halving; ++j)
        for (size_t i = 0; i < set.layers[j].radii.size(); ++i)
            if (set.layers[j].radii[i].mul_rat(Rat(2)).cmp(set.layers[j - 1].radii[i]) > 0)
                set.radii_halving = false;
}

Int count_next_layer(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w,
                     const Layer& parent, int j, NestingRule rule) {
    if (!parents_disjoint(cfg, parent))
        throw ValidationError("streaming count requires disjoint parent rectangles");
    Level level = seq_level(seq, cfg, j);
    LevelWeight lw = beta_weight(cfg, level);
    std::vector<ExactReal> child_radii = layer_radii(lw, w);
    Int total(0);
    for (size_t pi = 0; pi < parent.rects.size(); ++pi) {
        ChildQuery q = make_child_query(parent, parent.rects[pi], child_radii, j, rule);
        Int c(1);
        for (int i = 0; i < cfg.n && c > 0; ++i) c *= count_factor(cfg, level, i, &q.balls[i]);
        total += c;
    }
    return total;
}

MeasureTree assign_measure(const LayerSet& layers) {
    if (layers.layers.empty()) throw ValidationError("no layers");
    MeasureTree tree;
    tree.masses.resize(layers.layers.size());
    const auto& root = layers.layers.front();
    if (root.rects.empty()) throw ValidationError("empty root layer");
    Rat root_mass = make_rat(Int(1), Int(static_cast<long>(root.rects.size())));
    tree.masses[0].assign(root.rects.size(), root_mass);
    for (size_t j = 1; j < layers.layers.size(); ++j) {
        const auto& prev = layers.layers[j - 1];
        const auto& cur = layers.layers[j];
        std::vector<long> sibling_count(prev.rects.size(), 0);
        for (const auto& r : cur.rects) {
            if (r.parent < 0 || r.parent >= static_cast<long>(prev.rects.size()))
                throw ValidationError("orphan rectangle at layer " + std::to_string(j + 1));
            ++sibling_count[r.parent];
        }
        for (size_t pi = 0; pi < prev.rects.size(); ++pi)
            if (sibling_count[pi] == 0)
                throw ValidationError("childless parent at layer " + std::to_string(j) +
                                      "; measure needs the nested (cantor) rules");
        tree.masses[j].reserve(cur.rects.size());
        for (const auto& r : cur.rects)
            tree.masses[j].push_back(
                Rat(tree.masses[j - 1][r.parent] / Rat(sibling_count[r.parent])));
    }
    return tree;
}

namespace {

/// Exact open-ball / rectangle intersection test per factor.
bool rect_meets_ball(const SystemConfig& cfg, const Layer& layer, const Rectangle& rect,
                     const Point& center, const Rat& r, const Rat& dilation) {
    for (int i = 0; i < static_cast<int>(layer.radii.size()); ++i) {
        Dist d = factor_distance(cfg, rect.center.coords[i], center.coords[i]);
        if (cfg.kind == SystemKind::PAdic) {
            // prefix ball of length m (closed at p^-m) meets {d < r} iff
            // d <= p^-m or d < r
            Rat eff = rat_pow_int(Rat(cfg.prime), -layer.padic_prefix[i]) * dilation;
            if (d.cmp(eff) <= 0) continue;
            if (d.cmp(r) < 0) continue;
            return false;
        }
        // undecided enclosure comparisons count as intersecting: the measure
        // value stays a valid upper bound
        if (d.cmp_plus(r, layer.radii[i].mul_rat(dilation), -1) >= 0) return false;
    }
    return true;
}

}  // namespace

BallMeasure measure_of_ball(const MeasureTree& tree, const LayerSet& layers,
                            const SystemConfig& cfg, const WeightVector& w, const Point& center,
                            const Rat& r) {
    if (r <= 0) throw ValidationError("ball radius must be positive");
    const auto& ls = layers.layers;
    BallMeasure out;
    out.branch_layer = 0;
    std::vector<size_t> cand(ls[0].rects.size());
    for (size_t i = 0; i < cand.size(); ++i) cand[i] = i;
    std::vector<size_t> exact_hits;
    const Rat prune_dilation = Rat(3);  // center drift of descendants stays under 2x radius
    for (size_t j = 0; j < ls.size(); ++j) {
        exact_hits.clear();
        std::vector<size_t> next_parents;
        for (size_t idx : cand) {
            const auto& rect = ls[j].rects[idx];
            if (rect_meets_ball(cfg, ls[j], rect, center, r, Rat(1))) exact_hits.push_back(idx);
            if (j + 1 < ls.size()) {
                bool keep = layers.radii_halving
                                ? rect_meets_ball(cfg, ls[j], rect, center, r, prune_dilation)
                                : true;
                if (keep) next_parents.push_back(idx);
            }
        }
        if (out.branch_layer == 0 && exact_hits.size() >= 2)
            out.branch_layer = static_cast<int>(j) + 1;
        if (j + 1 < ls.size()) {
            // children of surviving parents
            std::vector<size_t> next;
            std::vector<bool> keep(ls[j].rects.size(), false);
            for (size_t idx : next_parents) keep[idx] = true;
            for (size_t ci = 0; ci < ls[j + 1].rects.size(); ++ci)
                if (keep[ls[j + 1].rects[ci].parent]) next.push_back(ci);
            cand = std::move(next);
        }
    }
    Rat mass(0);
    for (size_t idx : exact_hits) mass += tree.masses.back()[idx];
    out.mass = mass;

    // case split against beta(q_{k-1})^(-min tau), beta(q_{k-1})^(-max tau)
    out.case_label = "chain";
    if (out.branch_layer >= 2) {
        const auto& prev = ls[out.branch_layer - 2];
        Rat tau_min = w.taus[0], tau_max = w.taus[0];
        for (const auto& t : w.taus) {
            if (t < tau_min) tau_min = t;
            if (t > tau_max) tau_max = t;
        }
        ExactReal rmin = prev.weight.beta.pow(Rat(-tau_min));
        ExactReal rmax = prev.weight.beta.pow(Rat(-tau_max));
        if (rmin.cmp(r) < 0)
            out.case_label = "i";
        else if (rmax.cmp(r) <= 0)
            out.case_label = "ii";
        else
            out.case_label = "iii";
    } else if (out.branch_layer == 1) {
        out.case_label = "i";
    }
    return out;
}

Rat root_scale(const LayerSet& layers, const SystemConfig& cfg) {
    const auto& root = layers.layers.front();
    Rat best(0);
    for (const auto& rad : root.radii) {
        Rat r = rad.upper_bound(32) * 2 + cfg.space_diameter();
        if (r > best) best = r;
    }
    return best;
}

}  // namespace limdim

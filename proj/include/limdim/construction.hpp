#pragma once

#include "limdim/sequence.hpp"
#include "limdim/weights.hpp"

#include <optional>
#include <vector>

namespace limdim {

/// How a layer's rectangles are tied to the previous layer.
///   Cover:        centers inside the full parent rectangle at every step
///                 (the covering intersection E_1 cap ... cap E_j).
///   Cantor:       half-radius shrink at step 1->2, full parent rectangle for
///                 j >= 3 (the nested lower-bound construction, verbatim).
///   CantorStrict: additionally shrinks each parent by the child radius so
///                 child rectangles are fully contained in their parents.
enum class NestingRule { Cover, Cantor, CantorStrict };

struct Rectangle {
    Point center;
    long parent = -1;  // index into the previous layer
};

struct Layer {
    int level_index = 0;  // j, 1-based
    Level level;
    LevelWeight weight;
    std::vector<ExactReal> radii;    // nominal beta(q_j)^(-tau_i) per factor
    std::vector<long> padic_prefix;  // effective digit-prefix length (PAdic only)
    std::vector<Rectangle> rects;
};

struct LayerSet {
    NestingRule rule = NestingRule::Cover;
    std::vector<Layer> layers;
    bool radii_halving = true;  // every layer's radius <= half the previous one
};

struct RefineStats {
    std::vector<Int> per_parent_children;  // candidate counts before dedup
};

/// The unfiltered level-q_j layer: one rectangle per point of P(q_j).
Layer build_layer(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w, int j);

/// Children of every parent rectangle under the given rule. Throws
/// EmptyRefinementError when a parent has no child (Cantor rules) or the
/// whole layer dies (Cover); ResourceCapError when the exact child count
/// exceeds the cap.
Layer refine(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w,
             const Layer& parent, int j, NestingRule rule, RefineStats* stats = nullptr);

/// Layers 1..depth under one rule.
LayerSet build_layers(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w,
                      int depth, NestingRule rule);

/// Recompute the radii-halving flag (enables pruned ball walks).
void compute_radii_halving(LayerSet& set);

/// Exact next-layer cardinality by streaming per-parent counts, without
/// materializing. Requires pairwise-disjoint parent rectangles (checked),
/// so per-parent counts are additive.
Int count_next_layer(const SystemConfig& cfg, const SequenceSpec& seq, const WeightVector& w,
                     const Layer& parent, int j, NestingRule rule);

// ---------------------------------------------------------------------------

struct MeasureTree {
    std::vector<std::vector<Rat>> masses;  // per layer, per rectangle
};

/// Equal mass split along parent links: root layer shares mass 1, each child
/// gets parent mass / sibling count. Masses are exact rationals; every layer
/// sums to exactly 1.
MeasureTree assign_measure(const LayerSet& layers);

struct BallMeasure {
    Rat mass;                // sum over deepest-layer rectangles meeting the ball
    std::string case_label;  // "i" / "ii" / "iii", or "chain" when no layer branches
    int branch_layer = 0;    // first layer meeting >= 2 rectangles (0 if none)
};

/// Exact upper bound nu(B(center, r)) from the deepest layer, with the case
/// split on r against beta(q_{k-1})^(-min tau) and beta(q_{k-1})^(-max tau).
BallMeasure measure_of_ball(const MeasureTree& tree, const LayerSet& layers,
                            const SystemConfig& cfg, const WeightVector& w, const Point& center,
                            const Rat& r);

/// diam of the root layer region (max over factors of 2 * radius + diameter
/// of the center set); a safe sampling upper bound.
Rat root_scale(const LayerSet& layers, const SystemConfig& cfg);

}  // namespace limdim

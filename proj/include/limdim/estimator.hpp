#pragma once

#include "limdim/construction.hpp"
#include "limdim/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace limdim {

struct CoverEntry {
    int depth = 0;
    ExactReal radius;  // beta(q_j)^(-tau_axis)
    Int count{0};
    double log_count = 0;
    double neg_log_radius = 0;
    std::optional<double> local_slope;  // vs the previous entry
};

struct CoverSeries {
    int axis = 1;  // 1-based
    std::vector<CoverEntry> entries;
};

/// Ball-cover counts per depth along one axis: rectangles of layer j, each
/// split into ceil(beta^((tau_axis - tau_i) * delta_i)) balls per wider axis,
/// of radius beta(q_j)^(-tau_axis). Layers should follow the Cover rule.
/// extend_depth > materialized depth streams exactly one more level of
/// counts without materializing it.
CoverSeries covering_counts(const SystemConfig& cfg, const SequenceSpec& seq,
                            const WeightVector& w, const LayerSet& layers, int axis,
                            int extend_depth = 0);

struct SlopeFit {
    double window_slope = 0;          // least-squares over the window
    double single_point = 0;          // log N_J / (-log r_J)
    int window = 0;
    std::vector<double> local_slopes;
};

/// Least-squares slope of log N against -log r over the last `window`
/// entries, plus the single-point exponent at the deepest entry.
SlopeFit slope_estimate(const CoverSeries& series, int window);

struct EstimateReport {
    SlopeFit fit;
    double formula_value = 0;         // dimension formula at the limiting alpha
    double finite_depth_formula = 0;  // formula with alpha truncated at depth J
    double abs_error = 0;             // |single_point - finite_depth_formula|
    double alpha_finite = 0;
    std::optional<double> alpha_limit;
    CoverSeries series;
    std::vector<std::string> warnings;
};

/// Full pipeline: cover layers -> counts -> slopes -> comparison against the
/// dimension formula evaluated at alpha_finite (depth) and alpha_limit.
EstimateReport run_estimate(const SystemConfig& cfg, const SequenceSpec& seq,
                            const WeightVector& w, int depth, int axis, int window);

struct HolderReport {
    double max_ratio = 0;            // max nu(B)/r(B)^s over samples
    double empirical_exponent = 0;   // min log nu / log r
    std::string worst_ball;
    long samples = 0;
    std::uint64_t seed = 0;
};

/// Seeded sampling of balls centered at leaf rectangles with radii
/// log-uniform between the leaf radius and the root scale; evaluates the
/// mass-distribution ratio at exponent s.
HolderReport holder_probe(const MeasureTree& tree, const LayerSet& layers,
                          const SystemConfig& cfg, const WeightVector& w, double s, long samples,
                          std::uint64_t seed);

/// Threshold exponent along one axis at depth j, including the finite-depth
/// correction term (j-1) log((c2/c1) 2^(n+delta)) / log beta(q_j).
double s_value(const SystemConfig& cfg, const WeightVector& w, const SequenceStats& st, int j,
               int axis);

}  // namespace limdim

#pragma once

#include "limdim/rational.hpp"

#include <string>
#include <vector>

namespace limdim {

struct DimensionResult {
    double value = 0;
    std::vector<double> candidates;  // per axis
    std::vector<int> argmin;         // 1-based axes within 1e-12 of the min
    bool admissible = true;
    std::string mode;
    std::vector<std::string> warnings;
};

/// Weighted liminf-set dimension over Ahlfors factors:
///   min_k (1/tau_k) ( sum delta_i - alpha * sum (tau_i - 1) delta_i
///                     + sum_{j: tau_k >= tau_j} (tau_k - tau_j) delta_j ).
/// Requires tau_i, delta_i > 0 and alpha >= 0; evaluation outside the
/// admissible window (tau_i > 1, alpha <= 1/(min tau - 1)) is allowed and
/// flagged rather than refused.
DimensionResult dim_general(const std::vector<double>& taus, const std::vector<double>& deltas,
                            double alpha);

/// Real weighted form, W_n^S(tau) = Lambda(tau + 1):
///   min_k (1/(tau_k+1)) ( n - alpha * sum tau_i + sum_{i: tau_k >= tau_i} (tau_k - tau_i) ).
/// Cross-checked internally against dim_general(tau+1, 1^n, alpha).
DimensionResult dim_real(int n, const std::vector<double>& taus, double alpha);

/// Sequences with lim log q_j / log q_{j-1} = k: alpha = 1/(k-1).
/// Requires max tau_i < k - 1.
DimensionResult dim_doubly_exponential(int n, const std::vector<double>& taus, double k);

/// Limsup comparison value (all q):
///   min_j (n + 1 + sum_{i: tau_j > tau_i} (tau_j - tau_i)) / (tau_j + 1).
/// Requires sum tau_i > 1.
DimensionResult dim_rynne(int n, const std::vector<double>& taus);

}  // namespace limdim

#pragma once

#include "limdim/system.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace limdim {

struct ExplicitSeq {
    std::vector<Level> levels;
};

/// q_c = a^(b^c) for c = start, start+1, ...; integer levels (real lattice).
struct DoublyExponentialSeq {
    long a = 2, b = 2;
    long start = 0;
};

/// k_j = k1 * ratio^(start + j - 1); exponent levels (p-adic / missing digit).
struct GeometricExponentsSeq {
    long k1 = 1;
    long ratio = 2;
    long start = 0;
};

struct SequenceSpec {
    std::variant<ExplicitSeq, DoublyExponentialSeq, GeometricExponentsSeq> form;
    int depth = 0;

    bool closed_form() const { return !std::holds_alternative<ExplicitSeq>(form); }
};

/// The j-th level (1-based). Materializes the integer for closed forms, with
/// a size guard; prefer seq_beta when only the weight is needed.
Level seq_level(const SequenceSpec& spec, const SystemConfig& cfg, int j);

/// Exact beta(q_j) without materializing huge integers (a^(b^c) stays a
/// symbolic power). Base-normalized so common-base sequences compare exactly.
ExactReal seq_beta(const SequenceSpec& spec, const SystemConfig& cfg, int j);

struct SequenceStats {
    int depth = 0;
    double h_inf = 0;        // min of consecutive log-beta ratios
    double h_liminf = 0;     // min over the tail half (liminf proxy at finite depth)
    double alpha_finite = 0; // sum_{i<depth} log beta(q_i) / log beta(q_depth)
    std::optional<double> alpha_limit;  // closed forms only
    bool vanishing_ok = false;          // j/log beta(q_j) decreasing toward 0
    std::optional<Rat> h_inf_exact, alpha_finite_exact;  // common-base sequences
    std::vector<double> log_betas;      // 1-based content at [j-1]
    std::vector<std::string> warnings;
};

/// Truncated h_S and alpha_S statistics. Requires depth >= 3 and beta
/// strictly increasing (and > 1) along the sequence.
SequenceStats stats(const SequenceSpec& spec, const SystemConfig& cfg);

/// Left shift: drop the first t terms. Requires depth - t >= 3.
SequenceSpec shift(const SequenceSpec& spec, int t);

enum class AdmissibilityMode { General, RealCorollary };

struct AdmissibilityReport {
    bool ok = true;
    std::vector<std::string> reasons;
};

/// General: h_S > tau_i > 1 for all i. RealCorollary: h_S - 1 > tau_i > 0.
/// Equality with h_S is refused.
AdmissibilityReport admissible(const SequenceStats& st, const std::vector<Rat>& taus,
                               AdmissibilityMode mode);

}  // namespace limdim

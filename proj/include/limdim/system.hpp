#pragma once

#include "limdim/ahlfors.hpp"
#include "limdim/errors.hpp"
#include "limdim/point.hpp"
#include "limdim/rng.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace limdim {

enum class SystemKind { RealLattice, PAdic, Gaussian, MissingDigit };

std::string kind_name(SystemKind k);

/// Level identifier: integer q (real lattice), exponent k (p-adic q = p^k,
/// missing digit beta = b^k), or a Gaussian integer.
struct IntLevel {
    Int q;
};
struct ExpLevel {
    long k;
};
struct GaussLevel {
    Int re, im;
};
using Level = std::variant<IntLevel, ExpLevel, GaussLevel>;

std::string level_to_string(const Level& l);
bool level_equal(const Level& a, const Level& b);

struct LevelWeight {
    Level level;
    ExactReal beta;   // normalized base^exponent; Gaussian stores (a^2+b^2)^(1/2)
    double log_beta;  // natural log
};

/// Inhomogeneity table theta(q) for the real-lattice system.
struct ThetaTable {
    std::vector<Rat> fallback;             // used when no per-level entry exists
    std::map<Int, std::vector<Rat>> per_level;

    std::vector<Rat> at(const Int& q, int n) const;
};

struct SystemConfig {
    SystemKind kind = SystemKind::RealLattice;
    int n = 1;

    // RealLattice
    ThetaTable theta;

    // PAdic
    Int prime{2};
    long trunc_depth = 24;  // digit depth K for stored expansions and probes

    // MissingDigit
    long base = 3;
    std::vector<int> digit_set;
    Rat anchor;  // z; default (min J)/(b-1)

    std::vector<AhlforsFactor> factors;
    Int enum_cap{10000000};

    void validate() const;
    bool ultrametric() const { return kind == SystemKind::PAdic; }
    /// Diameter bound of the ambient product space (max metric).
    Rat space_diameter() const;
};

/// Default factor constants per system; see the module notes in README.
SystemConfig make_real_lattice(int n);
SystemConfig make_padic(const Int& p, int n = 1, long trunc_depth = 24);
SystemConfig make_gaussian();
SystemConfig make_missing_digit(long base, std::vector<int> digits, std::optional<Rat> anchor = {});

// ---------------------------------------------------------------------------
// Level weights and point enumeration

/// beta(q): q itself, |p^k| = p^k, the Gaussian modulus sqrt(a^2+b^2), or b^k.
LevelWeight beta_weight(const SystemConfig& cfg, const Level& level);

/// Open-ball restriction for factor enumeration: points p with
/// d(p, center) < scale * radius; with shrink_by_child set, the containment
/// form d(p, center) + child_radius <= scale * radius is used instead.
struct BallConstraint {
    const Coordinate* center = nullptr;
    ExactReal radius;
    Rat scale{1};
    bool shrink_by_child = false;
    ExactReal child_radius;
};

/// All level points of factor `factor`, optionally restricted to a ball.
/// Results are emitted in a canonical deterministic order.
std::vector<Coordinate> enumerate_factor(const SystemConfig& cfg, const Level& level, int factor,
                                         const BallConstraint* ball = nullptr);

/// Exact cardinality of enumerate_factor without materializing.
Int count_factor(const SystemConfig& cfg, const Level& level, int factor,
                 const BallConstraint* ball = nullptr);

/// Full product level set P(q) = P_1(q) x ... x P_n(q). Throws
/// ResourceCapError before materializing if the exact count exceeds the cap.
std::vector<Point> generate_level(const SystemConfig& cfg, const Level& level);

Int level_cardinality(const SystemConfig& cfg, const Level& level);

// ---------------------------------------------------------------------------
// Metric

Dist factor_distance(const SystemConfig& cfg, const Coordinate& a, const Coordinate& b);

/// Product (max) metric.
Dist distance(const SystemConfig& cfg, const Point& a, const Point& b);

/// Distance from a probe coordinate to the nearest level point of one factor,
/// by closed form where the lattice structure allows it. For the Gaussian
/// system this is the wrapped (torus) distance; see verify_maximal.
Dist nearest_level_distance(const SystemConfig& cfg, const Level& level, const Coordinate& probe);

// ---------------------------------------------------------------------------
// Verification

struct SeparationReport {
    bool ok = false;
    Dist min_distance;             // over all pairs, all factors
    std::string worst_pair;        // description of an attaining pair
    Int points_checked{0};
};

/// Exact pairwise separation check: min distance >= beta(q)^(-1).
SeparationReport verify_separated(const SystemConfig& cfg, const Level& level);

struct MaximalityReport {
    bool ok = false;
    Dist worst_gap;                // largest nearest-point distance over probes
    std::string worst_probe;
    long probes = 0;
    bool closed_ball = false;      // ultrametric convention: <= beta^-1
};

/// Probe-based maximality check: every sampled x in F has a level point
/// strictly within beta(q)^(-1) (p-adic: within, closed, since the ultrametric
/// quantizes distances and the paper's covering argument uses closed balls).
MaximalityReport verify_maximal(const SystemConfig& cfg, const Level& level, long probes, Rng& rng);

/// Deterministic in-domain probe point.
Point random_probe(const SystemConfig& cfg, const Level& level, Rng& rng);

struct FactorCountReport {
    Int count{0};
    double lower = 0, upper = 0;
    bool within = false;
    bool exact_bounds = false;  // bracket comparison done in exact arithmetic
};

struct CountReport {
    std::vector<FactorCountReport> factors;
    Int product_count{1};
    bool all_within = true;
};

/// Counts level points in the open ball B(center_i, radius) per factor and
/// checks the volume-argument bracket
///   (c1/c2) 2^-delta (r beta)^delta <= count <= (c2/c1) 2^(delta+1) (r beta)^delta.
/// Requires radius > beta(level)^(-1).
CountReport count_in_ball(const SystemConfig& cfg, const Level& level, const Point& center,
                          const ExactReal& radius);

// ---------------------------------------------------------------------------
// Kind-specific helpers shared with the construction module

/// Base-p digits d_0..d_{count-1} of x in Z_p (x = sum d_i p^i).
std::vector<int> padic_digits(const Rat& x, const Int& p, long count);

/// Smallest m with p^-m < radius; the open ball of that radius is the closed
/// digit-prefix ball of length m.
long padic_effective_prefix(const Int& p, const ExactReal& radius, const Rat& scale);

/// Digits of the missing-digit anchor z (eventually periodic; exact).
std::vector<int> anchor_digits(const Rat& z, long b, long count);

/// f_w(z) for a word over the digit alphabet.
Rat missing_value(const SystemConfig& cfg, const std::vector<std::uint8_t>& word);

}  // namespace limdim

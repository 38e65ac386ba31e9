#include "limdim/dimension.hpp"

#include "limdim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace limdim {

namespace {

constexpr double kTieTol = 1e-12;

void finish(DimensionResult& r) {
    r.value = *std::min_element(r.candidates.begin(), r.candidates.end());
    for (size_t k = 0; k < r.candidates.size(); ++k)
        if (r.candidates[k] <= r.value + kTieTol) r.argmin.push_back(static_cast<int>(k) + 1);
}

void check_finite_positive(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw ValidationError(std::string(what) + " must be nonempty");
    for (double x : v)
        if (!(x > 0) || !std::isfinite(x))
            throw ValidationError(std::string(what) + " entries must be positive and finite");
}

}  // namespace

DimensionResult dim_general(const std::vector<double>& taus, const std::vector<double>& deltas,
                            double alpha) {
    check_finite_positive(taus, "tau");
    check_finite_positive(deltas, "delta");
    if (taus.size() != deltas.size()) throw ValidationError("tau/delta length mismatch");
    if (!(alpha >= 0) || !std::isfinite(alpha))
        throw ValidationError("alpha must be finite and nonnegative");

    DimensionResult r;
    r.mode = "general";
    const size_t n = taus.size();
    double delta_sum = 0, weighted = 0, tau_min = taus[0];
    for (size_t i = 0; i < n; ++i) {
        delta_sum += deltas[i];
        weighted += (taus[i] - 1.0) * deltas[i];
        tau_min = std::min(tau_min, taus[i]);
    }
    for (size_t i = 0; i < n; ++i) {
        if (taus[i] <= 1.0) {
            r.admissible = false;
            r.warnings.push_back("tau_" + std::to_string(i + 1) + " <= 1");
        }
    }
    if (tau_min > 1.0 && alpha > 1.0 / (tau_min - 1.0) + kTieTol) {
        r.admissible = false;
        r.warnings.push_back("alpha exceeds 1/(min tau - 1)");
    }
    r.candidates.resize(n);
    for (size_t k = 0; k < n; ++k) {
        double corr = 0;
        for (size_t j = 0; j < n; ++j)
            if (taus[k] >= taus[j]) corr += (taus[k] - taus[j]) * deltas[j];
        r.candidates[k] = (delta_sum - alpha * weighted + corr) / taus[k];
    }
    finish(r);
    return r;
}

DimensionResult dim_real(int n, const std::vector<double>& taus, double alpha) {
    check_finite_positive(taus, "tau");
    if (static_cast<int>(taus.size()) != n) throw ValidationError("tau length must equal n");
    if (!(alpha >= 0) || !std::isfinite(alpha))
        throw ValidationError("alpha must be finite and nonnegative");

    DimensionResult r;
    r.mode = "real";
    double tau_sum = 0, tau_min = taus[0];
    for (double t : taus) {
        tau_sum += t;
        tau_min = std::min(tau_min, t);
    }
    if (alpha > 1.0 / tau_min + kTieTol) {
        r.admissible = false;
        r.warnings.push_back("alpha exceeds 1/(min tau)");
    }
    r.candidates.resize(n);
    for (int k = 0; k < n; ++k) {
        double corr = 0;
        for (int i = 0; i < n; ++i)
            if (taus[k] >= taus[i]) corr += taus[k] - taus[i];
        r.candidates[k] = (double(n) - alpha * tau_sum + corr) / (taus[k] + 1.0);
    }
    finish(r);

    // substitution identity with the general form, tau -> tau + 1, delta = 1
    std::vector<double> shifted(taus);
    for (double& t : shifted) t += 1.0;
    DimensionResult g = dim_general(shifted, std::vector<double>(n, 1.0), alpha);
    if (std::fabs(g.value - r.value) > 1e-12)
        throw std::logic_error("dim_real disagrees with dim_general under tau+1 substitution");
    return r;
}

DimensionResult dim_doubly_exponential(int n, const std::vector<double>& taus, double k) {
    check_finite_positive(taus, "tau");
    if (!(k > 1) || !std::isfinite(k)) throw ValidationError("k must exceed 1");
    double tau_max = *std::max_element(taus.begin(), taus.end());
    if (!(tau_max < k - 1.0))
        throw AdmissibilityError("max tau must be below k - 1");
    DimensionResult r = dim_real(n, taus, 1.0 / (k - 1.0));
    r.mode = "doubly_exponential";
    return r;
}

DimensionResult dim_rynne(int n, const std::vector<double>& taus) {
    check_finite_positive(taus, "tau");
    if (static_cast<int>(taus.size()) != n) throw ValidationError("tau length must equal n");
    double tau_sum = 0;
    for (double t : taus) tau_sum += t;
    if (!(tau_sum > 1.0)) throw ValidationError("rynne formula requires sum tau > 1");

    DimensionResult r;
    r.mode = "rynne";
    r.candidates.resize(n);
    for (int j = 0; j < n; ++j) {
        double corr = 0;
        for (int i = 0; i < n; ++i)
            if (taus[j] > taus[i]) corr += taus[j] - taus[i];
        r.candidates[j] = (double(n) + 1.0 + corr) / (taus[j] + 1.0);
    }
    finish(r);
    return r;
}

}  // namespace limdim

#pragma once

#include "limdim/ahlfors.hpp"
#include "limdim/errors.hpp"

#include <vector>

namespace limdim {

/// Exponent tuple tau with the per-factor Ahlfors exponents. taus stay
/// rational so radius comparisons beta^(-tau) remain exact.
struct WeightVector {
    std::vector<Rat> taus;
    std::vector<DeltaExp> deltas;

    int n() const { return static_cast<int>(taus.size()); }
    std::vector<double> taus_d() const {
        std::vector<double> v;
        v.reserve(taus.size());
        for (const auto& t : taus) v.push_back(rat_to_double(t));
        return v;
    }
    std::vector<double> deltas_d() const {
        std::vector<double> v;
        v.reserve(deltas.size());
        for (const auto& d : deltas) v.push_back(d.to_double());
        return v;
    }
    void validate() const {
        if (taus.empty() || taus.size() != deltas.size())
            throw ValidationError("weight vector arity mismatch");
        for (const auto& t : taus)
            if (t <= 0) throw ValidationError("tau entries must be positive");
    }
};

}  // namespace limdim

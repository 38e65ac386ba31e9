#include "limdim/ahlfors.hpp"

#include "limdim/errors.hpp"

namespace limdim {

std::optional<ExactReal> pow_delta(const ExactReal& x, const DeltaExp& delta) {
    if (delta.kind == DeltaExp::Kind::Rational) return x.pow(delta.rational);
    if (x.is_one()) return ExactReal::one();
    // x = B^e with B = den^m exactly  =>  x^(log num / log den) = num^(m*e)
    const Rat& b = x.base();
    if (b.get_den() != 1) return std::nullopt;
    Int base = b.get_num();
    Int m(0);
    Int acc(1);
    while (acc < base) {
        acc *= delta.log_den;
        ++m;
    }
    if (acc != base) return std::nullopt;
    return ExactReal::power(Rat(delta.log_num), Rat(x.exponent() * m));
}

void AhlforsFactor::validate() const {
    if (c_lower <= 0 || c_upper <= 0 || c_lower > c_upper)
        throw ValidationError("Ahlfors constants must satisfy 0 < c_lower <= c_upper");
    if (r_max <= 0) throw ValidationError("Ahlfors r_max must be positive");
    if (delta.to_double() <= 0) throw ValidationError("Ahlfors exponent must be positive");
}

}  // namespace limdim

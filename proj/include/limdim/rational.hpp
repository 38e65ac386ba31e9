#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace limdim {

using Int = mpz_class;
using Rat = mpq_class;

/// Canonical rational from a numerator/denominator pair.
Rat make_rat(const Int& num, const Int& den);

/// Parse "a/b", a plain integer, or a decimal string ("-0.25") exactly.
Rat parse_rat(const std::string& s);

/// Serialize as "num/den" (always includes the denominator).
std::string rat_to_string(const Rat& r);

/// r^e with integer exponent, exact. r must be nonzero when e < 0.
Rat rat_pow_int(const Rat& r, long e);

/// Natural log of a positive rational, via mantissa/exponent splitting so
/// values like 2^4096 do not overflow the double conversion.
double rat_log(const Rat& r);

double rat_to_double(const Rat& r);

Int rat_floor(const Rat& r);
Int rat_ceil(const Rat& r);

/// p-adic valuation v_p(r) for nonzero r; v_p(num) - v_p(den).
long padic_valuation(const Rat& r, const Int& p);

/// floor(x^(1/n)) for x >= 0.
Int iroot_floor(const Int& x, unsigned long n);

/// If n = m^t with t maximal (t >= 1), returns {m, t}; n must be >= 1.
std::pair<Int, unsigned long> largest_power_root(const Int& n);

}  // namespace limdim

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace nondiv {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

Rational make_rational(const Integer& num, const Integer& den);

/// Canonical "p/q" text form (lowest terms, q > 0). Integers are written "p/1".
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

/// Accepts "p", "p/q" and "-p/q"; throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

Rational pow(const Rational& base, long exponent);
Integer pow(const Integer& base, unsigned long exponent);

/// Natural log of |x| that does not overflow for numerators/denominators
/// far outside double range. x must be nonzero.
double log_abs(const Rational& x);

/// x as a double; saturates to 0 / inf outside the double range.
double to_double(const Rational& x);

/// A rational r > 0 with r^den >= x^num, within a relative 1e-9 of the real
/// root x^(num/den). x must be positive.
Rational root_upper_bound(const Rational& x, unsigned long num, unsigned long den);

/// lcm(1, ..., n).
unsigned long lcm_upto(unsigned long n);

RatVector to_rational(const IntVector& v);

Rational dot(const RatVector& a, const RatVector& b);

}  // namespace nondiv

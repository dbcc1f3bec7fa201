#include "nondiv/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nondiv {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_string(const Integer& x) { return x.get_str(); }

namespace {

bool is_integer_literal(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!is_integer_literal(num_text)) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  Integer num(std::string(num_text[0] == '+' ? num_text.substr(1) : num_text));
  Integer den(1);
  if (slash != std::string_view::npos) {
    const auto den_text = text.substr(slash + 1);
    if (!is_integer_literal(den_text) || den_text[0] == '-' || den_text[0] == '+')
      throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    den = Integer(std::string(den_text));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  return make_rational(num, den);
}

Rational pow(const Rational& base, long exponent) {
  Integer num, den;
  const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return make_rational(den, num);
  }
  return make_rational(num, den);
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

namespace {

double log_abs_integer(const Integer& z) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace

double log_abs(const Rational& x) {
  if (x == 0) throw std::domain_error("log of zero");
  return log_abs_integer(x.get_num()) - log_abs_integer(x.get_den());
}

double to_double(const Rational& x) {
  if (x == 0) return 0.0;
  const double l = log_abs(x);
  if (l > 700.0) return sgn(x) > 0 ? HUGE_VAL : -HUGE_VAL;
  if (l < -740.0) return 0.0;
  return x.get_d();
}

Rational root_upper_bound(const Rational& x, unsigned long num, unsigned long den) {
  if (x <= 0) throw std::domain_error("root_upper_bound needs x > 0");
  if (den == 0) throw std::domain_error("zero root index");
  const Rational target = pow(x, static_cast<long>(num));
  double log_r = log_abs(x) * static_cast<double>(num) / static_cast<double>(den);
  for (double slack = 1e-9;; slack *= 16.0) {
    const double l = log_r + slack;
    // r = m * 2^e with a 53-bit mantissa keeps the rational small.
    const double e = std::floor(l / std::log(2.0));
    const double m = std::exp(l - e * std::log(2.0));
    Rational r(m);
    if (e >= 0)
      r *= Rational(pow(Integer(2), static_cast<unsigned long>(e)));
    else
      r /= Rational(pow(Integer(2), static_cast<unsigned long>(-e)));
    r.canonicalize();
    if (pow(r, static_cast<long>(den)) >= target) return r;
  }
}

unsigned long lcm_upto(unsigned long n) {
  unsigned long l = 1;
  for (unsigned long k = 2; k <= n; ++k) l = std::lcm(l, k);
  return l;
}

RatVector to_rational(const IntVector& v) {
  RatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace nondiv

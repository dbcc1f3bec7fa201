#include "generators.hpp"

#include <algorithm>
#include <numeric>

namespace gen {

Rational small_rational(Rng& rng, long bound) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

RatMatrix random_unimodular_n3(Rng& rng) {
  while (true) {
    RatMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = small_rational(rng, 16);
    // det is affine in m(2,2): det = rest + m22 * minor.
    const Rational minor = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (minor == 0) continue;
    m(2, 2) = 0;
    const Rational rest = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                          m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                          m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    const Rational v = (1 - rest) / minor;
    if (v.get_den() > 16 || abs(v.get_num()) > 16 * v.get_den()) continue;
    m(2, 2) = v;
    return m;
  }
}

IntMatrix random_gl_z(std::size_t n, Rng& rng, int steps) {
  IntMatrix m = IntMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> mult(-2, 2);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = pick(rng), j = pick(rng);
    const int c = mult(rng);
    if (i == j || c == 0) continue;
    for (std::size_t k = 0; k < n; ++k) m(i, k) += c * m(j, k);
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  IntMatrix p(n, n);
  std::bernoulli_distribution flip(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    const int sign = flip(rng) ? -1 : 1;
    for (std::size_t k = 0; k < n; ++k) p(i, k) = sign * m(perm[i], k);
  }
  return p;
}

RatMatrix random_rational_basis(std::size_t n, Rng& rng, int max_depth) {
  RatMatrix u = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) u(i, j) = small_rational(rng, 4);
  return mul(mul(random_squeeze(n, rng, 0, max_depth), u), to_rat(random_gl_z(n, rng, 2 * static_cast<int>(n))));
}

RatMatrix diag(const std::vector<Rational>& d) {
  RatMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

RatMatrix mul(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

RatMatrix random_squeeze(std::size_t n, Rng& rng, int min_depth, int max_depth) {
  std::uniform_int_distribution<int> depth(min_depth, max_depth);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<int> a(n, 0);
  const std::size_t low = pick(rng);
  a[low] = -depth(rng);
  // Spread the compensating exponent over the other coordinates.
  int remaining = -a[low];
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i)
    if (i != low) others.push_back(i);
  for (std::size_t k = 0; k + 1 < others.size(); ++k) {
    std::uniform_int_distribution<int> share(-remaining / 2, remaining);
    const int s = share(rng);
    a[others[k]] = s;
    remaining -= s;
  }
  a[others.back()] = remaining;
  std::vector<Rational> d;
  for (int e : a) {
    Rational x(1);
    if (e >= 0)
      x = Rational(nondiv::Integer(1) << e);
    else
      x = Rational(nondiv::Integer(1), nondiv::Integer(1) << -e);
    d.push_back(x);
  }
  return diag(d);
}

std::vector<RatMatrix> so21_generators() {
  auto embed = [](const RatMatrix& g) {
    RatMatrix m = RatMatrix::identity(4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i + 1, j + 1) = g(i, j);
    return m;
  };
  const Rational z(0), o(1);
  const RatMatrix rot{{Rational(3, 5), Rational(-4, 5), z}, {Rational(4, 5), Rational(3, 5), z}, {z, z, o}};
  const RatMatrix bxz{{Rational(5, 4), z, Rational(3, 4)}, {z, o, z}, {Rational(3, 4), z, Rational(5, 4)}};
  const RatMatrix byz{{o, z, z}, {z, Rational(5, 4), Rational(3, 4)}, {z, Rational(3, 4), Rational(5, 4)}};
  return {embed(rot), embed(bxz), embed(byz)};
}

nondiv::Scenario sl4_scenario() { return nondiv::Scenario(4, {{0, 1}, {1, 4}}, so21_generators()); }

nondiv::Scenario twin_sl2_scenario() {
  auto twin = [](const RatMatrix& g) {
    RatMatrix m = RatMatrix::identity(5);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        m(1 + i, 1 + j) = g(i, j);
        m(3 + i, 3 + j) = g(i, j);
      }
    return m;
  };
  const Rational z(0), o(1);
  return nondiv::Scenario(5, {{0, 1}, {1, 3}, {3, 5}}, {twin(RatMatrix{{o, o}, {z, o}}), twin(RatMatrix{{o, z}, {o, o}})});
}

nondiv::IntVector random_int_vector(std::size_t n, Rng& rng, long b) {
  std::uniform_int_distribution<long> d(-b, b);
  nondiv::IntVector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace gen

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

template <class T>
T leibniz(const nondiv::Matrix<T>& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("det of a non-square matrix");
  if (n == 0) return T(1);
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  T total(0);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    T term(inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < n && term != 0; ++i) term *= m(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

template <class T>
nondiv::Matrix<T> columns(const nondiv::Matrix<T>& m, const std::vector<std::size_t>& cols) {
  nondiv::Matrix<T> out(m.rows(), cols.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(i, cols[j]);
  return out;
}

// Calls f on each increasing k-subset of 0..n-1.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

IntVector primitive(const RatVector& v) {
  Integer den(1);
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  IntVector out(v.size());
  Integer g(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = Integer(v[i] * den);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  for (auto& x : out) x /= g;
  return out;
}

Rational quad(const RatMatrix& g, const IntVector& x) {
  Rational s(0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += g(i, j) * x[i] * x[j];
  return s;
}

RatMatrix transpose(const RatMatrix& a) {
  RatMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

}  // namespace

Rational det(const RatMatrix& m) { return leibniz(m); }
Integer det(const IntMatrix& m) { return leibniz(m); }

RatMatrix inverse(const RatMatrix& m) {
  const std::size_t n = m.rows();
  const Rational d = det(m);
  if (d == 0) throw std::domain_error("singular");
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RatMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      inv(i, j) = ((i + j) % 2 ? -1 : 1) * det(minor) / d;
    }
  return inv;
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

std::vector<Rational> plucker(const RatMatrix& rows) {
  std::vector<Rational> out;
  for_each_subset(rows.cols(), rows.rows(), [&](const auto& idx) { out.push_back(det(columns(rows, idx))); });
  return out;
}

Rational wedge_sq_norm(const RatMatrix& rows) {
  Rational s(0);
  for (const auto& p : plucker(rows)) s += p * p;
  return s;
}

std::size_t rank(const RatMatrix& m) {
  for (std::size_t k = std::min(m.rows(), m.cols()); k > 0; --k) {
    bool found = false;
    for_each_subset(m.rows(), k, [&](const auto& ri) {
      if (found) return;
      RatMatrix sub(k, m.cols());
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) sub(i, j) = m(ri[i], j);
      for_each_subset(m.cols(), k, [&](const auto& ci) {
        if (!found && det(columns(sub, ci)) != 0) found = true;
      });
    });
    if (found) return k;
  }
  return 0;
}

Integer maximal_minor_gcd(const IntMatrix& rows) {
  Integer g(0);
  for_each_subset(rows.cols(), rows.rows(), [&](const auto& idx) {
    const Integer d = det(columns(rows, idx));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
  });
  return g;
}

bool in_row_lattice(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t k = b.rows();
  std::vector<std::size_t> cols;
  for_each_subset(b.cols(), k, [&](const auto& idx) {
    if (cols.empty() && det(columns(b, idx)) != 0) cols = idx;
  });
  if (cols.empty()) throw std::invalid_argument("b lacks full row rank");
  // x b = r  restricted to `cols`: x = r_cols (b_cols)^{-1}.
  const RatMatrix binv = oracle::inverse(to_rat(columns(b, cols)));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    RatVector x(k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t t = 0; t < k; ++t) x[j] += Rational(a(r, cols[t])) * binv(t, j);
    for (const auto& xi : x)
      if (xi.get_den() != 1) return false;
    for (std::size_t c = 0; c < b.cols(); ++c) {
      Rational s(0);
      for (std::size_t j = 0; j < k; ++j) s += x[j] * b(j, c);
      if (s != a(r, c)) return false;
    }
  }
  return true;
}

std::vector<Vec> short_vectors(const RatMatrix& gram, const Rational& bound_sq) {
  const std::size_t n = gram.rows();
  const RatMatrix ginv = oracle::inverse(gram);
  std::vector<long> lim(n);
  for (std::size_t i = 0; i < n; ++i)
    lim[i] = static_cast<long>(std::floor(std::sqrt(Rational(bound_sq * ginv(i, i)).get_d()) + 1e-9)) + 1;
  std::vector<Vec> out;
  IntVector x(n, Integer(0));
  std::vector<long> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = -lim[i];
  while (true) {
    bool nonzero = false, positive = false;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = v[i];
      if (!nonzero && v[i] != 0) {
        nonzero = true;
        positive = v[i] > 0;
      }
    }
    if (nonzero && positive) {
      const Rational q = quad(gram, x);
      if (q <= bound_sq) out.push_back({x, q});
    }
    std::size_t i = 0;
    while (i < n && v[i] == lim[i]) v[i] = -lim[i], ++i;
    if (i == n) break;
    ++v[i];
  }
  std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return a.coords < b.coords;
  });
  return out;
}

Rational generated_covolume_sq(const IntMatrix& gens, const RatMatrix& basis) {
  const std::size_t n = gens.cols();
  const std::size_t r = oracle::rank(to_rat(gens));
  if (r == 0) throw std::invalid_argument("generators span {0}");
  auto pick = [&](const std::vector<std::size_t>& ri) {
    IntMatrix sub(ri.size(), n);
    for (std::size_t i = 0; i < ri.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) sub(i, j) = gens(ri[i], j);
    return sub;
  };
  // gcd of every r x r minor of the stack; the first independent r-subset R.
  Integer g_all(0);
  std::vector<std::size_t> chosen;
  for_each_subset(gens.rows(), r, [&](const auto& ri) {
    const Integer g = maximal_minor_gcd(pick(ri));
    mpz_gcd(g_all.get_mpz_t(), g_all.get_mpz_t(), g.get_mpz_t());
    if (chosen.empty() && g != 0) chosen = ri;
  });
  const IntMatrix rsub = pick(chosen);
  RatMatrix real(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) real(i, a) += basis(a, b) * rsub(i, b);
  // [sat : R] / [sat : stack] = [stack : R].
  const Rational index = nondiv::make_rational(maximal_minor_gcd(rsub), g_all);
  return wedge_sq_norm(real) / (index * index);
}

unsigned long lcm_upto(unsigned long n) {
  unsigned long l = 1;
  for (unsigned long k = 2; k <= n; ++k) l = std::lcm(l, k);
  return l;
}

Rational normalized_pow(const Rational& cov_sq, std::size_t dim, unsigned long l) {
  Rational r(1);
  for (unsigned long i = 0; i < l / dim; ++i) r *= cov_sq;
  return r;
}

namespace {

// Pairwise size reduction of a Gram matrix until no swap-free step shortens a
// vector; keeps the lattice, shrinks the enumeration boxes.
RatMatrix pair_reduce(RatMatrix g) {
  const std::size_t n = g.rows();
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Rational r = g(i, j) / g(j, j);
        Integer c = (r.get_num() * 2 + r.get_den()) / (2 * r.get_den());
        if (r < 0) c = -((-r.get_num() * 2 + r.get_den()) / (2 * r.get_den()));
        if (c == 0) continue;
        const Rational cr(c);
        const Rational next = g(i, i) - 2 * cr * g(i, j) + cr * cr * g(j, j);
        if (next >= g(i, i)) continue;
        // b_i -= c b_j
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) g(i, k) -= cr * g(j, k);
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) g(k, i) = g(i, k);
        g(i, i) = next;
        changed = true;
      }
  }
  return g;
}

}  // namespace

Rational delta_pow_trivial_low_rank(const RatMatrix& basis) {
  const std::size_t n = basis.rows();
  const unsigned long l = lcm_upto(n);
  const RatMatrix gram = pair_reduce(mul(oracle::transpose(basis), basis));
  const RatMatrix dual_gram = pair_reduce(oracle::inverse(gram));
  // Per dimension the minimum is at most min(1, shortest basis vector), so
  // that caps each box.
  auto cap = [](const RatMatrix& g) {
    Rational c(1);
    for (std::size_t i = 0; i < g.rows(); ++i) c = std::min(c, g(i, i));
    return c;
  };
  Rational best(1);
  for (const auto& v : short_vectors(gram, cap(gram))) best = std::min(best, normalized_pow(v.norm_sq, 1, l));
  if (n - 1 > 1)
    for (const auto& c : short_vectors(dual_gram, cap(dual_gram)))
      best = std::min(best, normalized_pow(c.norm_sq, n - 1, l));
  return best;
}

Rational delta_pow_two_blocks(const RatMatrix& basis) {
  const std::size_t n = basis.rows();
  const unsigned long l = lcm_upto(n);
  const RatMatrix binv = oracle::inverse(basis);
  // V_1: Λ ∩ R e_1 = Z B x with x the primitive vector along B^{-1} e_1.
  RatVector col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = binv(i, 0);
  const IntVector x = primitive(col);
  Rational v1(0);
  for (std::size_t r = 0; r < n; ++r) {
    Rational s(0);
    for (std::size_t c = 0; c < n; ++c) s += basis(r, c) * x[c];
    v1 += s * s;
  }
  // V_2 = e_1^⊥: lattice coordinates orthogonal to c = primitive(B^T e_1).
  RatVector row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = basis(0, i);
  const IntVector c = primitive(row);
  Rational v2(0);
  for (std::size_t r = 0; r < n; ++r) {
    Rational s(0);
    for (std::size_t k = 0; k < n; ++k) s += binv(k, r) * c[k];
    v2 += s * s;
  }
  return std::min({Rational(1), normalized_pow(v1, 1, l), normalized_pow(v2, n - 1, l)});
}

}  // namespace oracle

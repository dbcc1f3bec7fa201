#include "nondiv/rational_linalg.hpp"

#include <algorithm>

namespace nondiv {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

namespace {

template <class T>
Matrix<T> multiply_impl(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

template <class T>
Matrix<T> transpose_impl(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

}  // namespace

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) { return multiply_impl(a, b); }
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) { return multiply_impl(a, b); }
RatMatrix transpose(const RatMatrix& a) { return transpose_impl(a); }
IntMatrix transpose(const IntMatrix& a) { return transpose_impl(a); }

RatVector multiply(const RatMatrix& a, const RatVector& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector shape mismatch");
  RatVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (x[j] != 0) y[i] += a(i, j) * x[j];
  return y;
}

Rational determinant(RatMatrix a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      a.swap_rows(p, c);
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      const Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

std::size_t rank(RatMatrix a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      const Rational f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

RatMatrix inverse(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix m = a;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) throw DependentVectors("singular matrix");
    m.swap_rows(p, c);
    inv.swap_rows(p, c);
    const Rational piv = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

IntMatrix to_integer(const RatMatrix& a) {
  IntMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).get_den() != 1) throw InternalInvariantViolation("matrix is not integral");
      m(i, j) = a(i, j).get_num();
    }
  return m;
}

namespace {

// rows a, b <- (x*a + y*b, -(vb/g)*a + (va/g)*b); determinant 1.
void combine_rows(IntMatrix& m, std::size_t a, std::size_t b, const Integer& x, const Integer& y,
                  const Integer& p, const Integer& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Integer ra = m(a, j);
    const Integer rb = m(b, j);
    m(a, j) = x * ra + y * rb;
    m(b, j) = p * ra + q * rb;
  }
}

void add_multiple(IntMatrix& m, std::size_t target, std::size_t source, const Integer& factor) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(target, j) += factor * m(source, j);
}

void negate_row(IntMatrix& m, std::size_t i) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

}  // namespace

HnfResult hnf(const IntMatrix& input) {
  HnfResult res{input, IntMatrix::identity(input.rows()), 0};
  IntMatrix& h = res.h;
  IntMatrix& u = res.u;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      Integer g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), h(r, c).get_mpz_t(), h(i, c).get_mpz_t());
      const Integer p = -h(i, c) / g;
      const Integer q = h(r, c) / g;
      combine_rows(h, r, i, x, y, p, q);
      combine_rows(u, r, i, x, y, p, q);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer f;
      mpz_fdiv_q(f.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      if (f == 0) continue;
      add_multiple(h, i, r, -f);
      add_multiple(u, i, r, -f);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

IntMatrix hnf_basis(const IntMatrix& m) {
  auto res = hnf(m);
  return res.h.top(res.rank);
}

IntMatrix integer_kernel(const IntMatrix& m, std::size_t cols) {
  if (m.rows() == 0) return IntMatrix::identity(cols);
  if (m.cols() != cols) throw DimensionMismatch("kernel column count mismatch");
  // U m^T = H; the rows of U past rank(H) annihilate m^T.
  const auto res = hnf(transpose(m));
  IntMatrix k(cols - res.rank, cols);
  for (std::size_t i = res.rank; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j) k(i - res.rank, j) = res.u(i, j);
  return hnf_basis(k);
}

IntMatrix saturate(const IntMatrix& m) {
  const std::size_t n = m.cols();
  const IntMatrix k = integer_kernel(m, n);
  if (k.rows() == 0) return IntMatrix::identity(n);
  if (k.rows() == n) return IntMatrix(0, n);
  return integer_kernel(k, n);
}

bool is_saturated(const IntMatrix& m) { return saturate(m) == hnf_basis(m); }

Rational gram_det(const std::vector<RatVector>& vectors) {
  const std::size_t k = vectors.size();
  RatMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      g(i, j) = dot(vectors[i], vectors[j]);
      g(j, i) = g(i, j);
    }
  const Rational d = determinant(g);
  if (d == 0) throw DependentVectors();
  return d;
}

Rational gram_det(const IntMatrix& rows, const RatMatrix& form) {
  const RatMatrix x = to_rational(rows);
  const Rational d = determinant(multiply(multiply(x, form), transpose(x)));
  if (d == 0) throw DependentVectors();
  return d;
}

RatVector RowSpace::reduce(RatVector v) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const std::size_t p = pivots_[i];
    if (v[p] == 0) continue;
    const Rational f = v[p];
    for (std::size_t j = 0; j < ambient_; ++j)
      if (basis_[i][j] != 0) v[j] -= f * basis_[i][j];
  }
  return v;
}

bool RowSpace::contains(const RatVector& v) const {
  const RatVector r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; });
}

bool RowSpace::add(const RatVector& v) {
  if (v.size() != ambient_) throw DimensionMismatch("row space ambient mismatch");
  RatVector r = reduce(v);
  std::size_t p = 0;
  while (p < ambient_ && r[p] == 0) ++p;
  if (p == ambient_) return false;
  const Rational piv = r[p];
  for (auto& x : r) x /= piv;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i][p] == 0) continue;
    const Rational f = basis_[i][p];
    for (std::size_t j = 0; j < ambient_; ++j) basis_[i][j] -= f * r[j];
  }
  const auto pos = static_cast<std::ptrdiff_t>(std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin());
  basis_.insert(basis_.begin() + pos, std::move(r));
  pivots_.insert(pivots_.begin() + pos, p);
  return true;
}

IntVector primitive_integer_vector(const RatVector& v) {
  Integer den(1);
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  IntVector out(v.size());
  Integer g(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].get_num() * (den / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g == 0) throw DependentVectors("zero vector has no primitive representative");
  for (auto& x : out) x /= g;
  return out;
}

}  // namespace nondiv

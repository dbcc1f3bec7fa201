#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "nondiv/errors.hpp"
#include "nondiv/rational.hpp"

namespace nondiv {

/// Dense row-major matrix over an exact ring. Zero-row matrices are allowed
/// (they stand for the zero sublattice).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_row(std::size_t i, const std::vector<T>& r) {
    if (r.size() != cols_) throw DimensionMismatch("row length mismatch");
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
  }
  void append_row(const std::vector<T>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw DimensionMismatch("row length mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  /// First `n` rows.
  Matrix top(std::size_t n) const {
    Matrix m(n, cols_);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
RatVector multiply(const RatMatrix& a, const RatVector& x);
RatMatrix transpose(const RatMatrix& a);
IntMatrix transpose(const IntMatrix& a);

Rational determinant(RatMatrix a);
std::size_t rank(RatMatrix a);
/// Throws DependentVectors when singular.
RatMatrix inverse(const RatMatrix& a);
/// Converts an integral rational matrix; throws InternalInvariantViolation otherwise.
IntMatrix to_integer(const RatMatrix& a);

struct HnfResult {
  IntMatrix h;  ///< row-style Hermite normal form, zero rows trailing
  IntMatrix u;  ///< unimodular, h = u * m
  std::size_t rank = 0;
};

/// Row-style Hermite normal form: positive pivots, entries above each pivot
/// reduced into [0, pivot).
HnfResult hnf(const IntMatrix& m);

/// Nonzero rows of hnf(m).h.
IntMatrix hnf_basis(const IntMatrix& m);

/// Rows form a basis of {x in Z^cols : m x = 0}, in HNF. A 0-row input has
/// kernel Z^cols.
IntMatrix integer_kernel(const IntMatrix& m, std::size_t cols);

/// Basis (HNF) of (Q-row-span of m) ∩ Z^cols.
IntMatrix saturate(const IntMatrix& m);

bool is_saturated(const IntMatrix& m);

/// det of the Gram matrix <v_i, v_j>; the squared norm of v_1 ∧ ... ∧ v_k.
/// Throws DependentVectors if it vanishes.
Rational gram_det(const std::vector<RatVector>& vectors);

/// det(X G X^T) for rows X and a symmetric form G.
Rational gram_det(const IntMatrix& rows, const RatMatrix& form);

/// Incremental reduced row echelon basis of a Q-subspace of Q^n.
class RowSpace {
 public:
  explicit RowSpace(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  bool contains(const RatVector& v) const;
  /// Adds v; returns false if v was already in the span.
  bool add(const RatVector& v);
  const std::vector<RatVector>& basis() const noexcept { return basis_; }

 private:
  RatVector reduce(RatVector v) const;

  std::size_t ambient_;
  std::vector<RatVector> basis_;  // RREF rows, pivots_[i] is the pivot column of basis_[i]
  std::vector<std::size_t> pivots_;
};

/// Clears denominators and divides out the content: the primitive integer
/// vector on the same ray as v. v must be nonzero.
IntVector primitive_integer_vector(const RatVector& v);

}  // namespace nondiv

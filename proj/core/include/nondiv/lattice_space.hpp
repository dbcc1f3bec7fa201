#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nondiv/rational_linalg.hpp"

namespace nondiv {

/// A point of SL_N(R)/SL_N(Z): the lattice spanned by the columns of an exact
/// rational basis with |det| = 1.
class UnimodularLattice {
 public:
  /// Throws NotUnimodular unless |det(basis)| = 1, DimensionMismatch unless
  /// the basis is square with N >= 2.
  explicit UnimodularLattice(RatMatrix basis);

  static UnimodularLattice standard(std::size_t n);

  std::size_t dimension() const noexcept { return basis_.rows(); }
  const RatMatrix& basis() const noexcept { return basis_; }
  int det_sign() const noexcept { return det_sign_; }
  /// B^T B; the Euclidean form in lattice coordinates.
  const RatMatrix& gram() const noexcept { return gram_; }

  /// B x for integer coordinates x.
  RatVector real_vector(const IntVector& coords) const;

  friend bool operator==(const UnimodularLattice& a, const UnimodularLattice& b) {
    return a.basis_ == b.basis_;
  }

 private:
  RatMatrix basis_;
  RatMatrix gram_;
  int det_sign_ = 1;
};

/// A nonzero Λ-rational subspace W, stored by the saturated HNF basis of the
/// integer coordinates of Λ ∩ W with respect to the lattice basis.
class RationalSubspace {
 public:
  /// Saturates and reduces the rows; throws DependentVectors if they span {0}.
  static RationalSubspace from_generators(const IntMatrix& rows);
  static RationalSubspace full(std::size_t n);
  /// Span of standard coordinate vectors e_i, i in `indices` (0-based).
  static RationalSubspace coordinate(std::size_t n, const std::vector<std::size_t>& indices);

  std::size_t ambient() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  bool is_full() const noexcept { return dim() == ambient(); }
  const IntMatrix& basis() const noexcept { return basis_; }

  bool contains(const IntVector& coords) const;
  bool contains(const RationalSubspace& other) const;

  /// Real coordinates B x of the basis rows.
  RatMatrix real_basis(const UnimodularLattice& lat) const;

  friend bool operator==(const RationalSubspace& a, const RationalSubspace& b) {
    return a.basis_ == b.basis_;
  }

 private:
  explicit RationalSubspace(IntMatrix hnf) : basis_(std::move(hnf)) {}
  IntMatrix basis_;
};

/// Deterministic tie-break order: smaller dimension first, then pivot
/// columns, then the HNF entries lexicographically.
std::strong_ordering canonical_order(const RationalSubspace& a, const RationalSubspace& b);

struct Block {
  std::size_t begin = 0;  ///< 0-based, inclusive
  std::size_t end = 0;    ///< 0-based, exclusive
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Block&, const Block&) = default;
};

/// R^N = ⊕ V_i with contiguous coordinate blocks V_i, generators of the split
/// semisimple part M (block diagonal, det 1) and the full block-scalar torus S.
class Scenario {
 public:
  /// Validates the partition and the generators; throws InvalidScenario.
  Scenario(std::size_t dimension, std::vector<Block> blocks, std::vector<RatMatrix> m_generators);

  /// Trivial M with one block per coordinate (S = full diagonal torus).
  static Scenario diagonal(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const std::vector<RatMatrix>& m_generators() const noexcept { return generators_; }
  bool m_trivial() const noexcept { return generators_.empty(); }
  std::size_t torus_rank() const noexcept { return blocks_.size() - 1; }
  std::vector<std::size_t> block_dims() const;
  std::size_t block_of(std::size_t coordinate) const;

  /// Pairs (i, j) of equal-dimensional blocks on which every generator has
  /// the same trace: a hint that V_i and V_j may be isomorphic M-modules.
  std::vector<std::pair<std::size_t, std::size_t>> isomorphism_warnings() const;

 private:
  std::size_t dimension_;
  std::vector<Block> blocks_;
  std::vector<RatMatrix> generators_;
};

/// s ∈ S: a positive rational scalar per block with ∏ s_i^{dim V_i} = 1.
class TorusElement {
 public:
  /// Throws InvalidTorusElement on a non-positive scalar or determinant != 1.
  TorusElement(std::vector<Rational> scalars, std::vector<std::size_t> block_dims);

  static TorusElement identity(std::vector<std::size_t> block_dims);

  const std::vector<Rational>& scalars() const noexcept { return scalars_; }
  const std::vector<std::size_t>& block_dims() const noexcept { return block_dims_; }
  std::size_t dimension() const noexcept;

  /// Scalar on each coordinate, in coordinate order.
  std::vector<Rational> coordinate_scalars() const;
  RatMatrix as_matrix() const;
  TorusElement inverse() const;

  friend TorusElement operator*(const TorusElement& a, const TorusElement& b);
  friend bool operator==(const TorusElement& a, const TorusElement& b) {
    return a.scalars_ == b.scalars_ && a.block_dims_ == b.block_dims_;
  }

 private:
  std::vector<Rational> scalars_;
  std::vector<std::size_t> block_dims_;
};

/// ‖Λ_W‖², exact.
Rational covolume_sq(const UnimodularLattice& lat, const RationalSubspace& w);

/// Squared covolume of the (not necessarily saturated) sublattice spanned by
/// the integer rows.
Rational sublattice_covolume_sq(const UnimodularLattice& lat, const IntMatrix& rows);

/// Squared covolume of Λ_{W1} + Λ_{W2} as a sublattice (no saturation).
Rational sum_lattice_covolume_sq(const UnimodularLattice& lat, const RationalSubspace& w1,
                                 const RationalSubspace& w2);

RationalSubspace subspace_sum(const RationalSubspace& w1, const RationalSubspace& w2);

/// W1 ∩ W2, or nullopt for the zero subspace.
std::optional<RationalSubspace> subspace_intersect(const RationalSubspace& w1, const RationalSubspace& w2);

/// The generators of M written in lattice coordinates: B^{-1} g B.
std::vector<RatMatrix> generators_in_lattice_coords(const UnimodularLattice& lat, const Scenario& sc);

/// g W = W for every generator g of M.
bool is_m_stable(const RationalSubspace& w, const UnimodularLattice& lat, const Scenario& sc);
bool is_m_stable(const RationalSubspace& w, const std::vector<RatMatrix>& lattice_generators);

/// Smallest M-stable subspace containing the rational span (in lattice
/// coordinates) of `seed`, as a RowSpace.
RowSpace m_closure(RowSpace seed, const std::vector<RatMatrix>& lattice_generators);

/// g·Λ; throws NotUnimodular if |det g| != 1.
UnimodularLattice apply_group(const RatMatrix& g, const UnimodularLattice& lat);
UnimodularLattice apply_torus(const TorusElement& s, const UnimodularLattice& lat);

}  // namespace nondiv

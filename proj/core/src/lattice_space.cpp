#include "nondiv/lattice_space.hpp"

#include <algorithm>

namespace nondiv {

UnimodularLattice::UnimodularLattice(RatMatrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols()) throw DimensionMismatch("lattice basis must be square");
  if (basis_.rows() < 2) throw DimensionMismatch("lattice dimension must be at least 2");
  const Rational d = determinant(basis_);
  if (d == 1) {
    det_sign_ = 1;
  } else if (d == -1) {
    det_sign_ = -1;
  } else {
    throw NotUnimodular("basis determinant is " + to_string(d) + ", expected ±1");
  }
  gram_ = multiply(transpose(basis_), basis_);
}

UnimodularLattice UnimodularLattice::standard(std::size_t n) {
  return UnimodularLattice(RatMatrix::identity(n));
}

RatVector UnimodularLattice::real_vector(const IntVector& coords) const {
  return multiply(basis_, to_rational(coords));
}

RationalSubspace RationalSubspace::from_generators(const IntMatrix& rows) {
  IntMatrix s = saturate(rows);
  if (s.rows() == 0) throw DependentVectors("generators span the zero subspace");
  return RationalSubspace(std::move(s));
}

RationalSubspace RationalSubspace::full(std::size_t n) { return RationalSubspace(IntMatrix::identity(n)); }

RationalSubspace RationalSubspace::coordinate(std::size_t n, const std::vector<std::size_t>& indices) {
  IntMatrix rows(indices.size(), n);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= n) throw DimensionMismatch("coordinate index out of range");
    rows(i, indices[i]) = 1;
  }
  return from_generators(rows);
}

bool RationalSubspace::contains(const IntVector& coords) const {
  if (coords.size() != ambient()) throw DimensionMismatch("vector/subspace ambient mismatch");
  IntMatrix m = basis_;
  m.append_row(coords);
  return rank(to_rational(m)) == dim();
}

bool RationalSubspace::contains(const RationalSubspace& other) const {
  if (other.ambient() != ambient()) throw DimensionMismatch("subspace ambient mismatch");
  if (other.dim() > dim()) return false;
  for (std::size_t i = 0; i < other.dim(); ++i)
    if (!contains(other.basis_.row(i))) return false;
  return true;
}

RatMatrix RationalSubspace::real_basis(const UnimodularLattice& lat) const {
  if (lat.dimension() != ambient()) throw DimensionMismatch("subspace/lattice dimension mismatch");
  return multiply(to_rational(basis_), transpose(lat.basis()));
}

namespace {

std::vector<std::size_t> pivot_columns(const IntMatrix& h) {
  std::vector<std::size_t> p;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::size_t j = 0;
    while (j < h.cols() && h(i, j) == 0) ++j;
    p.push_back(j);
  }
  return p;
}

}  // namespace

std::strong_ordering canonical_order(const RationalSubspace& a, const RationalSubspace& b) {
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  if (auto c = a.ambient() <=> b.ambient(); c != 0) return c;
  if (auto c = pivot_columns(a.basis()) <=> pivot_columns(b.basis()); c != 0) return c;
  const auto& da = a.basis().data();
  const auto& db = b.basis().data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const int c = cmp(da[i], db[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

Scenario::Scenario(std::size_t dimension, std::vector<Block> blocks, std::vector<RatMatrix> m_generators)
    : dimension_(dimension), blocks_(std::move(blocks)), generators_(std::move(m_generators)) {
  if (dimension_ < 2) throw InvalidScenario("dimension must be at least 2");
  if (blocks_.empty()) throw InvalidScenario("no blocks given");
  std::size_t next = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    const std::string label = "block " + std::to_string(i) + " [" + std::to_string(b.begin + 1) + "," +
                              std::to_string(b.end) + "]";
    if (b.end <= b.begin) throw InvalidScenario(label + " is empty");
    if (b.begin < next) throw InvalidScenario(label + " overlaps the previous block");
    if (b.begin > next) throw InvalidScenario(label + " leaves a gap before it");
    next = b.end;
  }
  if (next != dimension_) throw InvalidScenario("blocks do not cover 1.." + std::to_string(dimension_));
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    const auto& m = generators_[g];
    const std::string label = "m_generator " + std::to_string(g);
    if (m.rows() != dimension_ || m.cols() != dimension_) throw InvalidScenario(label + " has the wrong shape");
    for (std::size_t i = 0; i < dimension_; ++i)
      for (std::size_t j = 0; j < dimension_; ++j)
        if (m(i, j) != 0 && block_of(i) != block_of(j))
          throw InvalidScenario(label + " is not block diagonal");
    if (determinant(m) != 1) throw InvalidScenario(label + " does not have determinant 1");
  }
}

Scenario Scenario::diagonal(std::size_t dimension) {
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < dimension; ++i) blocks.push_back({i, i + 1});
  return Scenario(dimension, std::move(blocks), {});
}

std::vector<std::size_t> Scenario::block_dims() const {
  std::vector<std::size_t> d;
  for (const auto& b : blocks_) d.push_back(b.size());
  return d;
}

std::size_t Scenario::block_of(std::size_t coordinate) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (coordinate >= blocks_[i].begin && coordinate < blocks_[i].end) return i;
  throw DimensionMismatch("coordinate outside the blocks");
}

std::vector<std::pair<std::size_t, std::size_t>> Scenario::isomorphism_warnings() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (generators_.empty()) return out;
  auto trace = [](const RatMatrix& g, const Block& b) {
    Rational t(0);
    for (std::size_t i = b.begin; i < b.end; ++i) t += g(i, i);
    return t;
  };
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
      if (blocks_[i].size() != blocks_[j].size()) continue;
      const bool same = std::all_of(generators_.begin(), generators_.end(), [&](const RatMatrix& g) {
        return trace(g, blocks_[i]) == trace(g, blocks_[j]);
      });
      if (same) out.emplace_back(i, j);
    }
  return out;
}

TorusElement::TorusElement(std::vector<Rational> scalars, std::vector<std::size_t> block_dims)
    : scalars_(std::move(scalars)), block_dims_(std::move(block_dims)) {
  if (scalars_.size() != block_dims_.size()) throw InvalidTorusElement("one scalar per block is required");
  Rational det(1);
  for (std::size_t i = 0; i < scalars_.size(); ++i) {
    if (scalars_[i] <= 0) throw InvalidTorusElement("torus scalars must be positive");
    det *= pow(scalars_[i], static_cast<long>(block_dims_[i]));
  }
  if (det != 1) throw InvalidTorusElement("torus element has determinant " + to_string(det));
}

TorusElement TorusElement::identity(std::vector<std::size_t> block_dims) {
  std::vector<Rational> ones(block_dims.size(), Rational(1));
  return TorusElement(std::move(ones), std::move(block_dims));
}

std::size_t TorusElement::dimension() const noexcept {
  std::size_t n = 0;
  for (auto d : block_dims_) n += d;
  return n;
}

std::vector<Rational> TorusElement::coordinate_scalars() const {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < scalars_.size(); ++i) out.insert(out.end(), block_dims_[i], scalars_[i]);
  return out;
}

RatMatrix TorusElement::as_matrix() const {
  const auto diag = coordinate_scalars();
  RatMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

TorusElement TorusElement::inverse() const {
  std::vector<Rational> inv;
  for (const auto& s : scalars_) inv.push_back(1 / s);
  return TorusElement(std::move(inv), block_dims_);
}

TorusElement operator*(const TorusElement& a, const TorusElement& b) {
  if (a.block_dims_ != b.block_dims_) throw DimensionMismatch("torus elements over different blocks");
  std::vector<Rational> s(a.scalars_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.scalars_[i] * b.scalars_[i];
  return TorusElement(std::move(s), a.block_dims_);
}

Rational covolume_sq(const UnimodularLattice& lat, const RationalSubspace& w) {
  if (w.ambient() != lat.dimension()) throw DimensionMismatch("subspace/lattice dimension mismatch");
  return gram_det(w.basis(), lat.gram());
}

Rational sublattice_covolume_sq(const UnimodularLattice& lat, const IntMatrix& rows) {
  return gram_det(hnf_basis(rows), lat.gram());
}

Rational sum_lattice_covolume_sq(const UnimodularLattice& lat, const RationalSubspace& w1,
                                 const RationalSubspace& w2) {
  IntMatrix rows = w1.basis();
  for (std::size_t i = 0; i < w2.dim(); ++i) rows.append_row(w2.basis().row(i));
  return sublattice_covolume_sq(lat, rows);
}

RationalSubspace subspace_sum(const RationalSubspace& w1, const RationalSubspace& w2) {
  if (w1.ambient() != w2.ambient()) throw DimensionMismatch("subspace ambient mismatch");
  IntMatrix rows = w1.basis();
  for (std::size_t i = 0; i < w2.dim(); ++i) rows.append_row(w2.basis().row(i));
  return RationalSubspace::from_generators(rows);
}

std::optional<RationalSubspace> subspace_intersect(const RationalSubspace& w1, const RationalSubspace& w2) {
  if (w1.ambient() != w2.ambient()) throw DimensionMismatch("subspace ambient mismatch");
  const std::size_t n = w1.ambient();
  // Λ ∩ W1 ∩ W2 is cut out by the union of the defining equations.
  IntMatrix eqs = integer_kernel(w1.basis(), n);
  const IntMatrix k2 = integer_kernel(w2.basis(), n);
  if (eqs.rows() == 0) {
    eqs = k2;
  } else {
    for (std::size_t i = 0; i < k2.rows(); ++i) eqs.append_row(k2.row(i));
  }
  IntMatrix meet = eqs.rows() == 0 ? IntMatrix::identity(n) : integer_kernel(eqs, n);
  if (meet.rows() == 0) return std::nullopt;
  return RationalSubspace::from_generators(meet);
}

std::vector<RatMatrix> generators_in_lattice_coords(const UnimodularLattice& lat, const Scenario& sc) {
  if (sc.dimension() != lat.dimension()) throw DimensionMismatch("scenario/lattice dimension mismatch");
  std::vector<RatMatrix> out;
  if (sc.m_trivial()) return out;
  const RatMatrix binv = inverse(lat.basis());
  for (const auto& g : sc.m_generators()) out.push_back(multiply(multiply(binv, g), lat.basis()));
  return out;
}

bool is_m_stable(const RationalSubspace& w, const std::vector<RatMatrix>& lattice_generators) {
  if (lattice_generators.empty() || w.is_full()) return true;
  RowSpace span(w.ambient());
  for (std::size_t i = 0; i < w.dim(); ++i) span.add(to_rational(w.basis().row(i)));
  for (const auto& g : lattice_generators)
    for (std::size_t i = 0; i < w.dim(); ++i)
      if (!span.contains(multiply(g, to_rational(w.basis().row(i))))) return false;
  return true;
}

bool is_m_stable(const RationalSubspace& w, const UnimodularLattice& lat, const Scenario& sc) {
  if (w.ambient() != lat.dimension()) throw DimensionMismatch("subspace/lattice dimension mismatch");
  return is_m_stable(w, generators_in_lattice_coords(lat, sc));
}

RowSpace m_closure(RowSpace seed, const std::vector<RatMatrix>& lattice_generators) {
  if (lattice_generators.empty()) return seed;
  // Basis vectors change as RREF rows are updated, so re-scan until the
  // dimension stops growing.
  while (true) {
    const std::size_t before = seed.dim();
    const auto snapshot = seed.basis();
    for (const auto& v : snapshot) {
      for (const auto& g : lattice_generators) {
        seed.add(multiply(g, v));
        if (seed.dim() == seed.ambient()) return seed;
      }
    }
    if (seed.dim() == before) return seed;
  }
}

UnimodularLattice apply_group(const RatMatrix& g, const UnimodularLattice& lat) {
  if (g.rows() != lat.dimension() || g.cols() != lat.dimension())
    throw DimensionMismatch("group element/lattice dimension mismatch");
  const Rational d = determinant(g);
  if (d != 1 && d != -1) throw NotUnimodular("group element has determinant " + to_string(d));
  return UnimodularLattice(multiply(g, lat.basis()));
}

UnimodularLattice apply_torus(const TorusElement& s, const UnimodularLattice& lat) {
  if (s.dimension() != lat.dimension()) throw DimensionMismatch("torus/lattice dimension mismatch");
  const auto diag = s.coordinate_scalars();
  RatMatrix b = lat.basis();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) *= diag[i];
  return UnimodularLattice(std::move(b));
}

}  // namespace nondiv

#include "nondiv/subspace_search.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace nondiv {

namespace {

// Rows of U^{-1}[:, d:] where U X^T = [T; 0]: completes the saturated rows X
// to a basis of Z^n.
IntMatrix complement_rows(const IntMatrix& x, std::size_t n) {
  if (x.rows() == 0) return IntMatrix::identity(n);
  const auto res = hnf(transpose(x));
  const IntMatrix uinv = to_integer(inverse(to_rational(res.u)));
  IntMatrix c(n - res.rank, n);
  for (std::size_t i = res.rank; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r) c(i - res.rank, r) = uinv(r, i);
  return c;
}

Rational hermite_power_bound(std::size_t j) {
  // γ_j^j <= (4/3)^{j(j-1)/2}
  return pow(Rational(4, 3), static_cast<long>(j * (j - 1) / 2));
}

}  // namespace

SubspaceSearch::SubspaceSearch(const UnimodularLattice& lat, const Scenario& sc,
                               std::optional<RationalSubspace> base, std::size_t budget)
    : lat_(lat), n_(lat.dimension()), budget_(budget) {
  if (sc.dimension() != n_) throw DimensionMismatch("scenario/lattice dimension mismatch");
  generators_ = generators_in_lattice_coords(lat, sc);
  base_rows_ = IntMatrix(0, n_);
  if (base) {
    if (base->ambient() != n_) throw DimensionMismatch("base subspace dimension mismatch");
    base_rows_ = base->basis();
    base_dim_ = base->dim();
    base_covolume_sq_ = covolume_sq(lat, *base);
  }
  complement_ = complement_rows(base_rows_, n_);
  const RatMatrix& g = lat.gram();
  const RatMatrix c = to_rational(complement_);
  const RatMatrix gcc = multiply(multiply(c, g), transpose(c));
  if (base_dim_ == 0) {
    projected_gram_ = gcc;
  } else {
    const RatMatrix x = to_rational(base_rows_);
    const RatMatrix gxx = multiply(multiply(x, g), transpose(x));
    const RatMatrix gcx = multiply(multiply(c, g), transpose(x));
    projected_gram_ = gcc;
    const RatMatrix corr = multiply(multiply(gcx, inverse(gxx)), transpose(gcx));
    for (std::size_t i = 0; i < gcc.rows(); ++i)
      for (std::size_t k = 0; k < gcc.cols(); ++k) projected_gram_(i, k) -= corr(i, k);
  }
  if (projected_gram_.rows() > 0) projected_min_sq_ = shortest_vector_sq_gram(projected_gram_);
}

std::size_t SubspaceSearch::max_relative_dim() const noexcept {
  return n_ - base_dim_ == 0 ? 0 : n_ - base_dim_ - 1;
}

std::vector<SubspaceCandidate> SubspaceSearch::extensions(std::size_t j, const Rational& cap, bool strict) const {
  std::vector<SubspaceCandidate> out;
  if (j == 0 || j > max_relative_dim() || cap <= 0) return out;
  const std::size_t target = base_dim_ + j;

  // Successive minima of the projected Λ_U: each >= λ₁, product <= P.
  const Rational product_cap = hermite_power_bound(j) * cap;
  const Rational& lam = projected_min_sq_;
  const Rational radius = product_cap / pow(lam, static_cast<long>(j - 1));
  if (radius < lam) return out;
  const auto vecs = short_vectors_gram(projected_gram_, radius, budget_);

  std::vector<RatVector> lifts;
  lifts.reserve(vecs.size());
  for (const auto& v : vecs) {
    RatVector x(n_);
    for (std::size_t r = 0; r < complement_.rows(); ++r)
      if (v.coords[r] != 0)
        for (std::size_t c = 0; c < n_; ++c) x[c] += Rational(Integer(v.coords[r] * complement_(r, c)));
    lifts.push_back(std::move(x));
  }

  RowSpace start(n_);
  for (std::size_t i = 0; i < base_dim_; ++i) start.add(to_rational(base_rows_.row(i)));

  const bool trivial_m = generators_.empty();
  auto seen_less = [](const RationalSubspace& a, const RationalSubspace& b) { return canonical_order(a, b) < 0; };
  std::set<RationalSubspace, decltype(seen_less)> seen(seen_less);

  auto emit = [&](const RowSpace& span) {
    IntMatrix rows(0, n_);
    for (const auto& b : span.basis()) rows.append_row(primitive_integer_vector(b));
    RationalSubspace u = RationalSubspace::from_generators(rows);
    if (!seen.insert(u).second) return;
    const Rational cov = covolume_sq(lat_, u);
    const Rational quotient = cov / base_covolume_sq_;
    if (strict ? quotient < cap : quotient <= cap) out.push_back({std::move(u), cov});
  };

  std::function<void(std::size_t, const RowSpace&, std::size_t, const Rational&)> dfs =
      [&](std::size_t from, const RowSpace& span, std::size_t depth, const Rational& prod) {
        for (std::size_t i = from; i < vecs.size(); ++i) {
          const Rational next_prod = prod * vecs[i].norm_sq;
          // Unchosen minima are >= this vector (trivial M: every minimum gets
          // chosen, in sorted order) or >= λ₁ (general M).
          const Rational& tail = trivial_m ? vecs[i].norm_sq : lam;
          // Monotone in i, so nothing later survives either.
          if (next_prod * pow(tail, static_cast<long>(j - depth - 1)) > product_cap) break;
          if (span.contains(lifts[i])) continue;
          RowSpace grown = span;
          grown.add(lifts[i]);
          grown = m_closure(std::move(grown), generators_);
          if (grown.dim() > target) continue;
          if (grown.dim() == target) {
            emit(grown);
          } else {
            dfs(i + 1, grown, depth + 1, next_prod);
          }
        }
      };
  dfs(0, start, 0, Rational(1));

  std::sort(out.begin(), out.end(),
            [](const SubspaceCandidate& a, const SubspaceCandidate& b) { return canonical_order(a.subspace, b.subspace) < 0; });
  return out;
}

}  // namespace nondiv

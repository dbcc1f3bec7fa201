#include "nondiv/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nondiv/subspace_search.hpp"

namespace nondiv {

namespace {

struct Gso {
  std::vector<RatVector> mu;  // mu[i][j], j < i
  RatVector bstar;            // squared Gram-Schmidt lengths
};

Gso gram_schmidt(const RatMatrix& g) {
  const std::size_t n = g.rows();
  Gso gso{std::vector<RatVector>(n, RatVector(n)), RatVector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = g(i, j);
      for (std::size_t l = 0; l < j; ++l) s -= gso.mu[j][l] * gso.mu[i][l] * gso.bstar[l];
      gso.mu[i][j] = s / gso.bstar[j];
    }
    Rational b = g(i, i);
    for (std::size_t l = 0; l < i; ++l) b -= gso.mu[i][l] * gso.mu[i][l] * gso.bstar[l];
    if (b <= 0) throw DependentVectors("Gram matrix is not positive definite");
    gso.bstar[i] = b;
  }
  return gso;
}

Integer round_nearest(const Rational& x) {
  Rational shifted = x + Rational(1, 2);
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return r;
}

RatMatrix congruence(const RatMatrix& g, const IntMatrix& t) {
  const RatMatrix tr = to_rational(t);
  return multiply(multiply(transpose(tr), g), tr);
}

}  // namespace

GramReduction lll_reduce_gram(const RatMatrix& gram) {
  const std::size_t n = gram.rows();
  IntMatrix t = IntMatrix::identity(n);
  RatMatrix g = gram;
  Gso gso = gram_schmidt(g);
  const Rational delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    bool changed = false;
    for (std::size_t jj = k; jj-- > 0;) {
      const Integer q = round_nearest(gso.mu[k][jj]);
      if (q == 0) continue;
      for (std::size_t r = 0; r < n; ++r) t(r, k) -= q * t(r, jj);
      for (std::size_t l = 0; l < jj; ++l) gso.mu[k][l] -= Rational(q) * gso.mu[jj][l];
      gso.mu[k][jj] -= Rational(q);
      changed = true;
    }
    if (changed) g = congruence(gram, t);
    if (gso.bstar[k] >= (delta - gso.mu[k][k - 1] * gso.mu[k][k - 1]) * gso.bstar[k - 1]) {
      ++k;
      continue;
    }
    for (std::size_t r = 0; r < n; ++r) std::swap(t(r, k), t(r, k - 1));
    g = congruence(gram, t);
    gso = gram_schmidt(g);
    k = std::max<std::size_t>(k - 1, 1);
  }
  return {congruence(gram, t), t};
}

namespace {

class FinckePohst {
 public:
  FinckePohst(const RatMatrix& gram, const Rational& bound, std::size_t budget)
      : n_(gram.rows()), gso_(gram_schmidt(gram)), bound_(bound), budget_(budget), x_(n_, 0) {}

  std::vector<std::pair<std::vector<long long>, Rational>> run() {
    if (n_ > 0) recurse(n_ - 1, Rational(0), true);
    return std::move(found_);
  }

 private:
  void recurse(std::size_t i, const Rational& partial, bool zero_above) {
    Rational center(0);
    for (std::size_t j = i + 1; j < n_; ++j)
      if (x_[j] != 0) center -= gso_.mu[j][i] * Rational(static_cast<long>(x_[j]));
    const Rational rem = bound_ - partial;
    if (rem < 0) return;
    const double radius = std::sqrt(to_double(rem / gso_.bstar[i]));
    const double c = to_double(center);
    if (std::fabs(c) + radius > 1e15) throw BudgetExceeded("enumeration coordinates overflow");
    long long lo = static_cast<long long>(std::floor(c - radius)) - 1;
    const long long hi = static_cast<long long>(std::ceil(c + radius)) + 1;
    if (zero_above) lo = std::max<long long>(lo, 0);
    for (long long v = lo; v <= hi; ++v) {
      const Rational diff = Rational(static_cast<long>(v)) - center;
      const Rational contrib = gso_.bstar[i] * diff * diff;
      if (contrib > rem) continue;
      x_[i] = v;
      const Rational next = partial + contrib;
      if (i == 0) {
        if (zero_above && v == 0) continue;
        if (found_.size() >= budget_)
          throw BudgetExceeded("more than " + std::to_string(budget_) + " vectors under the bound");
        found_.emplace_back(x_, next);
      } else {
        recurse(i - 1, next, zero_above && v == 0);
      }
    }
    x_[i] = 0;
  }

  std::size_t n_;
  Gso gso_;
  Rational bound_;
  std::size_t budget_;
  std::vector<long long> x_;
  std::vector<std::pair<std::vector<long long>, Rational>> found_;
};

bool coords_less(const IntVector& a, const IntVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

}  // namespace

std::vector<ShortVector> short_vectors_gram(const RatMatrix& gram, const Rational& bound_sq, std::size_t budget) {
  if (bound_sq <= 0) throw DegreeOutOfRange("short vector bound must be positive");
  const std::size_t n = gram.rows();
  const GramReduction red = lll_reduce_gram(gram);
  FinckePohst fp(red.gram, bound_sq, budget);
  std::vector<ShortVector> out;
  for (auto& [x, norm] : fp.run()) {
    IntVector v(n, Integer(0));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (x[c] != 0) v[r] += red.transform(r, c) * Integer(static_cast<long>(x[c]));
    std::size_t first = 0;
    while (first < n && v[first] == 0) ++first;
    if (first < n && v[first] < 0)
      for (auto& e : v) e = -e;
    out.push_back({std::move(v), std::move(norm)});
  }
  std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return coords_less(a.coords, b.coords);
  });
  return out;
}

std::vector<ShortVector> short_vectors(const UnimodularLattice& lat, const Rational& bound_sq, std::size_t budget) {
  return short_vectors_gram(lat.gram(), bound_sq, budget);
}

Rational shortest_vector_sq_gram(const RatMatrix& gram) {
  const GramReduction red = lll_reduce_gram(gram);
  Rational bound = red.gram(0, 0);
  for (std::size_t i = 1; i < red.gram.rows(); ++i) bound = std::min(bound, Rational(red.gram(i, i)));
  FinckePohst fp(red.gram, bound, kDefaultVectorBudget);
  Rational best = bound;
  for (const auto& entry : fp.run()) best = std::min(best, entry.second);
  return best;
}

Rational shortest_vector_sq(const UnimodularLattice& lat) { return shortest_vector_sq_gram(lat.gram()); }

Rational normalized_covolume_pow(const Rational& covolume_sq, std::size_t dim, unsigned long l) {
  return pow(covolume_sq, static_cast<long>(l / dim));
}

namespace {

// Base 2 keeps dyadic values exact.
double log2_abs(const Integer& z) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp2);
}

}  // namespace

double delta_from_pow(const Rational& delta_sq_pow, unsigned long l) {
  if (delta_sq_pow <= 0) return 0.0;
  const double lg = log2_abs(delta_sq_pow.get_num()) - log2_abs(delta_sq_pow.get_den());
  return std::exp2(lg / (2.0 * static_cast<double>(l)));
}

bool delta_precedes(const Rational& q, const RationalSubspace& w, const Rational& best_q,
                    const RationalSubspace& best_w) {
  if (q != best_q) return q < best_q;
  return canonical_order(w, best_w) < 0;
}

std::vector<RationalSubspace> eligible_subspaces(const UnimodularLattice& lat, const Scenario& sc,
                                                 const Rational& covolume_sq_cap, std::size_t budget) {
  if (covolume_sq_cap <= 0) throw DegreeOutOfRange("covolume cap must be positive");
  SubspaceSearch search(lat, sc, std::nullopt, budget);
  std::vector<RationalSubspace> out;
  for (std::size_t j = 1; j <= search.max_relative_dim(); ++j)
    for (auto& c : search.extensions(j, covolume_sq_cap, false)) out.push_back(std::move(c.subspace));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return canonical_order(a, b) < 0; });
  return out;
}

namespace {

DeltaResult full_space_result(std::size_t n, unsigned long l) {
  return DeltaResult{Rational(1), l, 1.0, RationalSubspace::full(n), Rational(1), true};
}

}  // namespace

DeltaResult delta_m(const UnimodularLattice& lat, const Scenario& sc, std::size_t budget) {
  const std::size_t n = lat.dimension();
  const unsigned long l = lcm_upto(n);
  DeltaResult best = full_space_result(n, l);
  SubspaceSearch search(lat, sc, std::nullopt, budget);

  // Seed with M-closures of reduced-basis prefixes so the caps start tight.
  const IntMatrix& t = lll_reduce_gram(lat.gram()).transform;
  RowSpace span(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!span.add(to_rational(t.col(k)))) continue;
    span = m_closure(std::move(span), search.lattice_generators());
    if (span.dim() == n) break;
    IntMatrix rows(0, n);
    for (const auto& b : span.basis()) rows.append_row(primitive_integer_vector(b));
    RationalSubspace w = RationalSubspace::from_generators(rows);
    const Rational cov = covolume_sq(lat, w);
    const Rational q = normalized_covolume_pow(cov, w.dim(), l);
    if (delta_precedes(q, w, best.delta_sq_pow, best.witness)) {
      best.delta_sq_pow = q;
      best.witness = std::move(w);
      best.witness_covolume_sq = cov;
    }
  }

  for (std::size_t j = 1; j <= search.max_relative_dim(); ++j) {
    // q(W) <= q_best  <=>  ‖Λ_W‖² <= q_best^{j/L}
    const Rational cap = root_upper_bound(best.delta_sq_pow, j, l);
    std::vector<SubspaceCandidate> found;
    try {
      found = search.extensions(j, cap, false);
    } catch (const BudgetExceeded&) {
      best.complete = false;
      continue;
    }
    for (auto& c : found) {
      const Rational q = normalized_covolume_pow(c.covolume_sq, j, l);
      if (delta_precedes(q, c.subspace, best.delta_sq_pow, best.witness)) {
        best.delta_sq_pow = q;
        best.witness = std::move(c.subspace);
        best.witness_covolume_sq = c.covolume_sq;
      }
    }
  }
  best.delta_float = delta_from_pow(best.delta_sq_pow, l);
  return best;
}

namespace {

// Calls `visit` on every k x n HNF matrix with pivots in [1, bound] and free
// entries in [-bound, bound].
void for_each_bounded_hnf(std::size_t k, std::size_t n, unsigned bound,
                          const std::function<void(const IntMatrix&)>& visit) {
  std::vector<std::size_t> pivots(k);
  IntMatrix h(k, n);
  const long b = static_cast<long>(bound);

  std::function<void(std::size_t)> fill_entries;
  std::vector<std::pair<std::size_t, std::size_t>> free_cells;
  std::vector<std::pair<long, long>> ranges;

  std::function<void(std::size_t)> odometer = [&](std::size_t idx) {
    if (idx == free_cells.size()) {
      visit(h);
      return;
    }
    const auto [r, c] = free_cells[idx];
    for (long v = ranges[idx].first; v <= ranges[idx].second; ++v) {
      h(r, c) = v;
      odometer(idx + 1);
    }
    h(r, c) = 0;
  };

  std::function<void(std::size_t)> choose_pivot_values = [&](std::size_t row) {
    if (row == k) {
      free_cells.clear();
      ranges.clear();
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = pivots[r] + 1; c < n; ++c) {
          const auto it = std::find(pivots.begin(), pivots.end(), c);
          if (it != pivots.end()) {
            const std::size_t pr = static_cast<std::size_t>(it - pivots.begin());
            free_cells.emplace_back(r, c);
            ranges.emplace_back(0, h(pr, c).get_si() - 1);
          } else {
            free_cells.emplace_back(r, c);
            ranges.emplace_back(-b, b);
          }
        }
      odometer(0);
      return;
    }
    for (long v = 1; v <= b; ++v) {
      h(row, pivots[row]) = v;
      choose_pivot_values(row + 1);
    }
  };

  std::function<void(std::size_t, std::size_t)> choose_pivots = [&](std::size_t row, std::size_t start) {
    if (row == k) {
      h = IntMatrix(k, n);
      choose_pivot_values(0);
      return;
    }
    for (std::size_t c = start; c + (k - row) <= n; ++c) {
      pivots[row] = c;
      choose_pivots(row + 1, c + 1);
    }
  };
  choose_pivots(0, 0);
}

// Fraction-free determinant of a small integer matrix (Bareiss).
Integer bareiss_det(std::vector<Integer> a, std::size_t k) {
  Integer prev(1);
  int sign = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (a[i * k + i] == 0) {
      std::size_t r = i + 1;
      while (r < k && a[r * k + i] == 0) ++r;
      if (r == k) return Integer(0);
      for (std::size_t c = 0; c < k; ++c) std::swap(a[i * k + c], a[r * k + c]);
      sign = -sign;
    }
    for (std::size_t r = i + 1; r < k; ++r) {
      for (std::size_t c = i + 1; c < k; ++c) {
        Integer t = a[r * k + c] * a[i * k + i] - a[r * k + i] * a[i * k + c];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[r * k + c] = std::move(t);
      }
    }
    prev = a[i * k + i];
  }
  return sign * a[k * k - 1];
}

bool rows_primitive(const IntMatrix& h) {
  for (std::size_t i = 0; i < h.rows(); ++i) {
    Integer g(0);
    for (std::size_t j = 0; j < h.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), h(i, j).get_mpz_t());
    if (g != 1) return false;
  }
  return true;
}

}  // namespace

DeltaResult oracle_delta_m(const UnimodularLattice& lat, const Scenario& sc, unsigned hnf_entry_bound) {
  const std::size_t n = lat.dimension();
  const unsigned long l = lcm_upto(n);
  DeltaResult best = full_space_result(n, l);
  const auto gens = generators_in_lattice_coords(lat, sc);
  for (std::size_t k = 1; k < n; ++k) {
    // Cheap rejection first: ‖Λ_W‖² above an upper bound for q_best^{k/L}
    // cannot win; the exact comparison follows.
    // D·G is integral, so det(h (D·G) h^T) = D^k ‖Λ_h‖² is an integer.
    Integer den(1);
    for (const auto& x : lat.gram().data()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> gi(n * n);
    for (std::size_t i = 0; i < n * n; ++i) gi[i] = Integer(lat.gram().data()[i] * den);
    const Rational den_k = Rational(pow(den, static_cast<unsigned long>(k)));
    Rational cap = root_upper_bound(best.delta_sq_pow, k, l);
    Rational scaled_cap = cap * den_k;
    std::vector<Integer> hg(k * n), m(k * k);
    for_each_bounded_hnf(k, n, hnf_entry_bound, [&](const IntMatrix& h) {
      if (!rows_primitive(h)) return;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < n; ++c) {
          Integer acc(0);
          for (std::size_t t = 0; t < n; ++t)
            if (h(i, t) != 0) acc += h(i, t) * gi[t * n + c];
          hg[i * n + c] = std::move(acc);
        }
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          Integer acc(0);
          for (std::size_t t = 0; t < n; ++t)
            if (h(j, t) != 0) acc += hg[i * n + t] * h(j, t);
          m[i * k + j] = std::move(acc);
        }
      const Integer det = bareiss_det(m, k);
      if (det > scaled_cap) return;
      const Rational cov = Rational(det) / den_k;
      const Rational q = normalized_covolume_pow(cov, k, l);
      if (q > best.delta_sq_pow) return;
      if (saturate(h) != h) return;
      const RationalSubspace w = RationalSubspace::from_generators(h);
      if (!is_m_stable(w, gens)) return;
      if (delta_precedes(q, w, best.delta_sq_pow, best.witness)) {
        best.delta_sq_pow = q;
        best.witness = w;
        best.witness_covolume_sq = cov;
        cap = root_upper_bound(best.delta_sq_pow, k, l);
        scaled_cap = cap * den_k;
      }
    });
  }
  best.delta_float = delta_from_pow(best.delta_sq_pow, l);
  return best;
}

}  // namespace nondiv

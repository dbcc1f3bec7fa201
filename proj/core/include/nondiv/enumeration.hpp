#pragma once

#include <cstddef>
#include <vector>

#include "nondiv/lattice_space.hpp"

namespace nondiv {

inline constexpr std::size_t kDefaultVectorBudget = 1'000'000;

struct ShortVector {
  IntVector coords;  ///< integer coordinates w.r.t. the basis the Gram matrix describes
  Rational norm_sq;
};

struct GramReduction {
  RatMatrix gram;       ///< T^T G T
  IntMatrix transform;  ///< columns are the reduced basis in the input coordinates
};

/// Exact rational LLL (delta = 3/4) acting on a positive definite Gram matrix.
GramReduction lll_reduce_gram(const RatMatrix& gram);

/// All nonzero x with x^T G x <= bound_sq, one of each ±x pair, with the first
/// nonzero coordinate positive, sorted by (norm, coordinates).
/// Throws BudgetExceeded when more than `budget` vectors qualify.
std::vector<ShortVector> short_vectors_gram(const RatMatrix& gram, const Rational& bound_sq,
                                            std::size_t budget = kDefaultVectorBudget);

std::vector<ShortVector> short_vectors(const UnimodularLattice& lat, const Rational& bound_sq,
                                       std::size_t budget = kDefaultVectorBudget);

Rational shortest_vector_sq_gram(const RatMatrix& gram);

/// λ₁(Λ)², exact. Bounded below on a set of lattices iff the set is relatively compact.
Rational shortest_vector_sq(const UnimodularLattice& lat);

/// q(W) = ‖Λ_W‖^{2L/dim W} with L = lcm(1..N): root-free comparison key for
/// ‖Λ_W‖^{1/dim W} across dimensions.
Rational normalized_covolume_pow(const Rational& covolume_sq, std::size_t dim, unsigned long l);

struct DeltaResult {
  Rational delta_sq_pow;  ///< q(W*) = δ_M^{2L}
  unsigned long exponent_l = 1;
  double delta_float = 1.0;
  RationalSubspace witness;
  Rational witness_covolume_sq;
  bool complete = true;
};

/// δ_M as a double from its exact power.
double delta_from_pow(const Rational& delta_sq_pow, unsigned long l);

/// Eligible proper nonzero subspaces with ‖Λ_W‖² <= cap, sorted canonically.
/// Throws BudgetExceeded.
std::vector<RationalSubspace> eligible_subspaces(const UnimodularLattice& lat, const Scenario& sc,
                                                 const Rational& covolume_sq_cap,
                                                 std::size_t budget = kDefaultVectorBudget);

/// Exact minimiser of ‖Λ_W‖^{1/dim W} over eligible W (R^N included).
/// Ties: smaller dimension, then canonical HNF order. On budget overflow the
/// result is an upper bound with complete = false.
DeltaResult delta_m(const UnimodularLattice& lat, const Scenario& sc, std::size_t budget = kDefaultVectorBudget);

/// Brute force over every saturated HNF basis with entries bounded by
/// `hnf_entry_bound`. Test oracle for delta_m.
DeltaResult oracle_delta_m(const UnimodularLattice& lat, const Scenario& sc, unsigned hnf_entry_bound);

/// True if (q, w) precedes the incumbent in the δ_M order.
bool delta_precedes(const Rational& q, const RationalSubspace& w, const Rational& best_q,
                    const RationalSubspace& best_w);

}  // namespace nondiv

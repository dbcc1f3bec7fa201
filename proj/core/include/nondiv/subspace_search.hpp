#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nondiv/enumeration.hpp"

namespace nondiv {

struct SubspaceCandidate {
  RationalSubspace subspace;
  Rational covolume_sq;
};

/// Complete search for eligible subspaces U ⊋ base (base = {0} when absent)
/// of small relative covolume ‖Λ_U‖/‖Λ_base‖.
///
/// Works in the projection of Λ orthogonal to the base: a relative dimension j
/// extension of quotient covolume c has j successive-minima vectors whose
/// squared lengths multiply to at most γ_j^j c² <= (4/3)^{j(j-1)/2} c², so
/// enumerating projected vectors up to that bound and taking M-closed spans
/// finds every such U.
class SubspaceSearch {
 public:
  SubspaceSearch(const UnimodularLattice& lat, const Scenario& sc, std::optional<RationalSubspace> base,
                 std::size_t budget);

  std::size_t base_dim() const noexcept { return base_dim_; }
  const Rational& base_covolume_sq() const noexcept { return base_covolume_sq_; }
  /// Largest relative dimension of a proper extension.
  std::size_t max_relative_dim() const noexcept;
  /// Squared shortest vector of the projected lattice.
  const Rational& projected_min_sq() const noexcept { return projected_min_sq_; }
  const std::vector<RatMatrix>& lattice_generators() const noexcept { return generators_; }

  /// Eligible proper U ⊋ base with dim U = base_dim + j and
  /// ‖Λ_U‖²/‖Λ_base‖² <= cap (< cap when `strict`). Canonically sorted.
  /// Throws BudgetExceeded.
  std::vector<SubspaceCandidate> extensions(std::size_t j, const Rational& quotient_cap_sq, bool strict) const;

 private:
  const UnimodularLattice& lat_;
  std::size_t n_;
  std::size_t base_dim_ = 0;
  IntMatrix base_rows_;
  IntMatrix complement_;  // rows, (n - d) x n
  RatMatrix projected_gram_;
  Rational projected_min_sq_;
  Rational base_covolume_sq_{1};
  std::vector<RatMatrix> generators_;
  std::size_t budget_;
};

}  // namespace nondiv

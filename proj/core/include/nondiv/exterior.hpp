#pragma once

#include <cstddef>
#include <vector>

#include "nondiv/lattice_space.hpp"

namespace nondiv {

/// v = v_1 ∧ ... ∧ v_k with independent rational v_i; L_v is their span.
class PureWedge {
 public:
  /// Throws DependentVectors.
  explicit PureWedge(std::vector<RatVector> vectors);

  std::size_t degree() const noexcept { return vectors_.size(); }
  const std::vector<RatVector>& vectors() const noexcept { return vectors_; }
  const Rational& sq_norm() const noexcept { return sq_norm_; }

  /// s·v, computed by scaling each spanning vector.
  PureWedge transformed(const TorusElement& s) const;

 private:
  std::vector<RatVector> vectors_;
  Rational sq_norm_;
};

struct ScalingRange {
  Rational min_factor;
  Rational max_factor;
};

/// Extreme factors by which s multiplies the norm of a degree-k pure wedge:
/// products of the k smallest / largest coordinate scalars.
/// Throws DegreeOutOfRange unless 1 <= k <= N.
ScalingRange wedge_scaling_range(const TorusElement& s, std::size_t k);

/// C_1(s) = max_k 1/min_factor(s, k), so ‖s v‖ >= ‖v‖ / C_1(s) for every pure wedge v.
Rational contraction_constant(const TorusElement& s);

}  // namespace nondiv

#include "nondiv/exterior.hpp"

#include <algorithm>
#include <string>

namespace nondiv {

PureWedge::PureWedge(std::vector<RatVector> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw DegreeOutOfRange("a pure wedge needs at least one vector");
  sq_norm_ = gram_det(vectors_);
}

PureWedge PureWedge::transformed(const TorusElement& s) const {
  const auto diag = s.coordinate_scalars();
  std::vector<RatVector> out = vectors_;
  for (auto& v : out) {
    if (v.size() != diag.size()) throw DimensionMismatch("wedge/torus dimension mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= diag[i];
  }
  return PureWedge(std::move(out));
}

ScalingRange wedge_scaling_range(const TorusElement& s, std::size_t k) {
  auto scalars = s.coordinate_scalars();
  const std::size_t n = scalars.size();
  if (k < 1 || k > n)
    throw DegreeOutOfRange("wedge degree " + std::to_string(k) + " outside 1.." + std::to_string(n));
  std::sort(scalars.begin(), scalars.end());
  ScalingRange r{Rational(1), Rational(1)};
  for (std::size_t i = 0; i < k; ++i) {
    r.min_factor *= scalars[i];
    r.max_factor *= scalars[n - 1 - i];
  }
  return r;
}

Rational contraction_constant(const TorusElement& s) {
  Rational c(1);
  for (std::size_t k = 1; k <= s.dimension(); ++k) c = std::max(c, Rational(1 / wedge_scaling_range(s, k).min_factor));
  return c;
}

}  // namespace nondiv

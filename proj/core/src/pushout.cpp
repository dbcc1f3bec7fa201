#include "nondiv/pushout.hpp"

#include <algorithm>
#include <cmath>


namespace nondiv {

namespace {

// Rows c with c * a = 0, as a rational basis.
std::vector<RatVector> left_kernel(const RatMatrix& a) {
  IntMatrix at(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    RatVector col = a.col(j);
    bool zero = std::all_of(col.begin(), col.end(), [](const Rational& x) { return x == 0; });
    IntVector row = zero ? IntVector(a.rows(), Integer(0)) : primitive_integer_vector(col);
    at.set_row(j, row);
  }
  const IntMatrix k = integer_kernel(at, a.rows());
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < k.rows(); ++i) out.push_back(to_rational(k.row(i)));
  return out;
}

RatMatrix block_columns(const RatMatrix& rows, const std::vector<Block>& blocks, const std::vector<std::size_t>& which) {
  std::size_t width = 0;
  for (auto b : which) width += blocks[b].size();
  RatMatrix out(rows.rows(), width);
  std::size_t c = 0;
  for (auto b : which)
    for (std::size_t j = blocks[b].begin; j < blocks[b].end; ++j, ++c)
      for (std::size_t i = 0; i < rows.rows(); ++i) out(i, c) = rows(i, j);
  return out;
}

// Cyclic Jacobi; only used to aim the exact certificate.
double max_eigenvalue_estimate(const RatMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = to_double(a(i, j));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m[p * n + q] * m[p * n + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (m[q * n + q] - m[p * n + p]) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = m[k * n + p], akq = m[k * n + q];
          m[k * n + p] = c * akp - s * akq;
          m[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = m[p * n + k], aqk = m[q * n + k];
          m[p * n + k] = c * apk - s * aqk;
          m[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  double best = 0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, m[i * n + i]);
  return best;
}

RatMatrix shifted(const RatMatrix& a, const Rational& u) {
  RatMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = (i == j ? u : Rational(0)) - a(i, j);
  return m;
}

bool positive_semidefinite(const RatMatrix& m) {
  const std::size_t n = m.rows();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    RatMatrix sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = m(idx[i], idx[j]);
    if (determinant(sub) < 0) return false;
  }
  return true;
}

bool positive_definite(const RatMatrix& m) {
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    RatMatrix lead(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = m(i, j);
    if (determinant(lead) <= 0) return false;
  }
  return true;
}

Rational dyadic_ceil(double x, int bits) {
  const double scaled = std::ceil(std::ldexp(x, bits));
  Rational r(Integer(scaled), Integer(1));
  r /= Rational(pow(Integer(2), static_cast<unsigned long>(bits)));
  r.canonicalize();
  return r;
}

Rational growth_pow_for(const ExpansionCertificate& e, std::size_t n, unsigned long l) {
  return pow(std::min(e.achieved_c2_sq, Rational(4)), static_cast<long>(l / n));
}

}  // namespace

void PushoutConfig::validate() const {
  if (lambda_multiplier <= 1) throw InvalidScenario("lambda_multiplier must exceed 1");
  if (eta0_override && (*eta0_override <= 0 || *eta0_override >= 1))
    throw InvalidScenario("eta0 must lie in (0, 1)");
}

std::vector<std::size_t> select_index_set(const RatMatrix& real_basis, const Scenario& sc) {
  const auto& blocks = sc.blocks();
  std::vector<std::size_t> chosen;
  // Current kernel, as rows in ambient coordinates.
  RatMatrix cur = real_basis;
  while (cur.rows() > 0) {
    bool advanced = false;
    for (std::size_t b = 0; b < blocks.size() && !advanced; ++b) {
      if (std::find(chosen.begin(), chosen.end(), b) != chosen.end()) continue;
      const RatMatrix proj = block_columns(cur, blocks, {b});
      if (rank(proj) == 0) continue;
      chosen.push_back(b);
      const auto ker = left_kernel(proj);
      RatMatrix next(ker.size(), cur.cols());
      for (std::size_t i = 0; i < ker.size(); ++i)
        for (std::size_t k = 0; k < cur.rows(); ++k)
          if (ker[i][k] != 0)
            for (std::size_t j = 0; j < cur.cols(); ++j) next(i, j) += ker[i][k] * cur(k, j);
      cur = std::move(next);
      advanced = true;
    }
    if (!advanced) throw InternalInvariantViolation("kernel chain stalled");
  }
  std::sort(chosen.begin(), chosen.end());
  std::size_t width = 0;
  for (auto b : chosen) width += blocks[b].size();
  if (width != real_basis.rows() || rank(block_columns(real_basis, blocks, chosen)) != width)
    throw InternalInvariantViolation("projection onto V_I is not a bijection");
  return chosen;
}

std::vector<std::size_t> select_index_set(const RationalSubspace& w, const UnimodularLattice& lat,
                                          const Scenario& sc) {
  return select_index_set(w.real_basis(lat), sc);
}

Rational psd_max_eigenvalue_upper(const RatMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  bool zero = true;
  for (const auto& x : a.data()) zero = zero && x == 0;
  if (zero) return Rational(0);
  const double est = max_eigenvalue_estimate(a);
  const double tol = 1e-9 * std::max(1.0, std::abs(est));
  for (long q = 1; q <= 64; ++q) {
    const double num = std::round(est * static_cast<double>(q));
    if (std::abs(num / static_cast<double>(q) - est) > tol) continue;
    const Rational u = make_rational(Integer(num), Integer(q));
    if (positive_semidefinite(shifted(a, u))) return u;
  }
  double slack = tol + 1e-12;
  for (int tries = 0; tries < 64; ++tries, slack *= 4) {
    const Rational u = dyadic_ceil(est + slack, 40);
    if (positive_definite(shifted(a, u))) return u;
  }
  throw InternalInvariantViolation("could not certify an eigenvalue bound");
}

ExpansionCertificate expansion_element(const RatMatrix& real_basis, const Scenario& sc, const PushoutConfig& cfg) {
  cfg.validate();
  const std::size_t n = sc.dimension();
  const std::size_t d = real_basis.rows();
  if (d >= n) throw WholeSpace();
  const auto index_set = select_index_set(real_basis, sc);
  std::vector<std::size_t> rest;
  for (std::size_t b = 0; b < sc.blocks().size(); ++b)
    if (!std::binary_search(index_set.begin(), index_set.end(), b)) rest.push_back(b);

  // W is the graph of φ: v ↦ v Φ over V_I.
  const RatMatrix p = block_columns(real_basis, sc.blocks(), index_set);
  const RatMatrix q = block_columns(real_basis, sc.blocks(), rest);
  const RatMatrix phi = multiply(inverse(p), q);
  const Rational c_w_sq = 1 + psd_max_eigenvalue_upper(multiply(phi, transpose(phi)));

  const Rational target = cfg.lambda_multiplier * c_w_sq;
  const long free_dim = static_cast<long>(n - d);
  Rational rho(2);
  while (pow(rho, free_dim) < target) rho *= 2;
  const Rational lambda = pow(rho, free_dim);
  const Rational mu = pow(rho, -static_cast<long>(d));

  std::vector<Rational> scalars(sc.blocks().size(), mu);
  for (auto b : index_set) scalars[b] = lambda;
  TorusElement s(scalars, sc.block_dims());
  const Rational c1 = contraction_constant(s);
  const Rational ratio = lambda / c_w_sq;
  return ExpansionCertificate{std::move(s), index_set, c_w_sq, rho, lambda, mu, c1, ratio * ratio};
}

ExpansionCertificate expansion_element(const RationalSubspace& w, const UnimodularLattice& lat, const Scenario& sc,
                                       const PushoutConfig& cfg) {
  if (w.is_full()) throw WholeSpace();
  return expansion_element(w.real_basis(lat), sc, cfg);
}

Rational working_constant_sq(const ExpansionCertificate& e) {
  return e.achieved_c1 * e.achieved_c1 * std::min(e.achieved_c2_sq, Rational(4));
}

Rational eta0_pow(const PushoutConfig& cfg, std::size_t n, const Rational& c1c2_sq) {
  const unsigned long l = lcm_upto(n);
  if (cfg.eta0_override) return pow(*cfg.eta0_override, static_cast<long>(2 * l));
  return pow(c1c2_sq, -static_cast<long>(n * l));
}

std::vector<SubspaceCandidate> guard_violations(const UnimodularLattice& lat, const Scenario& sc,
                                                const RationalSubspace& w, const Rational& c1c2_sq,
                                                std::size_t budget) {
  std::vector<SubspaceCandidate> out;
  if (w.is_full()) return out;
  try {
    const SubspaceSearch search(lat, sc, w, budget);
    for (std::size_t j = 1; j <= search.max_relative_dim(); ++j) {
      auto found = search.extensions(j, c1c2_sq, true);
      out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
    }
    if (Rational(1) < c1c2_sq * search.base_covolume_sq())
      out.push_back({RationalSubspace::full(lat.dimension()), Rational(1)});
  } catch (const BudgetExceeded& e) {
    throw IncompleteSearch(std::string("guard search: ") + e.what());
  }
  return out;
}

ProtectResult protect_from(const UnimodularLattice& lat, const Scenario& sc, const DeltaResult& delta,
                           const Rational& c1c2_sq, std::size_t budget) {
  if (c1c2_sq <= 1) throw InternalInvariantViolation("working constant must exceed 1");
  if (delta.witness.is_full()) throw NotBelowEta0("delta_M witness is the whole space");
  ProtectResult r;
  r.chain.push_back(delta.witness);
  r.chain_covolume_sq.push_back(delta.witness_covolume_sq);
  const std::size_t n = lat.dimension();
  while (r.chain.size() <= n) {
    auto found = guard_violations(lat, sc, r.chain.back(), c1c2_sq, budget);
    if (found.empty()) return r;
    // Smallest dimension, then smallest covolume, then canonical order.
    const auto best = std::min_element(found.begin(), found.end(), [](const auto& a, const auto& b) {
      if (a.subspace.dim() != b.subspace.dim()) return a.subspace.dim() < b.subspace.dim();
      if (a.covolume_sq != b.covolume_sq) return a.covolume_sq < b.covolume_sq;
      return canonical_order(a.subspace, b.subspace) < 0;
    });
    if (best->subspace.is_full()) {
      r.reached_whole_space = true;
      return r;
    }
    r.chain.push_back(best->subspace);
    r.chain_covolume_sq.push_back(best->covolume_sq);
  }
  throw InternalInvariantViolation("protection loop exceeded N iterations");
}

std::optional<ProtectResult> protect(const UnimodularLattice& lat, const Scenario& sc, const PushoutConfig& cfg,
                                     const Rational& c1c2_sq) {
  cfg.validate();
  const DeltaResult delta = delta_m(lat, sc, cfg.vector_budget);
  if (!delta.complete) throw IncompleteSearch("delta_M search exceeded the vector budget");
  if (delta.witness.is_full() || delta.delta_sq_pow >= eta0_pow(cfg, lat.dimension(), c1c2_sq)) return std::nullopt;
  return protect_from(lat, sc, delta, c1c2_sq, cfg.vector_budget);
}

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::I: return "I";
    case CaseTag::II: return "II";
    default: return "none";
  }
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedEta0: return "ReachedEta0";
    case Termination::MaxSteps: return "MaxSteps";
    default: return "Incomplete";
  }
}

struct WorkingConstant {
  Rational k_sq;
  ProtectResult protection;
  ExpansionCertificate expansion;
  bool consistent;
};

// The guard needs C₁C₂ of the element built from its own output; iterate
// until the constant covers what the expansion needs.
WorkingConstant settle_working_constant(const UnimodularLattice& lat, const Scenario& sc, const PushoutConfig& cfg,
                                        const DeltaResult& before) {
  Rational k_sq = working_constant_sq(expansion_element(before.witness, lat, sc, cfg));
  for (std::size_t round = 0;; ++round) {
    ProtectResult prot = protect_from(lat, sc, before, k_sq, cfg.vector_budget);
    ExpansionCertificate exp = expansion_element(prot.w_infinity(), lat, sc, cfg);
    const Rational need = working_constant_sq(exp);
    if (need <= k_sq || round > lat.dimension())
      return WorkingConstant{need <= k_sq ? k_sq : need, std::move(prot), std::move(exp), need <= k_sq};
    k_sq = need;
  }
}

std::pair<UnimodularLattice, StepRecord> pushout_step(const UnimodularLattice& lat, const Scenario& sc,
                                                      const PushoutConfig& cfg, const DeltaResult& before,
                                                      const std::optional<Rational>& eta0_pow_fixed) {
  cfg.validate();
  const std::size_t n = lat.dimension();
  if (!before.complete) throw IncompleteSearch("delta_M search exceeded the vector budget");
  if (before.witness.is_full()) throw NotBelowEta0("delta_M = 1");
  std::optional<Rational> fixed = eta0_pow_fixed;
  if (!fixed && cfg.eta0_override) fixed = eta0_pow(cfg, n, Rational(2));
  if (fixed && before.delta_sq_pow >= *fixed) throw NotBelowEta0("delta_M >= eta0");
  if (!fixed && before.delta_sq_pow >= eta0_pow(cfg, n, working_constant_sq(expansion_element(before.witness, lat, sc, cfg))))
    throw NotBelowEta0("delta_M >= eta0");

  WorkingConstant wc = settle_working_constant(lat, sc, cfg, before);
  const Rational k_sq = wc.k_sq;
  std::optional<ProtectResult> prot(std::move(wc.protection));
  std::optional<ExpansionCertificate> exp(std::move(wc.expansion));
  const bool consistent = wc.consistent;
  const Rational eta_pow = fixed ? *fixed : eta0_pow(cfg, n, k_sq);
  if (before.delta_sq_pow >= eta_pow) throw NotBelowEta0("delta_M >= eta0");

  UnimodularLattice next = apply_torus(exp->s, lat);
  DeltaResult after = delta_m(next, sc, cfg.vector_budget);
  if (!after.complete) throw IncompleteSearch("delta_M search exceeded the vector budget");

  const Rational growth = growth_pow_for(*exp, n, before.exponent_l);
  const Rational ratio = after.delta_sq_pow / before.delta_sq_pow;
  const bool certified = consistent && !prot->reached_whole_space;
  const bool holds = ratio >= growth;
  if (certified && !holds) throw InternalInvariantViolation("certified push-out step missed its growth bound");
  const CaseTag tag = prot->w_infinity().contains(after.witness) ? CaseTag::I : CaseTag::II;

  StepRecord rec{std::move(*prot), std::move(*exp), k_sq, before, std::move(after), growth, ratio,
                 certified, holds, tag};
  return {std::move(next), std::move(rec)};
}

std::pair<UnimodularLattice, StepRecord> pushout_step(const UnimodularLattice& lat, const Scenario& sc,
                                                      const PushoutConfig& cfg) {
  const DeltaResult before = delta_m(lat, sc, cfg.vector_budget);
  return pushout_step(lat, sc, cfg, before, std::nullopt);
}

PushoutCertificate drive(const UnimodularLattice& lat, const Scenario& sc, const PushoutConfig& cfg) {
  cfg.validate();
  const std::size_t n = lat.dimension();
  const unsigned long l = lcm_upto(n);
  DeltaResult initial = delta_m(lat, sc, cfg.vector_budget);
  PushoutCertificate cert{.steps = {},
                          .terminated = Termination::ReachedEta0,
                          .exponent_l = l,
                          .eta0_pow = Rational(0),
                          .eta0_float = 0.0,
                          .initial = initial,
                          .final_delta = initial,
                          .composed_scalars = std::vector<Rational>(sc.blocks().size(), Rational(1)),
                          .final_basis = lat.basis(),
                          .mahler_proxy = Rational(0),
                          .step_bound = std::nullopt,
                          .incomplete_reason = {}};

  auto finish = [&](const UnimodularLattice& cur) {
    cert.eta0_float = delta_from_pow(cert.eta0_pow, l);
    cert.final_basis = cur.basis();
    cert.mahler_proxy = shortest_vector_sq(cur);
    if (!cert.steps.empty()) {
      Rational g_min = cert.steps.front().growth_pow;
      for (const auto& s : cert.steps) g_min = std::min(g_min, s.growth_pow);
      const double x = (log_abs(cert.eta0_pow) - log_abs(initial.delta_sq_pow)) / log_abs(g_min);
      cert.step_bound = static_cast<unsigned long>(std::max(0.0, std::ceil(x)));
    }
    return cert;
  };

  if (!initial.complete) {
    cert.terminated = Termination::Incomplete;
    cert.incomplete_reason = "delta_M search exceeded the vector budget";
    return finish(lat);
  }
  std::optional<Rational> fixed;
  if (cfg.eta0_override) {
    fixed = eta0_pow(cfg, n, Rational(2));
  } else if (initial.witness.is_full()) {
    fixed = Rational(0);
  } else {
    try {
      // η₀ from the first step's constants. Settling only raises K², hence
      // only lowers η₀: a lattice that clears the unsettled value is done.
      const Rational first =
          eta0_pow(cfg, n, working_constant_sq(expansion_element(initial.witness, lat, sc, cfg)));
      fixed = initial.delta_sq_pow >= first ? first
                                            : eta0_pow(cfg, n, settle_working_constant(lat, sc, cfg, initial).k_sq);
    } catch (const IncompleteSearch& e) {
      cert.terminated = Termination::Incomplete;
      cert.incomplete_reason = e.what();
      return finish(lat);
    }
  }
  cert.eta0_pow = *fixed;

  UnimodularLattice cur = lat;
  DeltaResult delta = initial;
  while (delta.delta_sq_pow < cert.eta0_pow) {
    if (cert.steps.size() >= cfg.max_steps) {
      cert.terminated = Termination::MaxSteps;
      return finish(cur);
    }
    try {
      auto [next, rec] = pushout_step(cur, sc, cfg, delta, fixed);
      for (std::size_t b = 0; b < cert.composed_scalars.size(); ++b)
        cert.composed_scalars[b] *= rec.expansion.s.scalars()[b];
      delta = rec.delta_after;
      cert.final_delta = delta;
      cert.steps.push_back(std::move(rec));
      cur = std::move(next);
    } catch (const IncompleteSearch& e) {
      cert.terminated = Termination::Incomplete;
      cert.incomplete_reason = e.what();
      return finish(cur);
    }
  }
  cert.terminated = Termination::ReachedEta0;
  return finish(cur);
}

}  // namespace nondiv

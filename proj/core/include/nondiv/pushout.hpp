#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nondiv/subspace_search.hpp"
#include "nondiv/exterior.hpp"

namespace nondiv {

struct PushoutConfig {
  Rational lambda_multiplier{2};
  std::optional<Rational> eta0_override;
  std::size_t max_steps = 64;
  std::size_t vector_budget = kDefaultVectorBudget;

  /// Throws InvalidScenario on lambda_multiplier <= 1 or eta0 outside (0, 1).
  void validate() const;
};

struct ExpansionCertificate {
  TorusElement s;
  std::vector<std::size_t> index_set;  ///< block indices, 0-based, ascending
  Rational c_w_sq;                     ///< certified upper bound for C_W²
  Rational rho;
  Rational lambda;  ///< ρ^{N - d_I}
  Rational mu;      ///< ρ^{-d_I}
  Rational achieved_c1;
  Rational achieved_c2_sq;  ///< (λ / C_W²)²
};

/// Kernel-chain choice of blocks I with π_I|_W a bijection onto V_I. `real_basis`
/// holds a basis of W in ambient coordinates, one vector per row.
/// Throws InternalInvariantViolation if the chain does not end in a bijection.
std::vector<std::size_t> select_index_set(const RatMatrix& real_basis, const Scenario& sc);
std::vector<std::size_t> select_index_set(const RationalSubspace& w, const UnimodularLattice& lat,
                                          const Scenario& sc);

/// Certified rational upper bound for the largest eigenvalue of a symmetric
/// positive semidefinite matrix; exact whenever a small-denominator rational
/// eigenvalue is the maximum.
Rational psd_max_eigenvalue_upper(const RatMatrix& a);

/// Torus element expanding W: λ on V_I, μ elsewhere. Throws WholeSpace.
ExpansionCertificate expansion_element(const RatMatrix& real_basis, const Scenario& sc, const PushoutConfig& cfg);
ExpansionCertificate expansion_element(const RationalSubspace& w, const UnimodularLattice& lat, const Scenario& sc,
                                       const PushoutConfig& cfg);

/// (C₁C₂)² for an expansion, with C₂ capped at 2.
Rational working_constant_sq(const ExpansionCertificate& e);

/// η₀^{2L}: the override, or (C₁C₂)^{-N} from the working constant.
Rational eta0_pow(const PushoutConfig& cfg, std::size_t n, const Rational& c1c2_sq);

struct ProtectResult {
  std::vector<RationalSubspace> chain;  ///< W₁ ⊊ W₂ ⊊ ... ⊊ W_l = W∞
  std::vector<Rational> chain_covolume_sq;
  /// The loop wanted to extend to R^N; W∞ is the last proper subspace and
  /// the guard does not cover the full space.
  bool reached_whole_space = false;

  const RationalSubspace& w_infinity() const { return chain.back(); }
  std::size_t iterations() const { return chain.size(); }
};

/// Protection loop from the δ_M witness. nullopt means NotNeeded
/// (δ_M >= η₀). Throws IncompleteSearch when the vector budget runs out.
std::optional<ProtectResult> protect(const UnimodularLattice& lat, const Scenario& sc, const PushoutConfig& cfg,
                                     const Rational& c1c2_sq);

/// Same loop from a known δ_M result, ignoring η₀.
ProtectResult protect_from(const UnimodularLattice& lat, const Scenario& sc, const DeltaResult& delta,
                           const Rational& c1c2_sq, std::size_t budget);

/// Eligible U ⊋ w with ‖Λ_U‖² < c1c2_sq·‖Λ_w‖², U = R^N included.
std::vector<SubspaceCandidate> guard_violations(const UnimodularLattice& lat, const Scenario& sc,
                                                const RationalSubspace& w, const Rational& c1c2_sq,
                                                std::size_t budget);

enum class CaseTag { None, I, II };
const char* to_string(CaseTag tag);

struct StepRecord {
  ProtectResult protection;
  ExpansionCertificate expansion;
  Rational c1c2_sq;
  DeltaResult delta_before;
  DeltaResult delta_after;
  Rational growth_pow;  ///< G^{2L} = min(c2², 4)^{L/N}
  Rational ratio_pow;   ///< exact (δ_after/δ_before)^{2L}
  bool certified = false;
  bool growth_holds = false;
  CaseTag case_tag = CaseTag::None;
};

/// One push-out step. Throws NotBelowEta0, IncompleteSearch, and
/// InternalInvariantViolation if a certified step misses its growth bound.
std::pair<UnimodularLattice, StepRecord> pushout_step(const UnimodularLattice& lat, const Scenario& sc,
                                                      const PushoutConfig& cfg);

/// As pushout_step with a known δ_M and a fixed η₀^{2L} (nullopt: derive it).
std::pair<UnimodularLattice, StepRecord> pushout_step(const UnimodularLattice& lat, const Scenario& sc,
                                                      const PushoutConfig& cfg, const DeltaResult& before,
                                                      const std::optional<Rational>& eta0_pow_fixed);

enum class Termination { ReachedEta0, MaxSteps, Incomplete };
const char* to_string(Termination t);

struct PushoutCertificate {
  std::vector<StepRecord> steps;
  Termination terminated = Termination::ReachedEta0;
  unsigned long exponent_l = 1;
  Rational eta0_pow;  ///< η₀^{2L}
  double eta0_float = 0.0;
  DeltaResult initial;
  DeltaResult final_delta;
  std::vector<Rational> composed_scalars;  ///< s* per block
  RatMatrix final_basis;
  Rational mahler_proxy;  ///< λ₁(s*·Λ)²
  /// ceil(log(η₀/δ₀)/log G_min) over the trace; nullopt without steps.
  std::optional<unsigned long> step_bound;
  std::string incomplete_reason;
};

PushoutCertificate drive(const UnimodularLattice& lat, const Scenario& sc, const PushoutConfig& cfg);

}  // namespace nondiv

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "nondiv/io.hpp"
#include "nondiv/pushout.hpp"
#include "oracles.hpp"

using namespace nondiv;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(NONDIV_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RatMatrix rows(std::initializer_list<std::initializer_list<Rational>> r) { return RatMatrix(r); }

UnimodularLattice sl4_pushed(const Rational& t) {
  return UnimodularLattice(gen::diag({t * t * t, 1 / t, 1 / t, 1 / t}));
}

PushoutConfig half_eta() {
  PushoutConfig cfg;
  cfg.eta0_override = Rational(1, 2);
  return cfg;
}

}  // namespace

TEST(IndexSet, KernelChainExamples) {
  const Scenario sl4 = gen::sl4_scenario();
  EXPECT_EQ(select_index_set(rows({{1, 0, 0, 0}}), sl4), std::vector<std::size_t>{0});
  EXPECT_EQ(select_index_set(rows({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}), sl4), std::vector<std::size_t>{1});
  EXPECT_EQ(select_index_set(rows({{1, 1}}), Scenario::diagonal(2)), std::vector<std::size_t>{0});
  // span(e1, e2 + e3): π_1 kills e2 + e3, which block 2 then sees.
  EXPECT_EQ(select_index_set(rows({{1, 0, 0}, {0, 1, 1}}), Scenario::diagonal(3)), (std::vector<std::size_t>{0, 1}));
  // A line inside the 3-dimensional block cannot be a graph over it.
  EXPECT_THROW(select_index_set(rows({{0, 1, 0, 0}}), sl4), InternalInvariantViolation);
}

TEST(Expansion, DiagonalLineInThePlane) {
  const auto e = expansion_element(rows({{1, 1}}), Scenario::diagonal(2), PushoutConfig{});
  EXPECT_EQ(e.c_w_sq, 2);
  EXPECT_EQ(e.lambda, 4);
  EXPECT_EQ(e.s.scalars(), (std::vector<Rational>{Rational(4), Rational(1, 4)}));
  EXPECT_EQ(e.achieved_c2_sq, 4);
  // ‖s(1,1)‖² / ‖(1,1)‖² = (16 + 1/16) / 2
  EXPECT_GE((Rational(16) + Rational(1, 16)) / 2, e.achieved_c2_sq);
}

TEST(Expansion, FirstBlockOfSl4) {
  const auto e = expansion_element(rows({{1, 0, 0, 0}}), gen::sl4_scenario(), PushoutConfig{});
  EXPECT_EQ(e.c_w_sq, 1);
  EXPECT_EQ(e.rho, 2);
  EXPECT_EQ(e.lambda, 8);
  EXPECT_EQ(e.s.scalars(), (std::vector<Rational>{Rational(8), Rational(1, 2)}));
  EXPECT_THROW(expansion_element(RationalSubspace::full(4), UnimodularLattice::standard(4), gen::sl4_scenario(),
                                 PushoutConfig{}),
               WholeSpace);
}

TEST(Expansion, CoordinateSubspacesHaveUnitGraphConstant) {
  const auto e = expansion_element(rows({{1, 0, 0}, {0, 0, 1}}), Scenario::diagonal(3), PushoutConfig{});
  EXPECT_EQ(e.c_w_sq, 1);
}

TEST(Expansion, TwinGraphConstantIsOnePlusSlopeSquared) {
  const Scenario sc = gen::twin_sl2_scenario();
  for (const Rational c : {Rational(1), Rational(2), Rational(-3, 2)}) {
    const RatMatrix w = rows({{0, 1, 0, c, 0}, {0, 0, 1, 0, c}});
    const auto e = expansion_element(w, sc, PushoutConfig{});
    EXPECT_EQ(e.c_w_sq, 1 + c * c) << to_string(c);
    EXPECT_EQ(e.index_set, std::vector<std::size_t>{1});
  }
}

TEST(Expansion, EigenvalueBoundIsCertified) {
  EXPECT_EQ(psd_max_eigenvalue_upper(rows({{2, 1}, {1, 2}})), 3);
  EXPECT_EQ(psd_max_eigenvalue_upper(rows({{1, 0}, {0, 0}})), 1);
  // Eigenvalues (3 ± √5)/2: no rational maximum.
  const RatMatrix a = rows({{2, 1}, {1, 1}});
  const Rational u = psd_max_eigenvalue_upper(a);
  EXPECT_GT(oracle::det(rows({{u - 2, -1}, {-1, u - 1}})), 0);
  EXPECT_GT(u - 2, 0);
  EXPECT_LT(u, Rational(2618034, 1000000));
}

TEST(Protect, NotNeededAboveEta0) {
  EXPECT_FALSE(protect(UnimodularLattice::standard(4), gen::sl4_scenario(), half_eta(), Rational(64)));
}

TEST(Protect, PushedSl4ProtectsFirstBlock) {
  const auto r = protect(sl4_pushed(Rational(1, 2)), gen::sl4_scenario(), half_eta(), Rational(64));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->w_infinity(), RationalSubspace::coordinate(4, {0}));
  // V_2 has covolume² 64: the guard holds exactly there.
  EXPECT_EQ(sum_lattice_covolume_sq(sl4_pushed(Rational(1, 2)), RationalSubspace::coordinate(4, {1, 2, 3}),
                                    r->w_infinity()),
            1);
}

TEST(Protect, AdversarialChainGrowsTwice) {
  const auto lat = parse_lattice(slurp("adversarial_n3.json"));
  const Scenario sc = Scenario::diagonal(3);
  const Rational k_sq(64);
  const auto r = protect(lat, sc, PushoutConfig{}, k_sq);
  ASSERT_TRUE(r);
  ASSERT_EQ(r->iterations(), 2u);
  EXPECT_EQ(r->w_infinity(), RationalSubspace::coordinate(3, {0, 1}));
  Rational bound = r->chain_covolume_sq.front();
  for (std::size_t i = 0; i < r->iterations(); ++i) {
    EXPECT_LE(r->chain_covolume_sq[i], bound);
    bound *= k_sq;
  }
  EXPECT_LT(bound, 1);
}

TEST(Step, PushedSl4JumpsToOne) {
  const auto [next, rec] = pushout_step(sl4_pushed(Rational(1, 2)), gen::sl4_scenario(), half_eta());
  EXPECT_EQ(rec.delta_before.delta_float, 0.125);
  EXPECT_EQ(rec.delta_after.delta_sq_pow, 1);
  EXPECT_EQ(next.basis(), RatMatrix::identity(4));
  EXPECT_EQ(rec.expansion.s.scalars(), (std::vector<Rational>{Rational(8), Rational(1, 2)}));
  EXPECT_TRUE(rec.growth_holds);
  EXPECT_THROW(pushout_step(UnimodularLattice::standard(4), gen::sl4_scenario(), half_eta()), NotBelowEta0);
}

TEST(Step, CaseTwoAboveTheDefaultEta0IsUncertified) {
  // (2/3, 3/2) pushed by (2, 1/2) lands on (4/3, 3/4): the witness moves to e2.
  PushoutConfig cfg;
  cfg.eta0_override = Rational(9, 10);
  const UnimodularLattice lat(gen::diag({Rational(2, 3), Rational(3, 2)}));
  const auto [next, rec] = pushout_step(lat, Scenario::diagonal(2), cfg);
  EXPECT_EQ(rec.case_tag, CaseTag::II);
  EXPECT_EQ(rec.delta_after.witness, RationalSubspace::coordinate(2, {1}));
  EXPECT_TRUE(rec.protection.reached_whole_space);
  EXPECT_FALSE(rec.certified);
  EXPECT_FALSE(rec.growth_holds);
  // ((3/4) / (2/3))^{2L} with L = 2.
  EXPECT_EQ(rec.ratio_pow, Rational(6561, 4096));
}

TEST(Drive, StandardLatticeNeedsNoSteps) {
  const auto cert = drive(UnimodularLattice::standard(4), gen::sl4_scenario(), half_eta());
  EXPECT_EQ(cert.terminated, Termination::ReachedEta0);
  EXPECT_TRUE(cert.steps.empty());
}

TEST(Drive, SqueezedPlaneFollowsTheClosedForm) {
  // diag(ε, 1/ε): every step doubles the short side; η₀ = 1/16 from K² = 16.
  const auto lat = UnimodularLattice(gen::diag({Rational(1, 1024), Rational(1024)}));
  const auto cert = drive(lat, Scenario::diagonal(2), PushoutConfig{});
  EXPECT_EQ(cert.terminated, Termination::ReachedEta0);
  EXPECT_EQ(cert.eta0_pow, Rational(1, 1 << 16));
  EXPECT_EQ(cert.steps.size(), 6u);
  ASSERT_TRUE(cert.step_bound);
  EXPECT_LE(cert.steps.size(), *cert.step_bound);
  EXPECT_EQ(cert.final_delta.delta_float, 1.0 / 16);
  for (const auto& s : cert.steps) {
    EXPECT_TRUE(s.certified);
    EXPECT_EQ(s.ratio_pow, 16);
  }
}

TEST(Drive, QuarterFixtureReachesEta0AndIsDeterministic) {
  const auto lat = sl4_pushed(Rational(1, 4));
  const auto a = drive(lat, gen::sl4_scenario(), half_eta());
  const auto b = drive(lat, gen::sl4_scenario(), half_eta());
  EXPECT_EQ(a.terminated, Termination::ReachedEta0);
  EXPECT_GE(a.final_delta.delta_sq_pow, a.eta0_pow);
  EXPECT_EQ(certificate_to_json(a, gen::sl4_scenario()), certificate_to_json(b, gen::sl4_scenario()));
  // s* applied in one go lands on the same lattice.
  const TorusElement s_star(a.composed_scalars, {1, 3});
  EXPECT_EQ(apply_torus(s_star, lat).basis(), a.final_basis);
}

TEST(Drive, MaxStepsTerminates) {
  PushoutConfig cfg = half_eta();
  cfg.max_steps = 0;
  const auto cert = drive(sl4_pushed(Rational(1, 2)), gen::sl4_scenario(), cfg);
  EXPECT_EQ(cert.terminated, Termination::MaxSteps);
  EXPECT_TRUE(cert.steps.empty());
}

TEST(Config, Validation) {
  PushoutConfig cfg;
  cfg.lambda_multiplier = 1;
  EXPECT_THROW(cfg.validate(), InvalidScenario);
  cfg.lambda_multiplier = 2;
  cfg.eta0_override = Rational(1);
  EXPECT_THROW(cfg.validate(), InvalidScenario);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "drotep/dispatch.hpp"
#include "drotep/error.hpp"
#include "drotep/planner.hpp"
#include "drotep/recourse.hpp"
#include "fixtures.hpp"

using namespace drotep;
using drotep::test::load;

namespace {

const std::vector<double> kX0{0.0};
const std::vector<double> kX1{1.0};

NetDemandPoint point(std::vector<double> v, PointOrigin o = PointOrigin::kSample) {
  return NetDemandPoint{std::move(v), o};
}

double rel(double v, double tol) { return tol * (1.0 + std::abs(v)); }

void expect_state_invariants(const LongTermScenario& sc, const RecourseState& s) {
  ASSERT_EQ(s.probabilities.size(), s.pool.size());
  double total = 0.0;
  std::vector<double> mean(sc.support.lower.size(), 0.0);
  for (std::size_t k = 0; k < s.pool.size(); ++k) {
    EXPECT_GE(s.probabilities[k], -1e-9);
    total += s.probabilities[k];
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += s.probabilities[k] * s.pool[k].values[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-6);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    EXPECT_GE(mean[i], sc.moments.mu_lower[i] - 1e-6);
    EXPECT_LE(mean[i], sc.moments.mu_upper[i] + 1e-6);
    EXPECT_GE(s.duals.alpha_upper[i], -1e-9);
    EXPECT_GE(s.duals.alpha_lower[i], -1e-9);
  }
}

}  // namespace

TEST(Bruteforce, Toy2NoInvestment) {
  CaseData c = load("toy2.json");
  BruteForceResult r = recourse_bruteforce(c, c.scenarios[0], kX0);
  EXPECT_NEAR(r.h_dr, 12920.0, 1e-6);
  ASSERT_EQ(r.costs.size(), 4u);
  EXPECT_NEAR(r.costs[0], 800.0, 1e-6);
  EXPECT_NEAR(r.costs[1], 10900.0, 1e-6);
  EXPECT_NEAR(r.costs[2], 10900.0, 1e-6);
  EXPECT_NEAR(r.costs[3], 21000.0, 1e-6);
}

TEST(Bruteforce, Toy2WithInvestmentIsLinear) {
  CaseData c = load("toy2.json");
  EXPECT_NEAR(recourse_bruteforce(c, c.scenarios[0], kX1).h_dr, 1040.0, 1e-6);
}

TEST(Bruteforce, SingletonSupport) {
  CaseData c = load("toy2.json");
  LongTermScenario sc = c.scenarios[0];
  sc.support = {{55, 45}, {55, 45}};
  sc.moments = {{55, 45}, {55, 45}};
  const double g = dispatch_cost(c, sc, kX0, std::vector<double>{55, 45}).cost;
  EXPECT_NEAR(recourse_bruteforce(c, sc, kX0).h_dr, g, 1e-6);
}

TEST(Bruteforce, AroReductionTakesWorstVertex) {
  CaseData c = load("toy2.json");
  CaseData aro = make_reduction(c, Mode::kAro);
  EXPECT_NEAR(recourse_bruteforce(aro, aro.scenarios[0], kX0).h_dr, 21000.0, 1e-6);
}

TEST(Bruteforce, VertexCapExceeded) {
  CaseData c = load("toy2.json");
  RecourseOptions o;
  o.vertex_cap = 2;
  EXPECT_THROW(recourse_bruteforce(c, c.scenarios[0], kX0, o), VertexCapExceeded);
}

TEST(Constrained, DummyPoolForcesMass) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = constrained_recourse(c, sc, kX0, {dummy_scenario(sc)});
  EXPECT_NEAR(s.h_lower, 1000.0, 1e-6);
  ASSERT_EQ(s.probabilities.size(), 1u);
  EXPECT_NEAR(s.probabilities[0], 1.0, 1e-9);
  EXPECT_NEAR(s.duals.alpha0, 1000.0, 1e-6);
  EXPECT_NEAR(s.duals.alpha_upper[0], 0.0, 1e-9);
  EXPECT_NEAR(s.duals.alpha_lower[1], 0.0, 1e-9);
  EXPECT_NEAR(s.duals.objective(sc.moments), s.h_lower, 1e-6);
}

TEST(Constrained, FullVertexPoolMatchesBruteForce) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = constrained_recourse(c, sc, kX0, enumerate_vertices(sc.support));
  EXPECT_NEAR(s.h_lower, 12920.0, 1e-6);
  expect_state_invariants(sc, s);
  // HiGHS reports a basis, so the sparsity check below is exercised.
  EXPECT_TRUE(s.basis_reported);
  EXPECT_NEAR(s.duals.objective(sc.moments), s.h_lower, 1e-6);
}

TEST(Constrained, DegenerateMomentsAtMidpoint) {
  CaseData c = load("toy2.json");
  LongTermScenario sc = c.scenarios[0];
  sc.moments = {{50, 50}, {50, 50}};
  RecourseState s = constrained_recourse(c, sc, kX0, {dummy_scenario(sc)});
  EXPECT_NEAR(s.h_lower, dispatch_cost(c, sc, kX0, std::vector<double>{50, 50}).cost, 1e-6);
  EXPECT_NEAR(s.probabilities[0], 1.0, 1e-9);
}

TEST(Constrained, PoolWithoutFeasibleMixtureIsInternalError) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  EXPECT_THROW(constrained_recourse(c, sc, kX0, {point({60, 60})}), Error);
}

TEST(Oracle, Toy2FromDummyDuals) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = constrained_recourse(c, sc, kX0, {dummy_scenario(sc)});
  OracleResult o = oracle_max_reduced_cost(c, sc, kX0, s.duals);
  EXPECT_EQ(o.xi_star.values, (std::vector<double>{60, 60}));
  EXPECT_EQ(o.xi_star.origin, PointOrigin::kVertex);
  EXPECT_NEAR(o.c_star, 20000.0, 1e-5);
  EXPECT_NEAR(o.c_star_bound, 20000.0, 1e-5);
  EXPECT_NEAR(o.internal_dispatch_value, 21000.0, 1e-5);
}

TEST(Oracle, NoImprovingColumnAtFullPoolOptimum) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  for (const auto& x : {kX0, kX1}) {
    RecourseState s = constrained_recourse(c, sc, x, enumerate_vertices(sc.support));
    EXPECT_LE(oracle_max_reduced_cost(c, sc, x, s.duals).c_star, 1e-6);
  }
}

TEST(Oracle, SingletonSupport) {
  CaseData c = load("toy2.json");
  LongTermScenario sc = c.scenarios[0];
  sc.support = {{55, 45}, {55, 45}};
  sc.moments = {{55, 45}, {55, 45}};
  MomentDuals d{300.0, {2.0, 0.0}, {0.0, 1.5}};
  OracleResult o = oracle_max_reduced_cost(c, sc, kX0, d);
  EXPECT_EQ(o.xi_star.values, (std::vector<double>{55, 45}));
  const double g = dispatch_cost(c, sc, kX0, std::vector<double>{55, 45}).cost;
  EXPECT_NEAR(o.c_star, g - 300.0 - (2.0 * 55 - 1.5 * 45), 1e-6);
}

TEST(Oracle, PriceBoundEscalationIsBounded) {
  // A starting bound far below the needed prices must escalate; with no
  // escalation budget the oracle reports the exhausted bound.
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = constrained_recourse(c, sc, kX0, {dummy_scenario(sc)});
  RecourseOptions o;
  o.pi_bound_scale = 1e-3;
  OracleResult r = oracle_max_reduced_cost(c, sc, kX0, s.duals, o);
  EXPECT_GT(r.escalations, 0);
  EXPECT_NEAR(r.c_star, 20000.0, 1e-5);
  o.max_price_escalations = 0;
  try {
    oracle_max_reduced_cost(c, sc, kX0, s.duals, o);
    FAIL();
  } catch (const PriceBoundExhausted& e) {
    EXPECT_GT(e.last_bound(), 0.0);
  }
}

TEST(InnerLoop, Toy2Converges) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = dwp_inner_loop(c, sc, kX0, {dummy_scenario(sc)}, 20, 0.1);
  EXPECT_NEAR(s.h_lower, 12920.0, 1e-5);
  EXPECT_LE(s.c_star, 0.1);
  EXPECT_TRUE(s.converged);
  EXPECT_LE(s.pool.size(), 1u + 4u);
  EXPECT_EQ(s.initial_pool_size, 1u);
  expect_state_invariants(sc, s);
  EXPECT_NEAR(recourse_upper_bound(s), 12920.0, 0.1 + 1e-5);
}

TEST(InnerLoop, SingleOracleCall) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = dwp_inner_loop(c, sc, kX0, {dummy_scenario(sc)}, 1, 0.1);
  EXPECT_EQ(s.inner_iterations, 1);
  EXPECT_NEAR(s.h_lower, 1000.0, 1e-6);
  EXPECT_NEAR(s.c_star, 20000.0, 1e-5);
  EXPECT_NEAR(recourse_upper_bound(s), 21000.0, 1e-5);
  // The oracle's point is kept for the master with zero weight.
  ASSERT_EQ(s.pool.size(), 2u);
  EXPECT_EQ(s.pool[1].values, (std::vector<double>{60, 60}));
  EXPECT_EQ(s.probabilities[1], 0.0);
}

TEST(InnerLoop, InfiniteToleranceStopsAfterFirstPair) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = dwp_inner_loop(c, sc, kX0, {dummy_scenario(sc)}, 20, kInf);
  EXPECT_EQ(s.inner_iterations, 1);
  EXPECT_NEAR(s.h_lower, 1000.0, 1e-6);
  EXPECT_NEAR(s.c_star, 20000.0, 1e-5);
  EXPECT_EQ(s.pool.size(), 1u);
  EXPECT_TRUE(s.converged);
}

TEST(InnerLoop, RejectsBadArguments) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  EXPECT_THROW(dwp_inner_loop(c, sc, kX0, {dummy_scenario(sc)}, 0, 0.1), Error);
  EXPECT_THROW(dwp_inner_loop(c, sc, kX0, {dummy_scenario(sc)}, 5, -1.0), Error);
}

TEST(InnerLoop, ExactAtZeroTolerance) {
  CaseData c = load("garver6_d4.json");
  const auto& sc = c.scenarios[0];
  const std::vector<double> x{1, 0, 0, 1, 0, 0};
  RecourseState s = dwp_inner_loop(c, sc, x, {dummy_scenario(sc)}, 17, 0.0);
  const double h = recourse_bruteforce(c, sc, x).h_dr;
  EXPECT_NEAR(recourse_upper_bound(s), h, rel(h, 1e-5));
  EXPECT_NEAR(s.h_lower, h, rel(h, 1e-5));
}

TEST(UpperBound, ClampsNegativeReducedCost) {
  RecourseState s;
  s.h_lower = 500.0;
  s.c_star = -3.0;
  s.c_star_bound = -3.0;
  EXPECT_DOUBLE_EQ(recourse_upper_bound(s), 500.0);
}

// Proposition-1 sandwich, monotone inner loop, vertex property, oracle
// consistency and atom sparsity on random (x, omega) probes.
class RecourseProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(RecourseProperties, RandomProbes) {
  CaseData c = load(GetParam());
  std::mt19937_64 rng(99);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> passes(1, 4);
  for (int probe = 0; probe < 8; ++probe) {
    const auto& sc = c.scenarios[static_cast<std::size_t>(probe) % c.scenarios.size()];
    std::vector<double> x(c.network.candidate_count());
    for (double& v : x) v = coin(rng) ? 1.0 : 0.0;
    const double h = recourse_bruteforce(c, sc, x).h_dr;

    // Walk the inner loop one oracle call at a time.
    std::vector<NetDemandPoint> pool{dummy_scenario(sc)};
    double previous = -kInf;
    const int steps = passes(rng);
    for (int step = 0; step < steps; ++step) {
      RecourseState s = constrained_recourse(c, sc, x, pool);
      expect_state_invariants(sc, s);
      EXPECT_GE(s.h_lower, previous - 1e-9);
      previous = s.h_lower;
      OracleResult o = oracle_max_reduced_cost(c, sc, x, s.duals);
      EXPECT_LE(s.h_lower, h + rel(h, 1e-5));
      EXPECT_LE(h, s.h_lower + std::max(o.c_star_bound, 0.0) + rel(h, 1e-5));
      EXPECT_GE(o.c_star, -1e-6 * (1 + h));
      EXPECT_TRUE(is_vertex(sc.support, o.xi_star));
      const double g = dispatch_cost(c, sc, x, o.xi_star.values).cost;
      EXPECT_NEAR(o.internal_dispatch_value, g, rel(g, 1e-5));
      const auto gamma = s.duals.gamma();
      double lin = s.duals.alpha0;
      for (std::size_t i = 0; i < gamma.size(); ++i) lin += gamma[i] * o.xi_star.values[i];
      EXPECT_NEAR(o.c_star, g - lin, rel(g, 1e-5));
      if (s.basis_reported) {
        std::size_t atoms = 0;
        for (double p : s.probabilities) atoms += p > 1e-9 ? 1 : 0;
        EXPECT_LE(atoms, 2 * c.dimension() + 1);
      }
      bool pooled = false;
      for (const auto& q : pool) pooled = pooled || q.same_values(o.xi_star);
      if (pooled) break;
      pool.push_back(o.xi_star);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, RecourseProperties,
                         ::testing::ValuesIn(drotep::test::fixture_names()),
                         [](const auto& info) {
                           return info.param.substr(0, info.param.find('.'));
                         });

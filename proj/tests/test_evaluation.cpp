#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "drotep/error.hpp"
#include "drotep/evaluation.hpp"
#include "fixtures.hpp"

using namespace drotep;
using drotep::test::load;

TEST(Sigma, Coverage) {
  EXPECT_NEAR(sigma_for_coverage(40, 60, 0.95), 10.0 / 1.959964, 1e-5);
  EXPECT_NEAR(sigma_for_coverage(40, 60, 0.95), 5.1021, 1e-4);
  EXPECT_NEAR(sigma_for_coverage(40, 60, 0.90), 6.0796, 1e-4);
  EXPECT_EQ(sigma_for_coverage(50, 50, 0.95), 0.0);
  EXPECT_THROW(sigma_for_coverage(40, 60, 1.0), Error);
  EXPECT_THROW(sigma_for_coverage(40, 60, 0.0), Error);
}

TEST(Sampling, NormalCoverageMatches) {
  CaseData c = load("toy2.json");
  auto s = sample_net_demand(c.scenarios[0], DistributionSpec::normal(0.95), 10000, 1);
  ASSERT_EQ(s.size(), 10000u);
  for (std::size_t dim = 0; dim < 2; ++dim) {
    std::size_t inside = 0;
    for (const auto& p : s) inside += (p.values[dim] >= 40.0 && p.values[dim] <= 60.0) ? 1 : 0;
    EXPECT_NEAR(static_cast<double>(inside) / 10000.0, 0.95, 0.01);
  }
  // Unclipped: some draws leave the support.
  bool outside = false;
  for (const auto& p : s) outside = outside || p.values[0] < 40.0 || p.values[0] > 60.0;
  EXPECT_TRUE(outside);
}

TEST(Sampling, BetaIsSymmetricInsideSupport) {
  CaseData c = load("toy2.json");
  auto s = sample_net_demand(c.scenarios[0], DistributionSpec::beta(4.5), 20000, 3);
  double mean = 0.0;
  for (const auto& p : s) {
    for (double v : p.values) {
      EXPECT_GE(v, 40.0);
      EXPECT_LE(v, 60.0);
    }
    mean += p.values[1];
  }
  EXPECT_NEAR(mean / 20000.0, 50.0, 0.1);
}

TEST(Sampling, DeterministicFromSeed) {
  CaseData c = load("garver6_d4.json");
  const auto& sc = c.scenarios[0];
  for (auto spec : {DistributionSpec::normal(0.9), DistributionSpec::beta(2.0)}) {
    auto a = sample_net_demand(sc, spec, 50, 42);
    auto b = sample_net_demand(sc, spec, 50, 42);
    auto other = sample_net_demand(sc, spec, 50, 43);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, other);
  }
  EXPECT_NE(scenario_seed(5, 0), scenario_seed(5, 1));
  EXPECT_EQ(scenario_seed(5, 1), scenario_seed(5, 1));
}

TEST(Sampling, DegenerateIntervalIsConstant) {
  CaseData c = load("toy2.json");
  LongTermScenario sc = c.scenarios[0];
  sc.support = {{50, 45}, {50, 45}};
  sc.moments = {{50, 45}, {50, 45}};
  for (auto spec : {DistributionSpec::normal(0.95), DistributionSpec::beta(4.5)}) {
    for (const auto& p : sample_net_demand(sc, spec, 20, 0)) {
      EXPECT_EQ(p.values, (std::vector<double>{50, 45}));
    }
  }
}

TEST(Spec, Validation) {
  EXPECT_THROW(DistributionSpec::normal(1.2).validate(), ValidationError);
  EXPECT_THROW(DistributionSpec::beta(0.0).validate(), ValidationError);
  EXPECT_NO_THROW(DistributionSpec::beta(4.5).validate());
  EXPECT_EQ(parse_family("normal"), DistributionFamily::kNormalCoverage);
  EXPECT_THROW(parse_family("gamma"), Error);
}

TEST(Reliability, Examples) {
  EXPECT_DOUBLE_EQ(reliability_index(std::vector<double>{0, 0, 0}, 100.0), 0.0);
  EXPECT_DOUBLE_EQ(reliability_index(std::vector<double>{1, 0}, 100.0), 50.0);
  EXPECT_DOUBLE_EQ(reliability_index(std::vector<double>{0.5}, 100.0), 0.0);
  EXPECT_THROW(reliability_index(std::vector<double>{1.0}, 0.0), Error);
  EXPECT_THROW(reliability_index(std::vector<double>{}, 100.0), Error);
}

TEST(Reliability, NominalDemand) {
  CaseData c = load("toy2.json");
  EXPECT_DOUBLE_EQ(nominal_daily_demand(c, c.scenarios[0]), 100.0);
  c.scenarios[0].nominal_daily_demand = 250.0;
  EXPECT_DOUBLE_EQ(nominal_daily_demand(c, c.scenarios[0]), 250.0);
}

TEST(Evaluate, Toy2InvestedNeverSheds) {
  CaseData c = load("toy2.json");
  SimulationReport r = simulate_plan({1.0}, c, DistributionSpec::beta(4.5), 500, 0);
  ASSERT_EQ(r.scenarios.size(), 1u);
  EXPECT_DOUBLE_EQ(r.scenarios[0].ri_pct, 0.0);
  EXPECT_DOUBLE_EQ(r.scenarios[0].mean_shed_mwh, 0.0);
  EXPECT_NEAR(r.scenarios[0].mean_dispatch_cost, 1000.0, 10.0);
}

TEST(Evaluate, Toy2UninvestedAtPeakAlwaysSheds) {
  CaseData c = load("toy2.json");
  std::vector<std::vector<NetDemandPoint>> samples{
      std::vector<NetDemandPoint>(20, NetDemandPoint{{60, 60}, PointOrigin::kSample})};
  SimulationReport r = evaluate_plan({0.0}, c, samples);
  EXPECT_DOUBLE_EQ(r.scenarios[0].ri_pct, 100.0);
  EXPECT_NEAR(r.scenarios[0].daily_shed[0], 20.0, 1e-6);
  EXPECT_NEAR(r.scenarios[0].mean_dispatch_cost, 21000.0, 1e-6);
}

TEST(Evaluate, EmptyOrMismatchedSamples) {
  CaseData c = load("toy2.json");
  EXPECT_THROW(simulate_plan({1.0}, c, DistributionSpec::beta(4.5), 0, 0), Error);
  EXPECT_THROW(evaluate_plan({1.0}, c, {{}}), Error);
  EXPECT_THROW(evaluate_plan({1.0}, c, {}), Error);
  EXPECT_THROW(simulate_plan({1.0, 0.0}, c, DistributionSpec::beta(4.5), 5, 0), Error);
}

TEST(Evaluate, MeansAreExact) {
  CaseData c = load("garver6_d2_two.json");
  const std::vector<double> x{1, 1, 0, 1, 0, 0};
  SimulationReport r = simulate_plan(x, c, DistributionSpec::normal(0.95), 60, 7, 2);
  double weighted = 0.0, ri = 0.0;
  for (const auto& s : r.scenarios) {
    const double mean = std::accumulate(s.costs.begin(), s.costs.end(), 0.0) / s.costs.size();
    EXPECT_EQ(s.mean_dispatch_cost, mean);
    EXPECT_LE(s.min_cost, s.mean_dispatch_cost);
    EXPECT_GE(s.max_cost, s.mean_dispatch_cost);
    EXPECT_LE(s.p05, s.p50);
    EXPECT_LE(s.p50, s.p95);
    EXPECT_GE(s.ri_pct, 0.0);
    EXPECT_LE(s.ri_pct, 100.0);
    weighted += s.weight * s.mean_dispatch_cost;
    ri += s.weight * s.ri_pct;
  }
  EXPECT_NEAR(r.expected_dispatch_cost, weighted, 1e-9 * weighted);
  EXPECT_EQ(r.expected_total_cost, r.expected_dispatch_cost + r.investment_cost);
  EXPECT_EQ(r.investment_cost, c.investment_cost(x));
  EXPECT_NEAR(r.ri_weighted_pct, ri, 1e-9);
}

TEST(Evaluate, ThreadCountDoesNotChangeResults) {
  CaseData c = load("garver6_d4.json");
  const std::vector<double> x{1, 0, 0, 1, 1, 0};
  SimulationReport a = simulate_plan(x, c, DistributionSpec::beta(4.5), 40, 11, 1);
  SimulationReport b = simulate_plan(x, c, DistributionSpec::beta(4.5), 40, 11, 4);
  EXPECT_EQ(a.scenarios[0].costs, b.scenarios[0].costs);
  EXPECT_EQ(a.expected_total_cost, b.expected_total_cost);
}

// More lines never raise RI on the same samples (bundled fixtures are
// Braess-free by construction).
class EvaluationProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(EvaluationProperties, ReliabilityMonotoneInInvestment) {
  CaseData c = load(GetParam());
  std::mt19937_64 rng(23);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<NetDemandPoint>> samples;
  for (std::size_t w = 0; w < c.scenarios.size(); ++w) {
    samples.push_back(sample_net_demand(c.scenarios[w], DistributionSpec::normal(0.9), 40,
                                        scenario_seed(5, w)));
  }
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> x(c.network.candidate_count());
    for (double& v : x) v = coin(rng) ? 1.0 : 0.0;
    std::vector<double> more = x;
    for (double& v : more)
      if (coin(rng)) v = 1.0;
    SimulationReport a = evaluate_plan(x, c, samples);
    SimulationReport b = evaluate_plan(more, c, samples);
    for (std::size_t w = 0; w < c.scenarios.size(); ++w) {
      EXPECT_LE(b.scenarios[w].ri_pct, a.scenarios[w].ri_pct);
      EXPECT_LE(b.scenarios[w].mean_dispatch_cost,
                a.scenarios[w].mean_dispatch_cost * (1 + 1e-6) + 1e-6);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, EvaluationProperties,
                         ::testing::ValuesIn(drotep::test::fixture_names()),
                         [](const auto& info) {
                           return info.param.substr(0, info.param.find('.'));
                         });

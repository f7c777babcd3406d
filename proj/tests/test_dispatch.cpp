#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "drotep/dispatch.hpp"
#include "drotep/error.hpp"
#include "fixtures.hpp"

using namespace drotep;
using drotep::test::load;

namespace {

double rel_tol(double v) { return 1e-6 * (1.0 + std::abs(v)); }

double sum(const std::vector<std::vector<double>>& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s += v;
  return s;
}

}  // namespace

TEST(Dispatch, Toy2NoInvestmentSheds) {
  CaseData c = load("toy2.json");
  DispatchResult r = dispatch_cost(c, c.scenarios[0], std::vector<double>{0.0},
                                   std::vector<double>{60.0, 60.0});
  EXPECT_NEAR(r.cost, 21000.0, 1e-6);
  for (int t = 0; t < 2; ++t) {
    EXPECT_NEAR(r.flow[t][0], 50.0, 1e-6);
    EXPECT_NEAR(r.flow[t][1], 0.0, 1e-6);
    EXPECT_NEAR(r.shed[t][1], 10.0, 1e-6);
    EXPECT_NEAR(r.q[t][0], 50.0, 1e-6);
  }
  EXPECT_NEAR(r.total_shed_mwh(1.0), 20.0, 1e-6);
}

TEST(Dispatch, Toy2WithInvestmentSplitsFlow) {
  CaseData c = load("toy2.json");
  DispatchResult r = dispatch_cost(c, c.scenarios[0], std::vector<double>{1.0},
                                   std::vector<double>{60.0, 60.0});
  EXPECT_NEAR(r.cost, 1200.0, 1e-6);
  for (int t = 0; t < 2; ++t) {
    EXPECT_NEAR(r.flow[t][0], 30.0, 1e-6);
    EXPECT_NEAR(r.flow[t][1], 30.0, 1e-6);
    EXPECT_NEAR(r.shed[t][1], 0.0, 1e-9);
  }
}

TEST(Dispatch, ZeroDemandIsFree) {
  CaseData c = load("toy2.json");
  for (double x : {0.0, 1.0}) {
    DispatchResult r = dispatch_cost(c, c.scenarios[0], std::vector<double>{x},
                                     std::vector<double>{0.0, 0.0});
    EXPECT_NEAR(r.cost, 0.0, 1e-9);
    EXPECT_NEAR(sum(r.q), 0.0, 1e-9);
    EXPECT_NEAR(sum(r.shed), 0.0, 1e-9);
    EXPECT_NEAR(sum(r.surplus), 0.0, 1e-9);
    for (const auto& period : r.flow)
      for (double f : period) EXPECT_NEAR(f, 0.0, 1e-9);
  }
}

TEST(Dispatch, DualObjectiveOnToy2) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  std::vector<double> x0{0.0}, x1{1.0}, hi{60.0, 60.0}, lo{40.0, 40.0};
  DispatchResult r = dispatch_cost(c, sc, x0, hi);
  EXPECT_NEAR(dispatch_dual_objective(c, sc, x0, hi, r.row_duals, r.col_duals), 21000.0, 1e-6);
  DispatchResult r1 = dispatch_cost(c, sc, x1, lo);
  EXPECT_NEAR(r1.cost, 800.0, 1e-6);
  EXPECT_NEAR(dispatch_dual_objective(c, sc, x1, lo, r1.row_duals, r1.col_duals), 800.0, 1e-6);
  std::vector<double> zr(r.row_duals.size(), 0.0), zc(r.col_duals.size(), 0.0);
  EXPECT_DOUBLE_EQ(dispatch_dual_objective(c, sc, x0, hi, zr, zc), 0.0);
}

TEST(Dispatch, DimensionMismatch) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  EXPECT_THROW(dispatch_cost(c, sc, std::vector<double>{0.0, 1.0}, std::vector<double>{50, 50}),
               Error);
  EXPECT_THROW(dispatch_cost(c, sc, std::vector<double>{0.0}, std::vector<double>{50}), Error);
  DispatchResult r = dispatch_cost(c, sc, std::vector<double>{0.0}, std::vector<double>{50, 50});
  std::vector<double> short_duals(r.row_duals.size() - 1, 0.0);
  EXPECT_THROW(dispatch_dual_objective(c, sc, std::vector<double>{0.0},
                                       std::vector<double>{50, 50}, short_duals, r.col_duals),
               Error);
}

TEST(Dispatch, BalanceDualsPriceShedding) {
  CaseData c = load("toy2.json");
  DispatchResult r = dispatch_cost(c, c.scenarios[0], std::vector<double>{0.0},
                                   std::vector<double>{60.0, 60.0});
  // Bus 2 sheds, so its marginal price is the shedding cost.
  EXPECT_NEAR(r.pi[0][1], 1000.0, 1e-6);
  EXPECT_NEAR(r.pi[0][0], 10.0, 1e-6);
}

TEST(Dispatch, RampLimitsBindFromSecondPeriod) {
  CaseData c = load("toy2.json");
  LongTermScenario sc = c.scenarios[0];
  sc.ramp_up = std::vector<double>{5.0};
  sc.ramp_down = std::vector<double>{5.0};
  c.scenarios[0] = sc;
  // 40 then 60: generation may only rise by 5, the rest is shed.
  DispatchResult r = dispatch_cost(c, sc, std::vector<double>{1.0}, std::vector<double>{40, 60});
  EXPECT_NEAR(r.q[0][0], 40.0, 1e-6);
  EXPECT_NEAR(r.q[1][0], 45.0, 1e-6);
  EXPECT_NEAR(r.shed[1][0] + r.shed[1][1], 15.0, 1e-6);
  // Without an initial state the first period is unconstrained.
  DispatchResult r0 = dispatch_cost(c, sc, std::vector<double>{1.0}, std::vector<double>{60, 60});
  EXPECT_NEAR(r0.q[0][0], 60.0, 1e-6);
  sc.initial_generation = std::vector<double>{50.0};
  DispatchResult r1 = dispatch_cost(c, sc, std::vector<double>{1.0}, std::vector<double>{60, 60});
  EXPECT_NEAR(r1.q[0][0], 55.0, 1e-6);
}

TEST(Dispatch, NominalDemandAddsToAllocation) {
  CaseData c = load("toy2.json");
  LongTermScenario sc = c.scenarios[0];
  sc.nominal_demand = {{0.0, 5.0}, {0.0, 5.0}};
  DispatchResult r = dispatch_cost(c, sc, std::vector<double>{1.0}, std::vector<double>{40, 40});
  EXPECT_NEAR(r.cost, 2 * 45 * 10.0, 1e-6);
}

TEST(Dispatch, SurplusAbsorbsNegativeNetDemand) {
  CaseData c = load("toy2.json");
  DispatchResult r = dispatch_cost(c, c.scenarios[0], std::vector<double>{0.0},
                                   std::vector<double>{-10.0, 0.0});
  EXPECT_NEAR(r.surplus[0][1] + r.surplus[0][0], 10.0, 1e-6);
  EXPECT_NEAR(r.cost, 10000.0, 1e-6);
}

// Feasibility, strong duality, convexity in xi, monotone investment benefit
// and disjunctive KVL on random probes over every fixture.
class DispatchProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(DispatchProperties, RandomProbes) {
  CaseData c = load(GetParam());
  const Network& net = c.network;
  std::mt19937_64 rng(2024);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n_exist = net.existing_lines.size();
  for (int probe = 0; probe < 40; ++probe) {
    const auto& sc = c.scenarios[static_cast<std::size_t>(probe) % c.scenarios.size()];
    std::vector<double> x(net.candidate_count());
    for (double& v : x) v = coin(rng) ? 1.0 : 0.0;
    auto draw = [&] {
      std::vector<double> xi(c.dimension());
      for (std::size_t i = 0; i < xi.size(); ++i) {
        xi[i] = sc.support.lower[i] + unit(rng) * (sc.support.upper[i] - sc.support.lower[i]);
      }
      return xi;
    };
    std::vector<double> a = draw(), b = draw();
    DispatchResult ra = dispatch_cost(c, sc, x, a);
    EXPECT_NEAR(dispatch_dual_objective(c, sc, x, a, ra.row_duals, ra.col_duals), ra.cost,
                rel_tol(ra.cost));

    const double t = unit(rng);
    std::vector<double> mix(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mix[i] = t * a[i] + (1 - t) * b[i];
    const double gb = dispatch_cost(c, sc, x, b).cost;
    const double gm = dispatch_cost(c, sc, x, mix).cost;
    EXPECT_LE(gm, t * ra.cost + (1 - t) * gb + 1e-6 * (1 + std::abs(ra.cost) + std::abs(gb)));

    std::vector<double> more = x;
    for (double& v : more)
      if (coin(rng)) v = 1.0;
    EXPECT_LE(dispatch_cost(c, sc, more, a).cost, ra.cost + rel_tol(ra.cost));

    for (std::size_t p = 0; p < ra.flow.size(); ++p) {
      for (std::size_t k = 0; k < net.candidate_count(); ++k) {
        const CandidateLine& line = net.candidate_lines[k];
        const double f = ra.flow[p][n_exist + k];
        if (x[k] > 0.5) {
          const double s = net.base_mva * line.susceptance;
          EXPECT_NEAR(f, s * (ra.theta[p][line.from] - ra.theta[p][line.to]), 1e-6);
        } else {
          EXPECT_NEAR(f, 0.0, 1e-6);
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, DispatchProperties,
                         ::testing::ValuesIn(drotep::test::fixture_names()),
                         [](const auto& info) {
                           std::string n = info.param.substr(0, info.param.find('.'));
                           return n;
                         });

// Building a line adds a KVL loop, so on meshed corridors more lines can hurt.
// C2-3 parallels L2-3 with equal reactance but half the rating; once built,
// the equal flow split caps the corridor and forces shedding. The bundled
// planning fixtures avoid this by construction (radial identical circuits).
TEST(Dispatch, MeshedCorridorBraessEffect) {
  CaseData c = load("garver6_mesh.json");
  const auto& sc = c.scenarios[0];
  const std::vector<double> xi{240.0, 250.0};
  const DispatchResult before = dispatch_cost(c, sc, std::vector<double>{0, 1, 0, 1, 1, 0}, xi);
  const DispatchResult after = dispatch_cost(c, sc, std::vector<double>{0, 1, 0, 1, 1, 1}, xi);
  EXPECT_NEAR(before.cost, 276684.0, 1.0);
  EXPECT_NEAR(after.cost, 542285.0, 1.0);
  EXPECT_GT(after.total_shed_mwh(c.periods.hours), before.total_shed_mwh(c.periods.hours));
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "drotep/error.hpp"
#include "drotep/planner.hpp"
#include "drotep/recourse.hpp"
#include "fixtures.hpp"

using namespace drotep;
using drotep::test::load;

namespace {

RunConfig exact(Mode mode) {
  RunConfig c;
  c.mode = mode;
  c.master_mip_gap = 0.0;
  return c;
}

double rel(double v, double tol) { return tol * (1.0 + std::abs(v)); }

std::vector<std::vector<NetDemandPoint>> dummy_pools(const CaseData& c) {
  std::vector<std::vector<NetDemandPoint>> pools;
  for (const auto& sc : c.scenarios) pools.push_back({dummy_scenario(sc)});
  return pools;
}

}  // namespace

TEST(Fva, Toy2) {
  CaseData c = load("toy2.json");
  PlanResult r = solve_fva(c, exact(Mode::kFva));
  EXPECT_NEAR(r.z, 2040.0, 1e-5);
  EXPECT_EQ(r.x, (std::vector<double>{1.0}));
  EXPECT_NEAR(r.investment_cost, 1000.0, 1e-9);
  EXPECT_EQ(r.status, RunStatus::kConverged);
  EXPECT_EQ(r.new_lines(), 1u);
}

TEST(Fva, Toy2Reductions) {
  CaseData c = load("toy2.json");
  PlanResult dtep = solve_plan(c, exact(Mode::kDtep));
  EXPECT_NEAR(dtep.z, 1000.0, 1e-5);
  EXPECT_EQ(dtep.x, (std::vector<double>{0.0}));
  PlanResult aro = solve_plan(c, exact(Mode::kAro));
  EXPECT_NEAR(aro.z, 2200.0, 1e-5);
  EXPECT_EQ(aro.x, (std::vector<double>{1.0}));
  RunConfig via_fva = exact(Mode::kAro);
  via_fva.reduction_solver = ReductionSolver::kFva;
  EXPECT_NEAR(solve_plan(c, via_fva).z, 2200.0, 1e-5);
}

TEST(Fva, VertexCapExceeded) {
  CaseData c = load("garver6_d6.json");
  RunConfig cfg = exact(Mode::kFva);
  cfg.vertex_cap = 16;
  EXPECT_THROW(solve_plan(c, cfg), VertexCapExceeded);
}

TEST(Master, DummyPoolOnly) {
  CaseData c = load("toy2.json");
  MasterResult m = solve_master(c, dummy_pools(c), 0.0);
  EXPECT_NEAR(m.lb, 1000.0, 1e-6);
  EXPECT_NEAR(m.objective, 1000.0, 1e-6);
  EXPECT_EQ(m.x, (std::vector<double>{0.0}));
  ASSERT_EQ(m.duals.size(), 1u);
}

TEST(Master, FullPoolsEqualFva) {
  CaseData c = load("garver6_d2_two.json");
  std::vector<std::vector<NetDemandPoint>> pools;
  for (const auto& sc : c.scenarios) pools.push_back(enumerate_vertices(sc.support));
  MasterResult m = solve_master(c, pools, 0.0);
  PlanResult fva = solve_fva(c, exact(Mode::kFva));
  EXPECT_NEAR(m.objective, fva.z, rel(fva.z, 1e-6));
}

TEST(Master, NoCandidates) {
  CaseData c = load("toy2.json");
  c.network.candidate_lines.clear();
  MasterResult m = solve_master(c, dummy_pools(c), 0.0);
  EXPECT_TRUE(m.x.empty());
  EXPECT_NEAR(m.lb, 1000.0, 1e-6);
}

TEST(Master, EmptyPoolRejected) {
  CaseData c = load("toy2.json");
  EXPECT_THROW(solve_master(c, {{}}, 0.0), Error);
}

TEST(Eccg, Toy2MatchesFva) {
  CaseData c = load("toy2.json");
  RunConfig cfg = exact(Mode::kEccg);
  cfg.top_m = 4;
  PlanResult r = run_eccg(c, cfg);
  EXPECT_EQ(r.x, (std::vector<double>{1.0}));
  EXPECT_LE(r.lb, r.z + 1e-6);
  EXPECT_LE(r.z - 2040.0, cfg.eps_global * r.ub + 1e-6);
  EXPECT_EQ(r.status, RunStatus::kConverged);
  EXPECT_EQ(r.lb_trace.size(), r.ub_trace.size());
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations));
  ASSERT_EQ(r.final_states.size(), 1u);
}

TEST(Eccg, CcgSameDecisionMoreIterations) {
  CaseData c = load("toy2.json");
  RunConfig e = exact(Mode::kEccg);
  e.top_m = 4;
  PlanResult eccg = solve_plan(c, e);
  PlanResult ccg = solve_plan(c, exact(Mode::kCcg));
  EXPECT_EQ(ccg.x, eccg.x);
  EXPECT_NEAR(ccg.z, 2040.0, 0.01 * ccg.ub + 1e-6);
  EXPECT_GE(ccg.iterations, eccg.iterations);
  for (const auto& rec : ccg.trace) {
    for (int n : rec.inner_iters) EXPECT_LE(n, 1);
  }
}

TEST(Eccg, FullToleranceStopsAfterFirstBound) {
  CaseData c = load("garver6_d4.json");
  RunConfig cfg = exact(Mode::kEccg);
  cfg.eps_global = 1.0;
  PlanResult r = run_eccg(c, cfg);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.status, RunStatus::kConverged);
}

TEST(Eccg, IterationLimit) {
  CaseData c = load("garver6_d6.json");
  RunConfig cfg = exact(Mode::kCcg);
  cfg.max_iterations = 1;
  cfg.eps_global = 1e-9;
  PlanResult r = run_eccg(c, cfg);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.status, RunStatus::kIterationLimit);
}

TEST(Eccg, TraceBookkeeping) {
  CaseData c = load("garver6_d2_two.json");
  PlanResult r = run_eccg(c, exact(Mode::kEccg));
  ASSERT_FALSE(r.trace.empty());
  double best = kInf;
  for (std::size_t j = 0; j < r.trace.size(); ++j) {
    const IterationRecord& rec = r.trace[j];
    EXPECT_EQ(rec.iter, static_cast<int>(j) + 1);
    best = std::min(best, rec.ub);
    EXPECT_DOUBLE_EQ(rec.ub_best, best);
    EXPECT_NEAR(rec.gap, relative_gap(rec.lb, rec.ub_best), 1e-12);
    EXPECT_EQ(rec.inner_iters.size(), c.scenarios.size());
    EXPECT_DOUBLE_EQ(r.lb_trace[j], rec.lb);
    EXPECT_DOUBLE_EQ(r.ub_trace[j], rec.ub);
    if (j > 0) EXPECT_GE(rec.t_accum_s, r.trace[j - 1].t_accum_s);
  }
  EXPECT_DOUBLE_EQ(r.z, best);
}

TEST(Config, Validation) {
  RunConfig c;
  c.top_m = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = RunConfig{};
  c.max_inner = 2;
  c.top_m = 3;
  EXPECT_THROW(c.validate(), ValidationError);
  c = RunConfig{};
  c.eps_dwp = -1.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = RunConfig{};
  c.eps_global = 0.0;
  EXPECT_NO_THROW(c.validate());
  c.mode = Mode::kCcg;
  c.top_m = 5;
  RunConfig e = c.effective();
  EXPECT_EQ(e.top_m, 1);
  EXPECT_EQ(e.max_inner, 1);
  EXPECT_EQ(parse_mode("eccg"), Mode::kEccg);
  EXPECT_THROW(parse_mode("benders"), Error);
}

TEST(Relative, Gap) {
  EXPECT_DOUBLE_EQ(relative_gap(90.0, 100.0), 0.1);
  EXPECT_DOUBLE_EQ(relative_gap(100.0, 100.0), 0.0);
  EXPECT_DOUBLE_EQ(relative_gap(0.0, 0.0), 0.0);
}

TEST(TopM, Examples) {
  std::vector<ScenarioCandidate> c{{0, 500.0, 900.0}, {1, 0.0, 100.0}, {2, 120.0, 300.0}};
  auto top = select_top_m(c, 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].index, 0u);
  EXPECT_EQ(top[1].index, 2u);
  EXPECT_EQ(select_top_m({{7, 3.0, 1.0}}, 5).size(), 1u);
  std::vector<ScenarioCandidate> zero{{3, 0.0, 10.0}, {4, 0.0, 30.0}, {5, 0.0, 30.0}, {6, 0.0, 5.0}};
  auto z = select_top_m(zero, 2);
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(z[0].index, 4u);
  EXPECT_EQ(z[1].index, 5u);
  EXPECT_TRUE(select_top_m({}, 3).empty());
}

TEST(TopM, NewScenariosFromInnerLoop) {
  CaseData c = load("toy2.json");
  const auto& sc = c.scenarios[0];
  RecourseState s = dwp_inner_loop(c, sc, {0.0}, {dummy_scenario(sc)}, 20, 0.1);
  auto fresh = new_scenarios(s);
  EXPECT_EQ(fresh.size(), s.pool.size() - 1);
  for (const auto& f : fresh) {
    EXPECT_GE(f.index, 1u);
    EXPECT_NEAR(f.contribution, s.contributions[f.index], 1e-12);
    EXPECT_NEAR(f.cost, s.costs[f.index], 1e-12);
  }
}

TEST(Reduction, Toy2) {
  CaseData c = load("toy2.json");
  CaseData aro = make_reduction(c, Mode::kAro);
  EXPECT_EQ(aro.scenarios[0].moments.mu_lower, (std::vector<double>{40, 40}));
  EXPECT_EQ(aro.scenarios[0].moments.mu_upper, (std::vector<double>{60, 60}));
  EXPECT_EQ(aro.scenarios[0].support, c.scenarios[0].support);
  CaseData dtep = make_reduction(c, Mode::kDtep);
  EXPECT_EQ(dtep.scenarios[0].support.lower, (std::vector<double>{50, 50}));
  EXPECT_EQ(dtep.scenarios[0].support.upper, (std::vector<double>{50, 50}));
  EXPECT_EQ(dtep.scenarios[0].moments.mu_lower, (std::vector<double>{50, 50}));
  EXPECT_EQ(make_reduction(dtep, Mode::kDtep), dtep);
}

// Theorem-1 sandwich, LB monotonicity and mode equivalence on every fixture.
class PlannerProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(PlannerProperties, SandwichAndEquivalence) {
  CaseData c = load(GetParam());
  const double z = solve_fva(c, exact(Mode::kFva)).z;
  for (Mode mode : {Mode::kEccg, Mode::kCcg}) {
    for (int m : {1, 3}) {
      if (mode == Mode::kCcg && m > 1) continue;
      RunConfig cfg = exact(mode);
      cfg.top_m = m;
      PlanResult r = solve_plan(c, cfg);
      EXPECT_LE(std::abs(r.z - z), cfg.eps_global * std::abs(z)) << to_string(mode) << " M=" << m;
      EXPECT_EQ(r.status, RunStatus::kConverged);
      double prev = -kInf;
      for (const auto& rec : r.trace) {
        EXPECT_LE(rec.lb, z + rel(z, 1e-5)) << "iter " << rec.iter;
        EXPECT_GE(rec.ub + rel(z, 1e-5), z) << "iter " << rec.iter;
        EXPECT_GE(rec.lb, prev - 1e-9 * (1 + std::abs(prev)));
        prev = rec.lb;
      }
    }
  }
}

// With a zero DWP tolerance and L above the vertex count, each UB equals the
// exact objective of that iteration's decision.
TEST_P(PlannerProperties, EpsilonTightUpperBound) {
  CaseData c = load(GetParam());
  RunConfig cfg = exact(Mode::kEccg);
  cfg.eps_dwp = 0.0;
  cfg.max_inner = static_cast<int>(vertex_count(c.scenarios[0].support)) + 1;
  cfg.top_m = 2;
  PlanResult r = run_eccg(c, cfg);
  for (const auto& rec : r.trace) {
    double exact_ub = c.investment_cost(rec.x);
    for (const auto& sc : c.scenarios) exact_ub += sc.weight * recourse_bruteforce(c, sc, rec.x).h_dr;
    EXPECT_NEAR(rec.ub, exact_ub, rel(exact_ub, 1e-5)) << "iter " << rec.iter;
  }
}

// From the same (x, pools) state, adding the top 4 new points per scenario
// gives a master bound at least as large as adding only the top 1.
TEST_P(PlannerProperties, MoreScenariosTightenMaster) {
  CaseData c = load(GetParam());
  std::mt19937_64 rng(17);
  std::bernoulli_distribution coin(0.5);
  const RecourseOptions opts;
  for (int state = 0; state < 4; ++state) {
    std::vector<double> x(c.network.candidate_count());
    for (double& v : x) v = coin(rng) ? 1.0 : 0.0;
    auto pools = dummy_pools(c);
    auto pools1 = pools, pools4 = pools;
    for (std::size_t w = 0; w < c.scenarios.size(); ++w) {
      RecourseState s = dwp_inner_loop(c, c.scenarios[w], x, pools[w], 20, 0.1, opts);
      for (const auto& p : select_top_m(new_scenarios(s), 1)) pools1[w].push_back(s.pool[p.index]);
      for (const auto& p : select_top_m(new_scenarios(s), 4)) pools4[w].push_back(s.pool[p.index]);
    }
    const double lb1 = solve_master(c, pools1, 0.0).lb;
    const double lb4 = solve_master(c, pools4, 0.0).lb;
    EXPECT_GE(lb4, lb1 - rel(lb1, 1e-9));
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, PlannerProperties,
                         ::testing::ValuesIn(drotep::test::fixture_names()),
                         [](const auto& info) {
                           return info.param.substr(0, info.param.find('.'));
                         });

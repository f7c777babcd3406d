#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "drotep/error.hpp"
#include "drotep/lp_dual.hpp"
#include "drotep/solver.hpp"

using namespace drotep;

TEST(SolveLp, MinWithLowerBoundRow) {
  LinearModel m;
  int x = m.add_variable(-kInf, kInf, 1.0);
  m.add_constraint(3.0, kInf, {{x, 1.0}});
  Solution s = solve_lp(m);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective, 3.0, 1e-9);
  ASSERT_TRUE(s.has_duals());
  EXPECT_NEAR(s.row_duals[0], 1.0, 1e-9);
}

TEST(SolveLp, MaxWithUpperBoundRow) {
  LinearModel m;
  m.set_sense(Sense::kMaximize);
  int x = m.add_variable(0.0, kInf, 1.0);
  m.add_constraint(-kInf, 5.0, {{x, 1.0}});
  Solution s = solve_lp(m);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective, 5.0, 1e-9);
  EXPECT_NEAR(s.row_duals[0], 1.0, 1e-9);
}

TEST(SolveLp, Infeasible) {
  LinearModel m;
  int x = m.add_variable(-kInf, kInf, 0.0);
  m.add_constraint(-kInf, 0.0, {{x, 1.0}});
  m.add_constraint(1.0, kInf, {{x, 1.0}});
  EXPECT_EQ(solve_lp(m).status, SolveStatus::kInfeasible);
}

TEST(SolveLp, Unbounded) {
  LinearModel m;
  m.add_variable(-kInf, kInf, 1.0);
  EXPECT_EQ(solve_lp(m).status, SolveStatus::kUnbounded);
}

TEST(SolveLp, RejectsIntegerModel) {
  LinearModel m;
  m.add_binary(1.0);
  EXPECT_THROW(solve_lp(m), SolverError);
}

TEST(SolveLp, RejectsBadIndicesAndNan) {
  LinearModel m;
  m.add_variable(0, 1, 1.0);
  m.add_constraint(0.0, 1.0, {{3, 1.0}});
  EXPECT_THROW(solve_lp(m), SolverError);
  LinearModel n;
  int x = n.add_variable(0, 1, 1.0);
  n.add_constraint(0.0, 1.0, {{x, std::nan("")}});
  EXPECT_THROW(solve_lp(n), SolverError);
}

TEST(SolveMip, BinaryAboveHalf) {
  LinearModel m;
  int x = m.add_binary(1.0);
  m.add_constraint(0.5, kInf, {{x, 1.0}});
  Solution s = solve_mip(m, 0.0, kInf);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_EQ(s.primal[0], 1.0);
  EXPECT_NEAR(s.objective, 1.0, 1e-9);
  EXPECT_NEAR(s.mip_gap, 0.0, 1e-12);
}

TEST(SolveMip, Knapsack) {
  LinearModel m;
  m.set_sense(Sense::kMaximize);
  int a = m.add_binary(3.0);
  int b = m.add_binary(2.0);
  m.add_constraint(-kInf, 1.0, {{a, 1.0}, {b, 1.0}});
  Solution s = solve_mip(m, 0.0, kInf);
  ASSERT_TRUE(s.ok());
  EXPECT_NEAR(s.objective, 3.0, 1e-9);
  EXPECT_NEAR(s.mip_dual_bound, 3.0, 1e-9);
}

TEST(SolveMip, EmptyFeasibleSet) {
  LinearModel m;
  int a = m.add_binary(1.0);
  int b = m.add_binary(1.0);
  m.add_constraint(3.0, kInf, {{a, 1.0}, {b, 1.0}});
  EXPECT_EQ(solve_mip(m, 0.0, kInf).status, SolveStatus::kInfeasible);
}

TEST(SolveMip, NegativeGapRejected) {
  LinearModel m;
  m.add_binary(1.0);
  EXPECT_THROW(solve_mip(m, -0.1, kInf), SolverError);
}

TEST(Backend, UnknownNameRejected) {
  EXPECT_THROW(make_backend("nope"), SolverError);
  SolverOptions o;
  o.backend = "nope";
  LinearModel m;
  m.add_variable(0, 1, 1.0);
  EXPECT_THROW(solve_lp(m, o), SolverError);
}

namespace {

// Random bounded LP: min c'y, L <= Ay <= U, l <= y <= u, built feasible
// around a known interior point.
LinearModel random_lp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> nv(2, 6), nr(1, 6), kind(0, 3);
  LinearModel m;
  const int n = nv(rng);
  std::vector<double> y0(n);
  for (int j = 0; j < n; ++j) {
    y0[j] = u(rng);
    const int k = kind(rng);
    const double lo = k == 0 ? -kInf : y0[j] - 1.0 - std::abs(u(rng));
    const double hi = k == 1 ? kInf : y0[j] + 1.0 + std::abs(u(rng));
    m.add_variable(k == 3 ? y0[j] - 2.0 : lo, k == 3 ? y0[j] + 2.0 : hi, u(rng));
  }
  const int rows = nr(rng);
  for (int i = 0; i < rows; ++i) {
    std::vector<Term> t;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      double c = u(rng);
      t.push_back({j, c});
      act += c * y0[j];
    }
    const int k = kind(rng);
    const double lo = k == 1 ? -kInf : act - std::abs(u(rng));
    const double hi = k == 0 ? kInf : act + std::abs(u(rng));
    if (k == 3) m.add_constraint(act, act, t);
    else m.add_constraint(lo, hi, t);
  }
  return m;
}

}  // namespace

// Strong duality and complementary slackness on random bounded LPs.
TEST(SolveLp, StrongDualityAndComplementarySlackness) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    LinearModel m = random_lp(rng);
    Solution s = solve_lp(m);
    if (s.status != SolveStatus::kOptimal) continue;
    ++checked;
    const double dual = dual_objective(m, s.row_duals, s.col_duals);
    EXPECT_NEAR(dual, s.objective, 1e-6 * (1.0 + std::abs(s.objective)));
    for (std::size_t i = 0; i < m.num_constraints(); ++i) {
      const Constraint& r = m.constraint(i);
      const double y = s.row_duals[i];
      const double slack_lo = s.row_activity[i] - r.lower;
      const double slack_hi = r.upper - s.row_activity[i];
      if (y > 1e-7) EXPECT_NEAR(slack_lo, 0.0, 1e-5);
      if (y < -1e-7) EXPECT_NEAR(slack_hi, 0.0, 1e-5);
    }
    for (std::size_t j = 0; j < m.num_variables(); ++j) {
      const double z = s.col_duals[j];
      if (z > 1e-7) EXPECT_NEAR(s.primal[j], m.variable(j).lower, 1e-5);
      if (z < -1e-7) EXPECT_NEAR(s.primal[j], m.variable(j).upper, 1e-5);
    }
    // Determinism: identical model, identical objective.
    EXPECT_NEAR(solve_lp(m).objective, s.objective, 1e-9);
  }
  EXPECT_GT(checked, 100);
}

// The explicit dual model attains the primal optimum.
TEST(LpDual, DualModelMatchesPrimal) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    LinearModel m = random_lp(rng);
    Solution p = solve_lp(m);
    if (p.status != SolveStatus::kOptimal) continue;
    DualModel d = build_dual(m);
    Solution q = solve_lp(d.model);
    ASSERT_EQ(q.status, SolveStatus::kOptimal);
    EXPECT_NEAR(q.objective, p.objective, 1e-6 * (1.0 + std::abs(p.objective)));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(LpDual, RejectsMaximization) {
  LinearModel m;
  m.set_sense(Sense::kMaximize);
  m.add_variable(0, 1, 1.0);
  EXPECT_THROW(build_dual(m), SolverError);
}

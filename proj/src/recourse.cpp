#include "drotep/recourse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drotep/dispatch.hpp"
#include "drotep/error.hpp"
#include "drotep/lp_dual.hpp"

namespace drotep {

std::vector<double> MomentDuals::gamma() const {
  std::vector<double> g(alpha_upper.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = alpha_upper[i] - alpha_lower[i];
  return g;
}

double MomentDuals::objective(const MomentInterval& moments) const {
  double v = alpha0;
  for (std::size_t i = 0; i < alpha_upper.size(); ++i) {
    v += moments.mu_upper[i] * alpha_upper[i] - moments.mu_lower[i] * alpha_lower[i];
  }
  return v;
}

RecourseState constrained_recourse(const LongTermScenario& sc, std::vector<NetDemandPoint> pool,
                                   std::vector<double> costs, const SolverOptions& solver) {
  if (pool.empty()) throw Error("constrained recourse needs a non-empty pool");
  if (costs.size() != pool.size()) throw Error("pool and cost vectors differ in length");
  const std::size_t d = sc.support.dimension();

  LinearModel lp;
  lp.set_sense(Sense::kMaximize);
  std::vector<Term> sum_row;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    if (pool[k].dimension() != d) throw Error("pool point has the wrong dimension");
    int p = lp.add_variable(0.0, kInf, costs[k]);
    sum_row.push_back({p, 1.0});
  }
  lp.add_constraint(1.0, 1.0, sum_row);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Term> row;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      row.push_back({static_cast<int>(k), pool[k].values[i]});
    }
    lp.add_constraint(sc.moments.mu_lower[i], sc.moments.mu_upper[i], row);
  }

  Solution sol = solve_lp(lp, solver);
  if (sol.status == SolveStatus::kInfeasible) {
    throw SolverError("restricted recourse LP is infeasible: no mixture of the pool has a "
                      "mean inside the moment interval");
  }
  if (sol.status != SolveStatus::kOptimal) {
    throw SolverError("restricted recourse LP returned status '" +
                      std::string(to_string(sol.status)) + "'");
  }

  RecourseState st;
  st.pool = std::move(pool);
  st.costs = std::move(costs);
  st.h_lower = sol.objective;
  st.probabilities.resize(st.pool.size());
  st.contributions.resize(st.pool.size());
  for (std::size_t k = 0; k < st.pool.size(); ++k) {
    st.probabilities[k] = std::max(0.0, sol.primal[k]);
    st.contributions[k] = st.costs[k] * st.probabilities[k];
  }
  st.basis_reported = sol.has_basis();
  if (st.basis_reported) {
    st.basic.resize(st.pool.size());
    for (std::size_t k = 0; k < st.pool.size(); ++k) {
      st.basic[k] = sol.col_basis[k] == BasisStatus::kBasic;
    }
  }
  // Sensitivity duals of a maximization: the mu_upper side is priced by a
  // positive multiplier, the mu_lower side by a negative one.
  st.duals.alpha0 = sol.row_duals[0];
  st.duals.alpha_upper.resize(d);
  st.duals.alpha_lower.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double y = sol.row_duals[i + 1];
    st.duals.alpha_upper[i] = std::max(y, 0.0);
    st.duals.alpha_lower[i] = std::max(-y, 0.0);
  }
  st.initial_pool_size = st.pool.size();
  return st;
}

RecourseState constrained_recourse(const CaseData& data, const LongTermScenario& sc,
                                   const std::vector<double>& x,
                                   std::vector<NetDemandPoint> pool,
                                   const RecourseOptions& options) {
  std::vector<double> costs;
  costs.reserve(pool.size());
  for (const NetDemandPoint& p : pool) {
    costs.push_back(dispatch_cost(data, sc, x, p.values, options.solver).cost);
  }
  return constrained_recourse(sc, std::move(pool), std::move(costs), options.solver);
}

BruteForceResult recourse_bruteforce(const CaseData& data, const LongTermScenario& sc,
                                     const std::vector<double>& x,
                                     const RecourseOptions& options) {
  std::vector<NetDemandPoint> vertices = enumerate_vertices(sc.support, options.vertex_cap);
  RecourseState st = constrained_recourse(data, sc, x, std::move(vertices), options);
  BruteForceResult r;
  r.h_dr = st.h_lower;
  r.vertices = std::move(st.pool);
  r.costs = std::move(st.costs);
  r.probabilities = std::move(st.probabilities);
  return r;
}

OracleResult oracle_max_reduced_cost(const CaseData& data, const LongTermScenario& sc,
                                     const std::vector<double>& x, const MomentDuals& duals,
                                     const RecourseOptions& options) {
  const BoxSupport& box = sc.support;
  const std::size_t d = box.dimension();
  const auto m = static_cast<std::size_t>(data.periods.dims_per_period);
  const auto periods = static_cast<std::size_t>(data.periods.count);
  const std::size_t buses = data.network.bus_count();
  const double hours = data.periods.hours;
  if (duals.alpha_upper.size() != d || duals.alpha_lower.size() != d) {
    throw Error("moment duals have the wrong dimension");
  }
  const std::vector<double> gamma = duals.gamma();

  // Dispatch dual at xi = box.lower; the uncertain part enters through
  // w_k = u_k * (B' pi)_k with u_k selecting the upper bound of dimension k.
  DispatchBlock block;
  const LinearModel primal = build_dispatch_model(data, sc, x, box.lower, &block);
  const DualModel base = build_dual(primal);

  std::vector<double> implied(buses);
  for (std::size_t n = 0; n < buses; ++n) {
    implied[n] = hours * std::max(sc.shed_cost[n], sc.surplus_cost[n]);
  }
  std::vector<double> bound(buses);
  for (std::size_t n = 0; n < buses; ++n) {
    bound[n] = std::max(options.pi_bound_scale * implied[n], 1e-9);
  }

  OracleResult result;
  for (int escalation = 0;; ++escalation) {
    LinearModel milp = base.model;
    std::vector<std::vector<int>> pi(periods, std::vector<int>(buses));
    for (std::size_t t = 0; t < periods; ++t) {
      for (std::size_t n = 0; n < buses; ++n) {
        pi[t][n] = base.row_lower[static_cast<std::size_t>(block.balance[t][n])];
        milp.set_bounds(pi[t][n], -bound[n], bound[n]);
      }
    }
    double offset = -duals.alpha0;
    std::vector<int> u(d, -1);
    for (std::size_t k = 0; k < d; ++k) {
      offset -= gamma[k] * box.lower[k];
      const double delta = box.upper[k] - box.lower[k];
      if (delta <= 0.0) continue;
      const std::size_t t = k / m;
      const std::size_t j = k % m;
      std::vector<Term> s_terms;
      double s_bound = 0.0;
      for (std::size_t n = 0; n < buses; ++n) {
        const double coef = sc.allocation[t](n, j);
        if (coef == 0.0) continue;
        s_terms.push_back({pi[t][n], coef});
        s_bound += std::abs(coef) * bound[n];
      }
      u[k] = milp.add_binary(-gamma[k] * delta);
      const int w = milp.add_variable(-s_bound, s_bound, delta);
      auto with = [&](std::initializer_list<Term> extra, double sign) {
        std::vector<Term> row(extra);
        for (const Term& s : s_terms) row.push_back({s.var, sign * s.coef});
        return row;
      };
      // McCormick envelope of w = u * s with |s| <= s_bound.
      milp.add_constraint(-kInf, 0.0, {{w, 1.0}, {u[k], -s_bound}});
      milp.add_constraint(0.0, kInf, {{w, 1.0}, {u[k], s_bound}});
      milp.add_constraint(-kInf, s_bound, with({{w, 1.0}, {u[k], s_bound}}, -1.0));
      milp.add_constraint(-s_bound, kInf, with({{w, 1.0}, {u[k], -s_bound}}, -1.0));
    }
    milp.add_offset(offset);

    Solution sol = solve_mip(milp, options.oracle_mip_gap, options.oracle_time_limit_s,
                             options.solver);
    if (!sol.ok() && !(sol.status == SolveStatus::kTimeLimit && !sol.primal.empty())) {
      throw SolverError("oracle MILP returned status '" + std::string(to_string(sol.status)) +
                        "'");
    }

    // Escalate only bounds that are active and not already implied by the
    // shed/surplus columns, which confine pi to [-h l+, h l-].
    bool escalate = false;
    for (std::size_t t = 0; t < periods; ++t) {
      for (std::size_t n = 0; n < buses; ++n) {
        const double v = std::abs(sol.primal[static_cast<std::size_t>(pi[t][n])]);
        if (v >= bound[n] * (1.0 - 1e-6) && bound[n] < implied[n]) {
          bound[n] *= 10.0;
          escalate = true;
        }
      }
    }
    if (escalate) {
      if (escalation >= options.max_price_escalations) {
        throw PriceBoundExhausted(*std::max_element(bound.begin(), bound.end()) / 10.0,
                                  escalation);
      }
      continue;
    }

    result.c_star = sol.objective;
    result.c_star_bound = std::max(sol.objective, sol.mip_dual_bound);
    result.escalations = escalation;
    result.max_price_bound = *std::max_element(bound.begin(), bound.end());
    result.xi_star.origin = PointOrigin::kVertex;
    result.xi_star.values = box.lower;
    double affine = duals.alpha0;
    for (std::size_t k = 0; k < d; ++k) {
      if (u[k] >= 0 && sol.primal[static_cast<std::size_t>(u[k])] > 0.5) {
        result.xi_star.values[k] = box.upper[k];
      }
      affine += gamma[k] * result.xi_star.values[k];
    }
    result.internal_dispatch_value = sol.objective + affine;
    return result;
  }
}

RecourseState dwp_inner_loop(const CaseData& data, const LongTermScenario& sc,
                             const std::vector<double>& x, std::vector<NetDemandPoint> pool,
                             int max_inner, double eps, const RecourseOptions& options) {
  if (max_inner < 1) throw Error("inner iteration limit L must be at least 1");
  if (!(eps >= 0.0)) throw Error("DWP tolerance must be nonnegative");

  const std::size_t initial = pool.size();
  std::vector<double> costs;
  costs.reserve(pool.size() + static_cast<std::size_t>(max_inner));
  for (const NetDemandPoint& p : pool) {
    costs.push_back(dispatch_cost(data, sc, x, p.values, options.solver).cost);
  }

  RecourseState st;
  for (int n = 1;; ++n) {
    st = constrained_recourse(sc, pool, costs, options.solver);
    OracleResult orc = oracle_max_reduced_cost(data, sc, x, st.duals, options);
    st.c_star = orc.c_star;
    st.c_star_bound = orc.c_star_bound;
    st.xi_star = orc.xi_star;
    st.inner_iterations = n;
    st.initial_pool_size = initial;

    if (orc.c_star <= eps) {
      st.converged = orc.c_star_bound <= eps;
      break;
    }
    const bool seen = std::any_of(pool.begin(), pool.end(), [&](const NetDemandPoint& p) {
      return p.same_values(orc.xi_star);
    });
    if (seen) {
      st.duplicate_stop = true;
      break;
    }
    pool.push_back(orc.xi_star);
    costs.push_back(dispatch_cost(data, sc, x, orc.xi_star.values, options.solver).cost);
    if (n >= max_inner) {
      // The appended point has not been priced by an LP yet: p = 0.
      st.pool = pool;
      st.costs = costs;
      st.probabilities.push_back(0.0);
      st.contributions.push_back(0.0);
      if (st.basis_reported) st.basic.push_back(false);
      break;
    }
  }
  return st;
}

double recourse_upper_bound(const RecourseState& state) {
  const double c = std::isnan(state.c_star_bound) ? state.c_star : state.c_star_bound;
  return state.h_lower + std::max(c, 0.0);
}

}  // namespace drotep

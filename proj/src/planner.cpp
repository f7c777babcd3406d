#include "drotep/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "drotep/dispatch.hpp"
#include "drotep/error.hpp"
#include "parallel.hpp"

namespace drotep {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> ids_of(const CaseData& data) {
  std::vector<std::string> ids;
  for (const auto& sc : data.scenarios) ids.push_back(sc.id);
  return ids;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kFva: return "fva";
    case Mode::kCcg: return "ccg";
    case Mode::kEccg: return "eccg";
    case Mode::kAro: return "aro";
    case Mode::kDtep: return "dtep";
  }
  return "eccg";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::kFva, Mode::kCcg, Mode::kEccg, Mode::kAro, Mode::kDtep}) {
    if (text == to_string(m)) return m;
  }
  throw Error("unknown mode '" + std::string(text) + "' (expected fva, ccg, eccg, aro or dtep)");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kConvergedAtDwpTolerance: return "converged-at-dwp-tolerance";
    case RunStatus::kIterationLimit: return "iteration-limit";
    case RunStatus::kTimeLimit: return "time-limit";
  }
  return "converged";
}

RunConfig RunConfig::effective() const {
  RunConfig c = *this;
  if (c.mode == Mode::kCcg) {
    c.top_m = 1;
    c.max_inner = 1;
  }
  return c;
}

void RunConfig::validate() const {
  const RunConfig c = effective();
  if (!(c.eps_global >= 0.0)) throw ValidationError("eps", "must be nonnegative");
  if (!(c.eps_dwp >= 0.0)) throw ValidationError("epsdwp", "must be nonnegative");
  if (c.max_inner < 1) throw ValidationError("L", "must be at least 1");
  if (c.top_m < 1) throw ValidationError("M", "must be at least 1");
  if (c.top_m > c.max_inner) throw ValidationError("M", "must not exceed L");
  if (!(c.master_mip_gap >= 0.0)) throw ValidationError("master_mip_gap", "must be nonnegative");
  if (!(c.oracle_mip_gap >= 0.0)) throw ValidationError("oracle_mip_gap", "must be nonnegative");
  if (c.max_iterations < 1) throw ValidationError("max_iterations", "must be at least 1");
  if (!(c.time_limit_s > 0.0)) throw ValidationError("time_limit_s", "must be positive");
  if (!(c.pi_bound_scale > 0.0)) throw ValidationError("pi_bound_scale", "must be positive");
}

RecourseOptions RunConfig::recourse_options() const {
  RecourseOptions o;
  o.oracle_mip_gap = oracle_mip_gap;
  o.pi_bound_scale = pi_bound_scale;
  o.vertex_cap = vertex_cap;
  o.solver = solver;
  return o;
}

double relative_gap(double lb, double ub) {
  if (ub == lb) return 0.0;
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  const double scale = std::abs(ub);
  const double gap = scale > 0.0 ? (ub - lb) / scale : ub - lb;
  // Bounds that cross by round-off count as closed.
  return gap < 0.0 && gap > -1e-9 ? 0.0 : gap;
}

double PlanResult::gap() const { return relative_gap(lb, ub); }

std::size_t PlanResult::new_lines() const {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v > 0.5; }));
}

MasterResult solve_master(const CaseData& data,
                          const std::vector<std::vector<NetDemandPoint>>& pools, double mip_gap,
                          double time_limit_s, const SolverOptions& solver) {
  const auto start = Clock::now();
  if (pools.size() != data.scenarios.size()) throw Error("one pool per scenario is required");
  const Network& net = data.network;
  const std::size_t d = data.dimension();

  LinearModel model;
  std::vector<int> xcols;
  std::vector<Term> budget_row;
  std::vector<Term> count_row;
  for (const CandidateLine& line : net.candidate_lines) {
    int v = model.add_binary(line.cost);
    xcols.push_back(v);
    budget_row.push_back({v, line.cost});
    count_row.push_back({v, 1.0});
  }
  if (data.investment_policy.budget) {
    model.add_constraint(-kInf, *data.investment_policy.budget, budget_row);
  }
  if (data.investment_policy.max_new_lines) {
    model.add_constraint(-kInf, *data.investment_policy.max_new_lines, count_row);
  }
  const InvestmentRef xref = InvestmentRef::variables(xcols);

  struct AlphaCols {
    int a0;
    std::vector<int> up;
    std::vector<int> lo;
  };
  std::vector<AlphaCols> alphas;
  for (std::size_t w = 0; w < data.scenarios.size(); ++w) {
    const LongTermScenario& sc = data.scenarios[w];
    if (pools[w].empty()) throw Error("master pool for scenario '" + sc.id + "' is empty");
    AlphaCols a;
    a.a0 = model.add_variable(-kInf, kInf, sc.weight);
    for (std::size_t i = 0; i < d; ++i) {
      a.up.push_back(model.add_variable(0.0, kInf, sc.weight * sc.moments.mu_upper[i]));
      a.lo.push_back(model.add_variable(0.0, kInf, -sc.weight * sc.moments.mu_lower[i]));
    }
    for (const NetDemandPoint& p : pools[w]) {
      DispatchBlock block = append_dispatch_block(model, data, sc, xref, p.values);
      // alpha0 + (alpha_up - alpha_lo)' xi >= operating cost of this block.
      std::vector<Term> row{{a.a0, 1.0}};
      for (std::size_t i = 0; i < d; ++i) {
        row.push_back({a.up[i], p.values[i]});
        row.push_back({a.lo[i], -p.values[i]});
      }
      for (const Term& c : block.cost) row.push_back({c.var, -c.coef});
      model.add_constraint(0.0, kInf, row);
    }
    alphas.push_back(std::move(a));
  }

  Solution sol = solve_mip(model, mip_gap, time_limit_s, solver);
  if (!sol.ok() && !(sol.status == SolveStatus::kTimeLimit && !sol.primal.empty())) {
    throw SolverError("master problem returned status '" + std::string(to_string(sol.status)) +
                      "'");
  }
  MasterResult r;
  for (int v : xcols) r.x.push_back(sol.primal[static_cast<std::size_t>(v)] > 0.5 ? 1.0 : 0.0);
  r.objective = sol.objective;
  r.lb = std::min(sol.mip_dual_bound, sol.objective);
  for (const AlphaCols& a : alphas) {
    MomentDuals md;
    md.alpha0 = sol.primal[static_cast<std::size_t>(a.a0)];
    for (int v : a.up) md.alpha_upper.push_back(sol.primal[static_cast<std::size_t>(v)]);
    for (int v : a.lo) md.alpha_lower.push_back(sol.primal[static_cast<std::size_t>(v)]);
    r.duals.push_back(std::move(md));
  }
  r.time_s = seconds_since(start);
  return r;
}

PlanResult solve_fva(const CaseData& data, const RunConfig& config) {
  config.validate();
  const auto start = Clock::now();
  std::vector<std::vector<NetDemandPoint>> pools;
  for (const LongTermScenario& sc : data.scenarios) {
    pools.push_back(enumerate_vertices(sc.support, config.vertex_cap));
  }
  MasterResult m = solve_master(data, pools, config.master_mip_gap, config.time_limit_s,
                                config.solver);
  PlanResult r;
  r.mode = Mode::kFva;
  r.scenario_ids = ids_of(data);
  r.x = m.x;
  r.z = m.objective;
  r.lb = m.lb;
  r.ub = m.objective;
  r.investment_cost = data.investment_cost(m.x);
  r.lb_trace = {r.lb};
  r.ub_trace = {r.ub};
  r.iterations = 1;
  r.solve_time_s = seconds_since(start);
  IterationRecord rec;
  rec.iter = 1;
  rec.x = m.x;
  rec.lb = r.lb;
  rec.ub = r.ub;
  rec.ub_best = r.ub;
  rec.gap = rec.gap_iter = relative_gap(r.lb, r.ub);
  rec.t_master_s = m.time_s;
  rec.t_iter_s = r.solve_time_s;
  rec.t_accum_s = r.solve_time_s;
  rec.inner_iters.assign(data.scenarios.size(), 0);
  rec.added.assign(data.scenarios.size(), 0);
  r.trace.push_back(std::move(rec));
  r.status = RunStatus::kConverged;
  return r;
}

std::vector<ScenarioCandidate> select_top_m(std::vector<ScenarioCandidate> candidates,
                                            std::size_t m) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ScenarioCandidate& a, const ScenarioCandidate& b) {
                     if (a.contribution != b.contribution) return a.contribution > b.contribution;
                     if (a.cost != b.cost) return a.cost > b.cost;
                     return a.index < b.index;
                   });
  if (candidates.size() > m) candidates.resize(m);
  return candidates;
}

std::vector<ScenarioCandidate> new_scenarios(const RecourseState& state) {
  std::vector<ScenarioCandidate> out;
  for (std::size_t k = state.initial_pool_size; k < state.pool.size(); ++k) {
    out.push_back({k, state.contributions[k], state.costs[k]});
  }
  return out;
}

PlanResult run_eccg(const CaseData& data, const RunConfig& config_in) {
  config_in.validate();
  const RunConfig config = config_in.effective();
  const RecourseOptions ropts = config.recourse_options();
  const std::size_t n_scen = data.scenarios.size();
  const auto start = Clock::now();

  std::vector<std::vector<NetDemandPoint>> pools;
  for (const LongTermScenario& sc : data.scenarios) pools.push_back({dummy_scenario(sc)});

  PlanResult r;
  r.mode = config.mode;
  r.scenario_ids = ids_of(data);
  r.status = RunStatus::kIterationLimit;
  double ub_best = kInf;

  for (int j = 1; j <= config.max_iterations; ++j) {
    const auto iter_start = Clock::now();
    const double remaining = config.time_limit_s - seconds_since(start);
    MasterResult master =
        solve_master(data, pools, config.master_mip_gap, std::max(remaining, 1e-3), config.solver);

    const auto dwp_start = Clock::now();
    std::vector<RecourseState> states = detail::parallel_map(n_scen, config.threads, [&](std::size_t w) {
      return dwp_inner_loop(data, data.scenarios[w], master.x, pools[w], config.max_inner,
                            config.eps_dwp, ropts);
    });
    const double t_dwp = seconds_since(dwp_start);

    double ub = data.investment_cost(master.x);
    for (std::size_t w = 0; w < n_scen; ++w) {
      ub += data.scenarios[w].weight * recourse_upper_bound(states[w]);
    }
    if (ub < ub_best) {
      ub_best = ub;
      r.x = master.x;
      r.final_states = states;
    }

    IterationRecord rec;
    rec.iter = j;
    rec.x = master.x;
    rec.lb = master.lb;
    rec.ub = ub;
    rec.ub_best = ub_best;
    rec.gap = relative_gap(master.lb, ub_best);
    rec.gap_iter = relative_gap(master.lb, ub);
    rec.t_master_s = master.time_s;
    rec.t_dwp_s = t_dwp;
    for (const RecourseState& st : states) rec.inner_iters.push_back(st.inner_iterations);
    rec.added.assign(n_scen, 0);

    r.lb = master.lb;
    r.ub = ub_best;
    r.lb_trace.push_back(master.lb);
    r.ub_trace.push_back(ub);
    r.iterations = j;

    bool done = false;
    if (rec.gap <= config.eps_global) {
      r.status = RunStatus::kConverged;
      done = true;
    } else {
      bool any_new = false;
      for (std::size_t w = 0; w < n_scen; ++w) {
        auto chosen = select_top_m(new_scenarios(states[w]), static_cast<std::size_t>(config.top_m));
        for (const ScenarioCandidate& c : chosen) pools[w].push_back(states[w].pool[c.index]);
        rec.added[w] = chosen.size();
        any_new = any_new || !chosen.empty();
      }
      if (!any_new) {
        r.status = RunStatus::kConvergedAtDwpTolerance;
        done = true;
      }
    }
    rec.t_iter_s = seconds_since(iter_start);
    rec.t_accum_s = seconds_since(start);
    r.trace.push_back(std::move(rec));
    if (done) break;
    if (seconds_since(start) >= config.time_limit_s) {
      r.status = RunStatus::kTimeLimit;
      break;
    }
  }

  r.z = r.ub;
  r.investment_cost = data.investment_cost(r.x);
  r.solve_time_s = seconds_since(start);
  return r;
}

CaseData make_reduction(const CaseData& data, Mode mode) {
  CaseData out = data;
  for (LongTermScenario& sc : out.scenarios) {
    if (mode == Mode::kAro) {
      sc.moments.mu_lower = sc.support.lower;
      sc.moments.mu_upper = sc.support.upper;
    } else if (mode == Mode::kDtep) {
      const NetDemandPoint mid = dummy_scenario(sc);
      sc.support.lower = sc.support.upper = mid.values;
      sc.moments.mu_lower = sc.moments.mu_upper = mid.values;
    }
  }
  return out;
}

PlanResult solve_plan(const CaseData& data, const RunConfig& config) {
  switch (config.mode) {
    case Mode::kFva:
      return solve_fva(data, config);
    case Mode::kCcg:
    case Mode::kEccg:
      return run_eccg(data, config);
    case Mode::kAro:
    case Mode::kDtep: {
      const CaseData reduced = make_reduction(data, config.mode);
      PlanResult r = config.reduction_solver == ReductionSolver::kFva ? solve_fva(reduced, config)
                                                                       : run_eccg(reduced, config);
      r.mode = config.mode;
      return r;
    }
  }
  throw Error("unhandled mode");
}

}  // namespace drotep

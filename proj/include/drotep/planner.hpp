#pragma once

// Investment-level algorithms: the extensive full-vertex MILP (FVA), the
// master problem over scenario pools, and the CCG / enhanced-CCG main loop.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drotep/case.hpp"
#include "drotep/recourse.hpp"
#include "drotep/solver.hpp"
#include "drotep/uncertainty.hpp"

namespace drotep {

enum class Mode { kFva, kCcg, kEccg, kAro, kDtep };

std::string_view to_string(Mode mode);
/// Accepts fva, ccg, eccg, aro, dtep; throws Error otherwise.
Mode parse_mode(std::string_view text);

/// How aro / dtep reductions are solved once the case is transformed.
enum class ReductionSolver { kEccg, kFva };

struct RunConfig {
  Mode mode = Mode::kEccg;
  double eps_global = 0.01;  // relative main-loop gap
  double eps_dwp = 0.10;     // $, inner-loop reduced-cost tolerance
  int max_inner = 20;        // L
  int top_m = 1;             // M
  double master_mip_gap = 0.005;
  double oracle_mip_gap = 0.0;
  int max_iterations = 100;
  double time_limit_s = kInf;
  std::uint64_t seed = 0;
  /// Worker threads for the per-scenario inner loops; 0 = hardware.
  int threads = 0;
  ReductionSolver reduction_solver = ReductionSolver::kEccg;
  double pi_bound_scale = 1.0;
  std::size_t vertex_cap = kDefaultVertexCap;
  SolverOptions solver;

  /// ccg forces M = L = 1.
  RunConfig effective() const;
  /// Throws ValidationError for out-of-range settings.
  void validate() const;
  RecourseOptions recourse_options() const;
};

enum class RunStatus {
  kConverged,
  kConvergedAtDwpTolerance,  // no new scenarios, gap may exceed eps_global
  kIterationLimit,
  kTimeLimit,
};

std::string_view to_string(RunStatus status);

struct IterationRecord {
  int iter = 0;
  std::vector<double> x;
  double lb = 0.0;
  double ub = 0.0;       // this iteration's bound
  double ub_best = 0.0;  // incumbent
  double gap = 0.0;      // 1 - lb / ub_best
  double gap_iter = 0.0; // 1 - lb / ub
  double t_master_s = 0.0;
  double t_dwp_s = 0.0;
  double t_iter_s = 0.0;
  double t_accum_s = 0.0;
  std::vector<int> inner_iters;        // per scenario
  std::vector<std::size_t> added;      // scenarios added to each master pool
};

struct PlanResult {
  Mode mode = Mode::kEccg;
  std::vector<std::string> scenario_ids;
  std::vector<double> x;
  double z = 0.0;  // objective of x (incumbent upper bound for decompositions)
  double lb = 0.0;
  double ub = 0.0;
  double investment_cost = 0.0;
  std::vector<double> lb_trace;
  std::vector<double> ub_trace;
  std::vector<IterationRecord> trace;
  /// Inner-loop state at the incumbent, one per scenario (decompositions).
  std::vector<RecourseState> final_states;
  RunStatus status = RunStatus::kConverged;
  int iterations = 0;
  double solve_time_s = 0.0;

  /// 1 - lb / ub (0 when ub == lb).
  double gap() const;
  std::size_t new_lines() const;
};

/// Relative gap between two bounds, 1 - lb/ub for positive ub.
double relative_gap(double lb, double ub);

struct MasterResult {
  std::vector<double> x;
  double lb = 0.0;         // MIP dual bound
  double objective = 0.0;  // incumbent value
  std::vector<MomentDuals> duals;
  double time_s = 0.0;
};

/// Master over per-scenario pools: dispatch block per pooled point, moment
/// dual variables per scenario. With full vertex pools this is the FVA MILP.
MasterResult solve_master(const CaseData& data,
                          const std::vector<std::vector<NetDemandPoint>>& pools,
                          double mip_gap, double time_limit_s = kInf,
                          const SolverOptions& solver = {});

PlanResult solve_fva(const CaseData& data, const RunConfig& config);

PlanResult run_eccg(const CaseData& data, const RunConfig& config);

/// Dispatches on config.mode (applying reductions for aro / dtep).
PlanResult solve_plan(const CaseData& data, const RunConfig& config);

struct ScenarioCandidate {
  std::size_t index = 0;  // position in the pool (discovery order)
  double contribution = 0.0;
  double cost = 0.0;
};

/// The M highest contributions; ties by larger cost, then earlier discovery.
std::vector<ScenarioCandidate> select_top_m(std::vector<ScenarioCandidate> candidates,
                                            std::size_t m);

/// Points appended by the inner loop, as ranking candidates.
std::vector<ScenarioCandidate> new_scenarios(const RecourseState& state);

/// aro: moments widened to the support box. dtep: support and moments
/// collapsed to the moment midpoint.
CaseData make_reduction(const CaseData& data, Mode mode);

}  // namespace drotep

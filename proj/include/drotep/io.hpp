#pragma once

// Output artifacts (plan.json, trace.csv, report.json/csv, compare.csv) and
// run-configuration files. Every artifact embeds the configuration and seed.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "drotep/case.hpp"
#include "drotep/evaluation.hpp"
#include "drotep/planner.hpp"

namespace drotep {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Key/value description of a run configuration (mode, tolerances, seed, ...).
Metadata describe(const RunConfig& config);

/// Shortest decimal form that round-trips; integers print without exponent.
std::string format_number(double value);

/// With timings == false every wall-clock field is written as 0 so that
/// repeated runs produce byte-identical files.
std::string plan_to_json(const PlanResult& plan, const CaseData& data, const RunConfig& config,
                         bool timings = true);

/// Columns: method, iter, t_master_s, t_dwp_s, t_iter_s, t_accum_s, gap_pct,
/// inner_iters_<id>..., then lb, ub, ub_best, gap_iter_pct. Metadata lines
/// start with '#'.
std::string trace_to_csv(const PlanResult& plan, const CaseData& data, const RunConfig& config,
                         bool timings = true);

/// Investment vector of a plan.json; throws Error if it does not match the
/// case's candidate count.
std::vector<double> read_plan_x(const std::filesystem::path& path, const CaseData& data);

std::string report_to_json(const SimulationReport& report, const CaseData& data);
std::string report_to_csv(const SimulationReport& report, const CaseData& data);

struct CompareRow {
  Mode mode = Mode::kEccg;
  std::string status;  // run status, "cap-exceeded" or "error"
  std::string message;
  bool ok = false;
  PlanResult result;
};

/// Columns: mode, status, new_lines, investment_cost, total_cost, lb, ub,
/// gap_pct, solve_time_s, iterations, x.
std::string compare_to_csv(const std::vector<CompareRow>& rows, const CaseData& data,
                           const RunConfig& config, bool timings = true);

/// Reads a JSON run configuration on top of `base`. Keys: mode, eps,
/// epsdwp, L, M, master_mip_gap, oracle_mip_gap, max_iterations,
/// time_limit_s, seed, threads, reduction_solver, pi_bound_scale,
/// vertex_cap and solver.{backend, threads, time_limit_s}.
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});
RunConfig parse_run_config(const std::string& json_text, RunConfig base = {});

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace drotep

#include "drotep/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "drotep/case.hpp"
#include "drotep/error.hpp"
#include "drotep/evaluation.hpp"
#include "drotep/io.hpp"
#include "drotep/planner.hpp"

namespace drotep {
namespace {

namespace fs = std::filesystem;

struct SolveFlags {
  std::string mode;
  std::optional<double> eps;
  std::optional<double> epsdwp;
  std::optional<int> L;
  std::optional<int> M;
  std::optional<std::uint64_t> seed;
  std::optional<double> master_gap;
  std::optional<double> oracle_gap;
  std::optional<int> max_iter;
  std::optional<double> time_limit;
  std::optional<int> threads;
  std::optional<std::string> reduction_solver;
  std::optional<std::string> backend;
  std::string config;
  std::string out = ".";
  bool no_timings = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f, bool with_mode) {
  if (with_mode) {
    cmd->add_option("--mode", f.mode, "fva | ccg | eccg | aro | dtep (default eccg)")
        ->check(CLI::IsMember({"fva", "ccg", "eccg", "aro", "dtep"}));
  }
  cmd->add_option("--eps", f.eps, "relative main-loop gap (default 0.01)");
  cmd->add_option("--epsdwp", f.epsdwp, "inner-loop reduced-cost tolerance in $ (default 0.10)");
  cmd->add_option("-L", f.L, "max inner iterations (default 20)");
  cmd->add_option("-M", f.M, "scenarios added per main iteration (default 1)");
  cmd->add_option("--seed", f.seed, "seed recorded in outputs (default 0)");
  cmd->add_option("--master-gap", f.master_gap, "master MIP relative gap (default 0.005)");
  cmd->add_option("--oracle-gap", f.oracle_gap, "oracle MIP relative gap (default 0)");
  cmd->add_option("--max-iter", f.max_iter, "max main iterations (default 100)");
  cmd->add_option("--time-limit", f.time_limit, "wall-clock limit in seconds (default none)");
  cmd->add_option("--threads", f.threads, "workers for per-scenario loops (default: hardware)");
  cmd->add_option("--reduction-solver", f.reduction_solver, "eccg | fva for aro/dtep (default eccg)")
      ->check(CLI::IsMember({"eccg", "fva"}));
  cmd->add_option("--backend", f.backend, "LP/MILP backend (default highs; env DRO_TEP_SOLVER_BACKEND)");
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--out", f.out, "output directory (default .)");
  cmd->add_flag("--no-timings", f.no_timings, "write wall-clock fields as 0");
}

RunConfig build_config(const SolveFlags& f) {
  RunConfig c;
  c.solver = options_from_environment(c.solver);
  if (!f.config.empty()) c = load_run_config(f.config, c);
  if (!f.mode.empty()) c.mode = parse_mode(f.mode);
  if (f.eps) c.eps_global = *f.eps;
  if (f.epsdwp) c.eps_dwp = *f.epsdwp;
  if (f.L) c.max_inner = *f.L;
  if (f.M) c.top_m = *f.M;
  if (f.seed) c.seed = *f.seed;
  if (f.master_gap) c.master_mip_gap = *f.master_gap;
  if (f.oracle_gap) c.oracle_mip_gap = *f.oracle_gap;
  if (f.max_iter) c.max_iterations = *f.max_iter;
  if (f.time_limit) c.time_limit_s = *f.time_limit;
  if (f.threads) c.threads = *f.threads;
  if (f.reduction_solver) {
    c.reduction_solver = *f.reduction_solver == "fva" ? ReductionSolver::kFva : ReductionSolver::kEccg;
  }
  if (f.backend) c.solver.backend = *f.backend;
  make_backend(c.solver.backend);  // reject unknown names early
  c.validate();
  return c;
}

int exit_code_for(const PlanResult& r, const RunConfig& c) {
  switch (r.status) {
    case RunStatus::kConverged:
      return kExitOk;
    case RunStatus::kConvergedAtDwpTolerance:
      return r.gap() <= c.eps_global ? kExitOk : kExitLimit;
    case RunStatus::kIterationLimit:
    case RunStatus::kTimeLimit:
      return kExitLimit;
  }
  return kExitLimit;
}

int cmd_solve(const std::string& case_path, const SolveFlags& flags, std::ostream& out) {
  const CaseData data = load_case(case_path);
  const RunConfig config = build_config(flags);
  const PlanResult r = solve_plan(data, config);
  const fs::path dir(flags.out);
  write_text(dir / "plan.json", plan_to_json(r, data, config, !flags.no_timings));
  write_text(dir / "trace.csv", trace_to_csv(r, data, config, !flags.no_timings));
  out << "mode=" << to_string(r.mode) << " status=" << to_string(r.status)
      << " z=" << format_number(r.z) << " lb=" << format_number(r.lb)
      << " ub=" << format_number(r.ub) << " gap_pct=" << format_number(100.0 * r.gap())
      << " iterations=" << r.iterations << " new_lines=" << r.new_lines() << '\n';
  return exit_code_for(r, config);
}

struct EvaluateFlags {
  std::string dist = "beta";
  std::optional<double> param;
  long long n = 5000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = ".";
  std::optional<std::string> backend;
};

int cmd_evaluate(const std::string& case_path, const std::string& plan_path,
                 const EvaluateFlags& f, std::ostream& out) {
  const CaseData data = load_case(case_path);
  const std::vector<double> x = read_plan_x(plan_path, data);
  if (f.n <= 0) throw Error("empty evaluation: --n must be at least 1");
  DistributionSpec spec;
  spec.family = parse_family(f.dist);
  spec.parameter = f.param.value_or(spec.family == DistributionFamily::kNormalCoverage ? 0.95 : 4.5);
  SolverOptions solver = options_from_environment();
  if (f.backend) solver.backend = *f.backend;
  const SimulationReport r = simulate_plan(x, data, spec, static_cast<std::size_t>(f.n), f.seed,
                                           f.threads, solver);
  const fs::path dir(f.out);
  write_text(dir / "report.json", report_to_json(r, data));
  write_text(dir / "report.csv", report_to_csv(r, data));
  for (const ScenarioReport& s : r.scenarios) {
    out << "scenario=" << s.id << " mean_cost=" << format_number(s.mean_dispatch_cost)
        << " ri_pct=" << format_number(s.ri_pct) << '\n';
  }
  out << "expected_total_cost=" << format_number(r.expected_total_cost)
      << " ri_weighted_pct=" << format_number(r.ri_weighted_pct) << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& case_path, const std::string& modes_text,
                const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  std::vector<Mode> modes;
  std::stringstream ss(modes_text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) modes.push_back(parse_mode(item));
  }
  if (modes.size() < 2) throw Error("compare needs at least two modes");
  const CaseData data = load_case(case_path);
  const RunConfig base = build_config(flags);

  std::vector<CompareRow> rows;
  bool failed = false;
  for (Mode m : modes) {
    RunConfig c = base;
    c.mode = m;
    CompareRow row;
    row.mode = m;
    try {
      row.result = solve_plan(data, c);
      row.ok = true;
      row.status = std::string(to_string(row.result.status));
    } catch (const VertexCapExceeded& e) {
      row.status = "cap-exceeded";
      row.message = e.what();
      failed = true;
    } catch (const Error& e) {
      row.status = "error";
      row.message = e.what();
      failed = true;
    }
    if (!row.ok) err << "mode " << to_string(m) << ": " << row.message << '\n';
    rows.push_back(std::move(row));
  }
  const std::string csv = compare_to_csv(rows, data, base, !flags.no_timings);
  write_text(fs::path(flags.out) / "compare.csv", csv);
  out << csv;
  return failed ? kExitLimit : kExitOk;
}

int cmd_validate(const std::string& case_path, std::ostream& out) {
  const CaseData data = load_case(case_path);
  out << "valid: " << (data.name.empty() ? case_path : data.name)
      << " buses=" << data.network.bus_count()
      << " existing_lines=" << data.network.existing_lines.size()
      << " candidates=" << data.network.candidate_count()
      << " generators=" << data.network.generator_count() << " d=" << data.dimension()
      << " scenarios=" << data.scenarios.size() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributionally robust transmission expansion planning"};
  app.require_subcommand(1);

  std::string case_path;
  std::string plan_path;
  std::string modes;
  SolveFlags solve_flags;
  SolveFlags compare_flags;
  EvaluateFlags eval_flags;

  CLI::App* solve = app.add_subcommand("solve", "plan investments for a case");
  solve->add_option("case", case_path, "case file (JSON)")->required();
  add_solve_flags(solve, solve_flags, true);

  CLI::App* evaluate = app.add_subcommand("evaluate", "out-of-sample evaluation of a plan");
  evaluate->add_option("case", case_path, "case file (JSON)")->required();
  evaluate->add_option("plan", plan_path, "plan.json from solve")->required();
  evaluate->add_option("--dist", eval_flags.dist, "normal | beta (default beta)")
      ->check(CLI::IsMember({"normal", "beta"}));
  evaluate->add_option("--param", eval_flags.param,
                       "coverage for normal (default 0.95), shape for beta (default 4.5)");
  evaluate->add_option("--n", eval_flags.n, "samples (days) per scenario (default 5000)");
  evaluate->add_option("--seed", eval_flags.seed, "sampling seed (default 0)");
  evaluate->add_option("--threads", eval_flags.threads, "dispatch workers (default: hardware)");
  evaluate->add_option("--backend", eval_flags.backend, "LP backend (default highs)");
  evaluate->add_option("--out", eval_flags.out, "output directory (default .)");

  CLI::App* compare = app.add_subcommand("compare", "run several modes and tabulate");
  compare->add_option("case", case_path, "case file (JSON)")->required();
  compare->add_option("--modes", modes, "comma-separated modes, at least two")->required();
  add_solve_flags(compare, compare_flags, false);

  CLI::App* validate = app.add_subcommand("validate", "check a case file");
  validate->add_option("case", case_path, "case file (JSON)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*solve) return cmd_solve(case_path, solve_flags, out);
    if (*evaluate) return cmd_evaluate(case_path, plan_path, eval_flags, out);
    if (*compare) return cmd_compare(case_path, modes, compare_flags, out, err);
    if (*validate) return cmd_validate(case_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace drotep

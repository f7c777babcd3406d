// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drotep/cli.hpp"
#include "drotep/dispatch.hpp"
#include "drotep/evaluation.hpp"
#include "drotep/planner.hpp"
#include "drotep/recourse.hpp"
#include "fixtures.hpp"

using namespace drotep;
using drotep::test::data_path;
using drotep::test::fixture_names;
using drotep::test::load;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures with the first few messages kept for the report.
class Checker {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary + " (" + std::to_string(checks_) + " checks)"};
    return {false, std::to_string(failures_) + "/" + std::to_string(checks_) +
                       " checks failed: " + messages_};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string messages_;
};

double rel(double v, double tol) { return tol * (1.0 + std::abs(v)); }

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

RunConfig config(Mode mode, double master_gap = 0.0) {
  RunConfig c;
  c.mode = mode;
  c.master_mip_gap = master_gap;
  return c;
}

std::vector<double> random_x(const CaseData& c, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> x(c.network.candidate_count());
  for (double& v : x) v = coin(rng) ? 1.0 : 0.0;
  return x;
}

std::vector<std::vector<double>> all_investments(std::size_t n) {
  std::vector<std::vector<double>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = (mask >> k) & 1 ? 1.0 : 0.0;
    out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  Checker ck;
  double worst_gap = 0.0, slowest = 0.0;
  for (const std::string& name : fixture_names()) {
    const auto t0 = std::chrono::steady_clock::now();
    CaseData c = load(name);
    const PlanResult fva = solve_fva(c, config(Mode::kFva));
    std::vector<std::pair<std::string, PlanResult>> runs;
    for (int m = 1; m <= 5; ++m) {
      RunConfig cfg;  // L = 20, epsdwp = 0.1, eps = 1%, default master gap
      cfg.top_m = m;
      runs.emplace_back("eccg M=" + std::to_string(m), run_eccg(c, cfg));
    }
    RunConfig ccg;
    ccg.mode = Mode::kCcg;
    runs.emplace_back("ccg", solve_plan(c, ccg));
    for (const auto& [label, r] : runs) {
      const double gap = std::abs(r.z - fva.z) / std::abs(fva.z);
      worst_gap = std::max(worst_gap, gap);
      ck.check(gap <= 0.01, name + " " + label + " z=" + num(r.z) + " vs fva " + num(fva.z));
      ck.check(r.status == RunStatus::kConverged, name + " " + label + " did not converge");
      if (name == "toy2.json") {
        ck.check(r.x == std::vector<double>{1.0}, "toy2 " + label + " x differs");
      }
    }
    if (name == "toy2.json") {
      ck.check(fva.x == std::vector<double>{1.0} && std::abs(fva.z - 2040.0) < 1e-5,
               "toy2 fva z=" + num(fva.z));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, secs);
    ck.check(secs < 60.0, name + " took " + num(secs) + " s");
  }
  return ck.outcome("max |z - z_fva|/z_fva = " + num(100 * worst_gap) + "%, slowest fixture " +
                    num(slowest) + " s");
}

Outcome theorem1_sandwich() {
  Checker ck;
  int iterations = 0;
  for (const std::string& name : fixture_names()) {
    CaseData c = load(name);
    const double z = solve_fva(c, config(Mode::kFva)).z;
    for (Mode mode : {Mode::kEccg, Mode::kCcg}) {
      RunConfig cfg = config(mode);
      cfg.top_m = mode == Mode::kEccg ? 2 : 1;
      const PlanResult r = solve_plan(c, cfg);
      for (const auto& rec : r.trace) {
        ++iterations;
        ck.check(rec.lb <= z + rel(z, 1e-5), name + " iter " + std::to_string(rec.iter) +
                                                 " LB " + num(rec.lb) + " > z* " + num(z));
        ck.check(rec.ub >= z - rel(z, 1e-5), name + " iter " + std::to_string(rec.iter) +
                                                 " UB " + num(rec.ub) + " < z* " + num(z));
      }
    }
    // epsilon-tight upper bound: zero DWP tolerance, L above the vertex count.
    RunConfig tight = config(Mode::kEccg);
    tight.eps_dwp = 0.0;
    std::size_t vertices = 0;
    for (const auto& sc : c.scenarios) vertices = std::max(vertices, vertex_count(sc.support));
    tight.max_inner = static_cast<int>(vertices) + 1;
    const PlanResult r = run_eccg(c, tight);
    for (const auto& rec : r.trace) {
      double exact = c.investment_cost(rec.x);
      for (const auto& sc : c.scenarios) exact += sc.weight * recourse_bruteforce(c, sc, rec.x).h_dr;
      ck.check(std::abs(rec.ub - exact) <= rel(exact, 1e-5),
               name + " tight UB " + num(rec.ub) + " vs exact " + num(exact));
    }
  }
  return ck.outcome(std::to_string(iterations) + " main iterations bracket z*; UB exact at epsdwp=0");
}

Outcome proposition1_sandwich() {
  Checker ck;
  std::mt19937_64 rng(2025);
  const auto names = fixture_names();
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  std::vector<CaseData> cases;
  for (const auto& n : names) cases.push_back(load(n));
  for (int probe = 0; probe < 100; ++probe) {
    const CaseData& c = cases[pick(rng)];
    std::uniform_int_distribution<std::size_t> pick_w(0, c.scenarios.size() - 1);
    const LongTermScenario& sc = c.scenarios[pick_w(rng)];
    const std::vector<double> x = random_x(c, rng);
    // Pool: dummy plus a random subset of vertices.
    std::vector<NetDemandPoint> pool{dummy_scenario(sc)};
    std::bernoulli_distribution keep(0.25);
    for (const auto& v : enumerate_vertices(sc.support)) {
      if (keep(rng)) pool.push_back(v);
    }
    const RecourseState s = constrained_recourse(c, sc, x, pool);
    const OracleResult o = oracle_max_reduced_cost(c, sc, x, s.duals);
    const double h = recourse_bruteforce(c, sc, x).h_dr;
    const std::string tag = c.name + " probe " + std::to_string(probe);
    ck.check(s.h_lower <= h + rel(h, 1e-5), tag + " H_lower " + num(s.h_lower) + " > " + num(h));
    ck.check(h <= s.h_lower + std::max(o.c_star, 0.0) + rel(h, 1e-5),
             tag + " H " + num(h) + " > H_lower + c* " + num(s.h_lower + o.c_star));
  }
  return ck.outcome("100 probes: H_lower <= H_DR <= H_lower + c*");
}

Outcome reduction_correctness() {
  Checker ck;
  CaseData toy = load("toy2.json");
  const PlanResult aro = solve_plan(toy, config(Mode::kAro));
  const PlanResult dtep = solve_plan(toy, config(Mode::kDtep));
  ck.check(std::abs(aro.z - 2200.0) < 1e-5 && aro.x == std::vector<double>{1.0},
           "toy2 aro z=" + num(aro.z));
  ck.check(std::abs(dtep.z - 1000.0) < 1e-5 && dtep.x == std::vector<double>{0.0},
           "toy2 dtep z=" + num(dtep.z));
  // Independent enumeration over every investment vector on every fixture.
  for (const std::string& name : fixture_names()) {
    CaseData c = load(name);
    double robust = kInf, nominal = kInf;
    for (const auto& x : all_investments(c.network.candidate_count())) {
      double worst_sum = 0.0, mid_sum = 0.0;
      for (const auto& sc : c.scenarios) {
        double worst = -kInf;
        for (const auto& v : enumerate_vertices(sc.support)) {
          worst = std::max(worst, dispatch_cost(c, sc, x, v.values).cost);
        }
        worst_sum += sc.weight * worst;
        mid_sum += sc.weight * dispatch_cost(c, sc, x, dummy_scenario(sc).values).cost;
      }
      robust = std::min(robust, c.investment_cost(x) + worst_sum);
      nominal = std::min(nominal, c.investment_cost(x) + mid_sum);
    }
    RunConfig exact_aro = config(Mode::kAro);
    exact_aro.reduction_solver = ReductionSolver::kFva;
    RunConfig exact_dtep = config(Mode::kDtep);
    exact_dtep.reduction_solver = ReductionSolver::kFva;
    const double z_aro = solve_plan(c, exact_aro).z;
    const double z_dtep = solve_plan(c, exact_dtep).z;
    ck.check(std::abs(z_aro - robust) <= rel(robust, 1e-6),
             name + " aro " + num(z_aro) + " vs enumeration " + num(robust));
    ck.check(std::abs(z_dtep - nominal) <= rel(nominal, 1e-6),
             name + " dtep " + num(z_dtep) + " vs enumeration " + num(nominal));
    // DRO with moments widened to the box equals the robust optimum.
    CaseData wide = c;
    for (auto& sc : wide.scenarios) sc.moments = {sc.support.lower, sc.support.upper};
    const double z_wide = solve_fva(wide, config(Mode::kFva)).z;
    ck.check(std::abs(z_wide - robust) <= rel(robust, 1e-6),
             name + " widened DRO " + num(z_wide) + " vs robust " + num(robust));
    // The default eccg reduction solver agrees within its tolerance.
    const double z_aro_eccg = solve_plan(c, config(Mode::kAro)).z;
    ck.check(std::abs(z_aro_eccg - robust) <= 0.01 * std::abs(robust),
             name + " aro via eccg " + num(z_aro_eccg));
  }
  return ck.outcome("toy2 aro 2200 x=(1), dtep 1000 x=(0); all fixtures match enumeration");
}

Outcome dispatch_properties() {
  Checker ck;
  std::mt19937_64 rng(500);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<CaseData> cases;
  for (const auto& n : fixture_names()) cases.push_back(load(n));
  double worst_duality = 0.0;
  for (int probe = 0; probe < 500; ++probe) {
    const CaseData& c = cases[static_cast<std::size_t>(probe) % cases.size()];
    const auto& sc = c.scenarios[static_cast<std::size_t>(probe / cases.size()) % c.scenarios.size()];
    const std::vector<double> x = random_x(c, rng);
    auto draw = [&] {
      std::vector<double> xi(c.dimension());
      for (std::size_t i = 0; i < xi.size(); ++i) {
        // Slightly beyond the box so slack behaviour is exercised too.
        const double lo = sc.support.lower[i], hi = sc.support.upper[i];
        xi[i] = lo - 0.1 * (hi - lo) + 1.2 * unit(rng) * (hi - lo);
      }
      return xi;
    };
    const std::vector<double> a = draw(), b = draw();
    const std::string tag = c.name + " probe " + std::to_string(probe);
    try {
      const DispatchResult ra = dispatch_cost(c, sc, x, a);
      const double dual = dispatch_dual_objective(c, sc, x, a, ra.row_duals, ra.col_duals);
      const double gap = std::abs(dual - ra.cost) / (1.0 + std::abs(ra.cost));
      worst_duality = std::max(worst_duality, gap);
      ck.check(gap <= 1e-6, tag + " duality gap " + num(gap));
      const double t = unit(rng);
      std::vector<double> mix(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) mix[i] = t * a[i] + (1 - t) * b[i];
      const double gb = dispatch_cost(c, sc, x, b).cost;
      const double gm = dispatch_cost(c, sc, x, mix).cost;
      const double chord = t * ra.cost + (1 - t) * gb;
      ck.check(gm <= chord + rel(chord, 1e-6), tag + " convexity " + num(gm) + " > " + num(chord));
      std::vector<double> more = x;
      for (double& v : more)
        if (coin(rng)) v = 1.0;
      const double gmore = dispatch_cost(c, sc, more, a).cost;
      ck.check(gmore <= ra.cost + rel(ra.cost, 1e-6),
               tag + " monotonicity " + num(gmore) + " > " + num(ra.cost));
    } catch (const std::exception& e) {
      ck.check(false, tag + " infeasible: " + e.what());
    }
  }
  return ck.outcome("500 probes feasible; max duality gap " + num(worst_duality) +
                    "; convexity and monotonicity hold");
}

Outcome remark_monotonicity() {
  Checker ck;
  std::mt19937_64 rng(4);
  std::vector<CaseData> cases;
  for (const auto& n : fixture_names()) cases.push_back(load(n));
  int strict = 0;
  const int states = 24;
  for (int s = 0; s < states; ++s) {
    const CaseData& c = cases[static_cast<std::size_t>(s) % cases.size()];
    // State: a random decision and pools grown by a short ECCG-style warmup.
    const std::vector<double> x = random_x(c, rng);
    std::vector<std::vector<NetDemandPoint>> pools;
    for (const auto& sc : c.scenarios) pools.push_back({dummy_scenario(sc)});
    const int warmup = s % 3;
    for (int w = 0; w < warmup; ++w) {
      const std::vector<double> wx = random_x(c, rng);
      for (std::size_t k = 0; k < c.scenarios.size(); ++k) {
        RecourseState st = dwp_inner_loop(c, c.scenarios[k], wx, pools[k], 20, 0.1);
        for (const auto& p : select_top_m(new_scenarios(st), 1)) pools[k].push_back(st.pool[p.index]);
      }
    }
    auto pools1 = pools, pools4 = pools;
    for (std::size_t k = 0; k < c.scenarios.size(); ++k) {
      RecourseState st = dwp_inner_loop(c, c.scenarios[k], x, pools[k], 20, 0.1);
      for (const auto& p : select_top_m(new_scenarios(st), 1)) pools1[k].push_back(st.pool[p.index]);
      for (const auto& p : select_top_m(new_scenarios(st), 4)) pools4[k].push_back(st.pool[p.index]);
    }
    const double lb1 = solve_master(c, pools1, 0.0).lb;
    const double lb4 = solve_master(c, pools4, 0.0).lb;
    ck.check(lb4 >= lb1 - rel(lb1, 1e-9),
             c.name + " state " + std::to_string(s) + " LB(M=4) " + num(lb4) + " < LB(M=1) " + num(lb1));
    if (lb4 > lb1 + rel(lb1, 1e-9)) ++strict;
  }
  return ck.outcome(std::to_string(states) + " states, LB(M=4) >= LB(M=1); strictly larger in " +
                    std::to_string(strict));
}

Outcome iteration_trend() {
  // Soft criterion: the trend is reported, only the trace layout is asserted.
  Checker ck;
  CaseData c = load("garver6_d6.json");
  RunConfig ccg_cfg;
  ccg_cfg.mode = Mode::kCcg;
  const PlanResult ccg = solve_plan(c, ccg_cfg);
  std::string counts = "ccg " + std::to_string(ccg.iterations);
  bool fewer = true;
  for (int m = 2; m <= 4; ++m) {
    RunConfig cfg;
    cfg.top_m = m;
    const PlanResult r = run_eccg(c, cfg);
    counts += ", eccg M=" + std::to_string(m) + " " + std::to_string(r.iterations);
    fewer = fewer && r.iterations < ccg.iterations;
  }
  const fs::path dir = fs::temp_directory_path() / "drotep_acceptance_trace";
  fs::remove_all(dir);
  std::ostringstream out, err;
  const int code = run_cli({"solve", data_path("garver6_d6.json"), "--mode", "ccg", "--out",
                            dir.string()},
                           out, err);
  ck.check(code == kExitOk, "solve exit " + std::to_string(code));
  std::ifstream in(dir / "trace.csv");
  std::string line, header;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') {
      header = line;
      break;
    }
  }
  ck.check(header.rfind("method,iter,t_master_s,t_dwp_s,t_iter_s,t_accum_s,gap_pct,inner_iters_base",
                        0) == 0,
           "trace header '" + header + "'");
  fs::remove_all(dir);
  return ck.outcome("main iterations: " + counts + " (" +
                    (fewer ? "eccg uses fewer" : "trend not observed") +
                    ", reported not asserted); trace columns present");
}

Outcome out_of_sample() {
  Checker ck;
  CaseData toy = load("toy2.json");
  const auto& sc = toy.scenarios[0];
  const auto normal = sample_net_demand(sc, DistributionSpec::normal(0.95), 10000, 0);
  std::string cover;
  for (std::size_t i = 0; i < sc.support.lower.size(); ++i) {
    std::size_t inside = 0;
    for (const auto& p : normal) {
      inside += p.values[i] >= sc.support.lower[i] && p.values[i] <= sc.support.upper[i];
    }
    const double frac = inside / 10000.0;
    cover += (cover.empty() ? "" : "/") + num(frac);
    ck.check(std::abs(frac - 0.95) <= 0.01, "coverage dim " + std::to_string(i) + " " + num(frac));
  }
  const auto beta = sample_net_demand(sc, DistributionSpec::beta(4.5), 10000, 0);
  std::string means;
  for (std::size_t i = 0; i < sc.support.lower.size(); ++i) {
    double mean = 0.0;
    for (const auto& p : beta) mean += p.values[i];
    mean /= 10000.0;
    means += (means.empty() ? "" : "/") + num(mean);
    const double mid = 0.5 * (sc.support.lower[i] + sc.support.upper[i]);
    ck.check(std::abs(mean - mid) <= 0.1, "beta mean dim " + std::to_string(i) + " " + num(mean));
  }
  const SimulationReport invested = simulate_plan({1.0}, toy, DistributionSpec::beta(4.5), 1000, 0);
  ck.check(invested.scenarios[0].ri_pct == 0.0, "RI x=(1) " + num(invested.scenarios[0].ri_pct));
  const std::vector<std::vector<NetDemandPoint>> peak{
      std::vector<NetDemandPoint>(50, NetDemandPoint{{60.0, 60.0}, PointOrigin::kSample})};
  const SimulationReport forced = evaluate_plan({0.0}, toy, peak);
  ck.check(forced.scenarios[0].ri_pct == 100.0, "RI forced peak " + num(forced.scenarios[0].ri_pct));
  return ck.outcome("coverage " + cover + ", beta means " + means + ", RI 0% and 100%");
}

Outcome determinism() {
  Checker ck;
  const fs::path root = fs::temp_directory_path() / "drotep_acceptance_det";
  fs::remove_all(root);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const std::string& name : {std::string("toy2.json"), std::string("garver6_d4_two.json")}) {
    for (const char* run : {"a", "b"}) {
      const fs::path dir = root / name / run;
      std::ostringstream out, err;
      const int s = run_cli({"solve", data_path(name), "-M", "2", "--seed", "11", "--no-timings",
                             "--out", dir.string()},
                            out, err);
      const int e = run_cli({"evaluate", data_path(name), (dir / "plan.json").string(), "--n", "200",
                             "--seed", "11", "--out", dir.string()},
                            out, err);
      ck.check(s == kExitOk && e == kExitOk, name + " run " + run + ": " + err.str());
    }
    for (const char* file : {"plan.json", "trace.csv", "report.csv"}) {
      const std::string a = slurp(root / name / "a" / file);
      const std::string b = slurp(root / name / "b" / file);
      ck.check(!a.empty() && a == b, name + " " + file + " differs");
    }
  }
  fs::remove_all(root);
  return ck.outcome("plan.json, trace.csv, report.csv byte-identical across runs");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle-equivalence", oracle_equivalence},
      {"theorem1-sandwich", theorem1_sandwich},
      {"proposition1-sandwich", proposition1_sandwich},
      {"reduction-correctness", reduction_correctness},
      {"dispatch-properties", dispatch_properties},
      {"remark-monotonicity", remark_monotonicity},
      {"iteration-trend", iteration_trend},
      {"out-of-sample", out_of_sample},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

#include "drotep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drotep/error.hpp"
#include "json.hpp"

namespace drotep {
namespace {

using ojson = nlohmann::ordered_json;

ojson metadata_json(const Metadata& meta) {
  ojson out = ojson::object();
  for (const auto& [k, v] : meta) out[k] = v;
  return out;
}

void write_metadata_lines(std::ostringstream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
}

std::string join_x(const std::vector<double>& x) {
  std::string s;
  for (double v : x) s += v > 0.5 ? '1' : '0';
  return s;
}

double t(double seconds, bool timings) { return timings ? seconds : 0.0; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Metadata describe(const RunConfig& config) {
  const RunConfig c = config.effective();
  return {
      {"mode", std::string(to_string(c.mode))},
      {"eps", format_number(c.eps_global)},
      {"epsdwp", format_number(c.eps_dwp)},
      {"L", std::to_string(c.max_inner)},
      {"M", std::to_string(c.top_m)},
      {"master_mip_gap", format_number(c.master_mip_gap)},
      {"oracle_mip_gap", format_number(c.oracle_mip_gap)},
      {"max_iterations", std::to_string(c.max_iterations)},
      {"time_limit_s", format_number(c.time_limit_s)},
      {"seed", std::to_string(c.seed)},
      {"reduction_solver", c.reduction_solver == ReductionSolver::kFva ? "fva" : "eccg"},
      {"pi_bound_scale", format_number(c.pi_bound_scale)},
      {"vertex_cap", std::to_string(c.vertex_cap)},
      {"solver.backend", c.solver.backend},
      {"solver.threads", std::to_string(c.solver.threads)},
  };
}

std::string plan_to_json(const PlanResult& plan, const CaseData& data, const RunConfig& config,
                         bool timings) {
  ojson j;
  Metadata meta = describe(config);
  meta.insert(meta.begin(), {"case", data.name});
  j["metadata"] = metadata_json(meta);
  j["mode"] = std::string(to_string(plan.mode));
  j["status"] = std::string(to_string(plan.status));
  j["x"] = plan.x;
  ojson built = ojson::array();
  for (std::size_t c = 0; c < plan.x.size(); ++c) {
    if (plan.x[c] > 0.5) built.push_back(data.network.candidate_lines[c].name);
  }
  j["new_lines"] = built;
  j["z"] = plan.z;
  j["lb"] = plan.lb;
  j["ub"] = plan.ub;
  j["gap_pct"] = 100.0 * plan.gap();
  j["investment_cost"] = plan.investment_cost;
  j["iterations"] = plan.iterations;
  j["solve_time_s"] = t(plan.solve_time_s, timings);
  j["lb_trace"] = plan.lb_trace;
  j["ub_trace"] = plan.ub_trace;
  ojson scen = ojson::array();
  for (std::size_t w = 0; w < plan.final_states.size(); ++w) {
    const RecourseState& st = plan.final_states[w];
    ojson s;
    s["id"] = plan.scenario_ids[w];
    s["h_lower"] = st.h_lower;
    s["h_upper"] = recourse_upper_bound(st);
    s["c_star"] = st.c_star;
    s["inner_iterations"] = st.inner_iterations;
    s["alpha0"] = st.duals.alpha0;
    s["alpha_upper"] = st.duals.alpha_upper;
    s["alpha_lower"] = st.duals.alpha_lower;
    ojson atoms = ojson::array();
    for (std::size_t k = 0; k < st.pool.size(); ++k) {
      if (st.probabilities[k] <= 0.0) continue;
      atoms.push_back({{"xi", st.pool[k].values}, {"p", st.probabilities[k]}, {"g", st.costs[k]}});
    }
    s["worst_case"] = atoms;
    scen.push_back(s);
  }
  j["scenarios"] = scen;
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const PlanResult& plan, const CaseData& data, const RunConfig& config,
                         bool timings) {
  std::ostringstream os;
  Metadata meta = describe(config);
  meta.insert(meta.begin(), {"case", data.name});
  write_metadata_lines(os, meta);
  os << "method,iter,t_master_s,t_dwp_s,t_iter_s,t_accum_s,gap_pct";
  for (const std::string& id : plan.scenario_ids) os << ",inner_iters_" << id;
  os << ",lb,ub,ub_best,gap_iter_pct\n";
  const std::string method(to_string(plan.mode));
  for (const IterationRecord& r : plan.trace) {
    os << method << ',' << r.iter << ',' << format_number(t(r.t_master_s, timings)) << ','
       << format_number(t(r.t_dwp_s, timings)) << ',' << format_number(t(r.t_iter_s, timings))
       << ',' << format_number(t(r.t_accum_s, timings)) << ',' << format_number(100.0 * r.gap);
    for (int n : r.inner_iters) os << ',' << n;
    os << ',' << format_number(r.lb) << ',' << format_number(r.ub) << ','
       << format_number(r.ub_best) << ',' << format_number(100.0 * r.gap_iter) << '\n';
  }
  return os.str();
}

std::vector<double> read_plan_x(const std::filesystem::path& path, const CaseData& data) {
  ojson j;
  try {
    j = ojson::parse(read_file(path));
  } catch (const ojson::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("x") || !j["x"].is_array()) {
    throw ParseError(path.string() + ": plan has no investment vector 'x'");
  }
  std::vector<double> x;
  for (const auto& v : j["x"]) {
    if (!v.is_number()) throw ParseError(path.string() + ": 'x' must hold numbers");
    x.push_back(v.get<double>());
  }
  if (x.size() != data.network.candidate_count()) {
    throw Error("plan has " + std::to_string(x.size()) + " investment entries but the case has " +
                std::to_string(data.network.candidate_count()) + " candidate lines");
  }
  if (!is_feasible_investment(data, x)) throw Error("plan investment vector is not feasible for the case");
  return x;
}

namespace {

Metadata report_metadata(const SimulationReport& r, const CaseData& data) {
  return {{"case", data.name},
          {"dist", r.spec.family_name()},
          {"param", format_number(r.spec.parameter)},
          {"n", std::to_string(r.n)},
          {"seed", std::to_string(r.seed)},
          {"x", join_x(r.x)}};
}

}  // namespace

std::string report_to_json(const SimulationReport& r, const CaseData& data) {
  ojson j;
  j["metadata"] = metadata_json(report_metadata(r, data));
  j["x"] = r.x;
  j["investment_cost"] = r.investment_cost;
  j["expected_dispatch_cost"] = r.expected_dispatch_cost;
  j["expected_total_cost"] = r.expected_total_cost;
  j["ri_weighted_pct"] = r.ri_weighted_pct;
  ojson scen = ojson::array();
  for (const ScenarioReport& s : r.scenarios) {
    scen.push_back({{"id", s.id},
                    {"weight", s.weight},
                    {"n", s.n},
                    {"mean_dispatch_cost", s.mean_dispatch_cost},
                    {"mean_total_cost", s.mean_dispatch_cost + r.investment_cost},
                    {"min_cost", s.min_cost},
                    {"p05_cost", s.p05},
                    {"p50_cost", s.p50},
                    {"p95_cost", s.p95},
                    {"max_cost", s.max_cost},
                    {"mean_shed_mwh", s.mean_shed_mwh},
                    {"nominal_daily_mwh", s.nominal_daily_mwh},
                    {"ri_pct", s.ri_pct}});
  }
  j["scenarios"] = scen;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const SimulationReport& r, const CaseData& data) {
  std::ostringstream os;
  write_metadata_lines(os, report_metadata(r, data));
  os << "scenario,weight,dist,param,n,mean_dispatch_cost,mean_total_cost,p05_cost,p50_cost,"
        "p95_cost,min_cost,max_cost,mean_shed_mwh,nominal_daily_mwh,ri_pct\n";
  const std::string dist = r.spec.family_name();
  const std::string param = format_number(r.spec.parameter);
  for (const ScenarioReport& s : r.scenarios) {
    os << s.id << ',' << format_number(s.weight) << ',' << dist << ',' << param << ',' << s.n
       << ',' << format_number(s.mean_dispatch_cost) << ','
       << format_number(s.mean_dispatch_cost + r.investment_cost) << ',' << format_number(s.p05)
       << ',' << format_number(s.p50) << ',' << format_number(s.p95) << ','
       << format_number(s.min_cost) << ',' << format_number(s.max_cost) << ','
       << format_number(s.mean_shed_mwh) << ',' << format_number(s.nominal_daily_mwh) << ','
       << format_number(s.ri_pct) << '\n';
  }
  os << "all,1," << dist << ',' << param << ',' << r.n << ','
     << format_number(r.expected_dispatch_cost) << ',' << format_number(r.expected_total_cost)
     << ",,,,,,,," << format_number(r.ri_weighted_pct) << '\n';
  return os.str();
}

std::string compare_to_csv(const std::vector<CompareRow>& rows, const CaseData& data,
                           const RunConfig& config, bool timings) {
  std::ostringstream os;
  Metadata meta = describe(config);
  meta.erase(meta.begin());  // per-row mode
  meta.insert(meta.begin(), {"case", data.name});
  write_metadata_lines(os, meta);
  os << "mode,status,new_lines,investment_cost,total_cost,lb,ub,gap_pct,solve_time_s,iterations,x\n";
  for (const CompareRow& row : rows) {
    os << to_string(row.mode) << ',' << row.status;
    if (!row.ok) {
      os << ",,,,,,,,,\n";
      continue;
    }
    const PlanResult& p = row.result;
    os << ',' << p.new_lines() << ',' << format_number(p.investment_cost) << ','
       << format_number(p.z) << ',' << format_number(p.lb) << ',' << format_number(p.ub) << ','
       << format_number(100.0 * p.gap()) << ',' << format_number(t(p.solve_time_s, timings))
       << ',' << p.iterations << ',' << join_x(p.x) << '\n';
  }
  return os.str();
}

RunConfig parse_run_config(const std::string& text, RunConfig c) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw ParseError(std::string("run config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("run config: expected an object");
  auto num = [](const ojson& v, const std::string& key) {
    if (!v.is_number()) throw ParseError("run config: '" + key + "' must be a number");
    return v.get<double>();
  };
  auto integer = [](const ojson& v, const std::string& key) {
    if (!v.is_number_integer()) throw ParseError("run config: '" + key + "' must be an integer");
    return v.get<long long>();
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const ojson& v = it.value();
    if (k == "mode") {
      if (!v.is_string()) throw ParseError("run config: 'mode' must be a string");
      c.mode = parse_mode(v.get<std::string>());
    } else if (k == "eps") {
      c.eps_global = num(v, k);
    } else if (k == "epsdwp") {
      c.eps_dwp = num(v, k);
    } else if (k == "L") {
      c.max_inner = static_cast<int>(integer(v, k));
    } else if (k == "M") {
      c.top_m = static_cast<int>(integer(v, k));
    } else if (k == "master_mip_gap") {
      c.master_mip_gap = num(v, k);
    } else if (k == "oracle_mip_gap") {
      c.oracle_mip_gap = num(v, k);
    } else if (k == "max_iterations") {
      c.max_iterations = static_cast<int>(integer(v, k));
    } else if (k == "time_limit_s") {
      c.time_limit_s = num(v, k);
    } else if (k == "seed") {
      c.seed = static_cast<std::uint64_t>(integer(v, k));
    } else if (k == "threads") {
      c.threads = static_cast<int>(integer(v, k));
    } else if (k == "reduction_solver") {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "fva") c.reduction_solver = ReductionSolver::kFva;
      else if (s == "eccg") c.reduction_solver = ReductionSolver::kEccg;
      else throw ParseError("run config: 'reduction_solver' must be \"fva\" or \"eccg\"");
    } else if (k == "pi_bound_scale") {
      c.pi_bound_scale = num(v, k);
    } else if (k == "vertex_cap") {
      c.vertex_cap = static_cast<std::size_t>(integer(v, k));
    } else if (k == "solver") {
      if (!v.is_object()) throw ParseError("run config: 'solver' must be an object");
      for (auto s = v.begin(); s != v.end(); ++s) {
        if (s.key() == "backend") {
          if (!s.value().is_string()) throw ParseError("run config: 'solver.backend' must be a string");
          c.solver.backend = s.value().get<std::string>();
        } else if (s.key() == "threads") {
          c.solver.threads = static_cast<int>(integer(s.value(), "solver.threads"));
        } else if (s.key() == "time_limit_s") {
          c.solver.time_limit_s = num(s.value(), "solver.time_limit_s");
        } else {
          throw ParseError("run config: unknown key 'solver." + s.key() + "'");
        }
      }
    } else {
      throw ParseError("run config: unknown key '" + k + "'");
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  return parse_run_config(read_file(path), std::move(base));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace drotep

#include "drotep/case.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "drotep/error.hpp"
#include "json.hpp"

namespace drotep {
namespace {

using nlohmann::json;

constexpr double kWeightSumTol = 1e-9;

// Walks a JSON object, tracks which keys were consumed and rejects the rest.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ParseError(path_ + ": expected an object");
  }

  ~ObjectReader() = default;

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ParseError(child(key) + ": missing required key");
    return *v;
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        throw ParseError(child(it.key()) + ": unknown key");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(path + ": number must be finite");
  return d;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> as_rows(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path + ": expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_vector(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows,
                 const std::string& path) {
  if (rows.empty()) return Matrix{};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) {
      throw ParseError(path + "[" + std::to_string(r) + "]: ragged matrix row");
    }
    for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::size_t bus_index(const std::map<int, std::size_t>& index, int id,
                      const std::string& path) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw ValidationError(path, "references unknown bus " + std::to_string(id));
  }
  return it->second;
}

Network parse_network(const json& node) {
  ObjectReader r(node, "network");
  Network net;
  const json& buses = r.require("buses");
  if (!buses.is_array()) throw ParseError("network.buses: expected an array");
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < buses.size(); ++i) {
    std::string p = "network.buses[" + std::to_string(i) + "]";
    int id = as_int(buses[i], p);
    if (!index.emplace(id, i).second) {
      throw ValidationError(p, "duplicate bus id " + std::to_string(id));
    }
    net.bus_ids.push_back(id);
  }

  auto lines = [&](const char* key, bool candidate) {
    const json* arr = r.find(key);
    if (arr == nullptr) return;
    std::string base = std::string("network.") + key;
    if (!arr->is_array()) throw ParseError(base + ": expected an array");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      std::string p = base + "[" + std::to_string(i) + "]";
      ObjectReader lr((*arr)[i], p);
      std::size_t from = bus_index(index, as_int(lr.require("from"), p + ".from"), p + ".from");
      std::size_t to = bus_index(index, as_int(lr.require("to"), p + ".to"), p + ".to");
      double b = as_number(lr.require("susceptance"), p + ".susceptance");
      double cap = as_number(lr.require("capacity"), p + ".capacity");
      std::string name;
      if (const json* n = lr.find("name")) name = as_string(*n, p + ".name");
      if (candidate) {
        double cost = as_number(lr.require("cost"), p + ".cost");
        net.candidate_lines.push_back({from, to, b, cap, cost, name});
      } else {
        net.existing_lines.push_back({from, to, b, cap, name});
      }
      lr.finish();
    }
  };
  lines("existing_lines", false);
  lines("candidate_lines", true);

  const json& gens = r.require("generators");
  if (!gens.is_array()) throw ParseError("network.generators: expected an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string p = "network.generators[" + std::to_string(i) + "]";
    ObjectReader gr(gens[i], p);
    Generator g;
    g.bus = bus_index(index, as_int(gr.require("bus"), p + ".bus"), p + ".bus");
    if (const json* n = gr.find("name")) g.name = as_string(*n, p + ".name");
    gr.finish();
    net.generators.push_back(std::move(g));
  }
  if (const json* v = r.find("base_mva")) net.base_mva = as_number(*v, "network.base_mva");
  if (const json* v = r.find("max_angle_spread_rad")) {
    net.max_angle_spread = as_number(*v, "network.max_angle_spread_rad");
  }
  r.finish();
  return net;
}

Periods parse_periods(const json& node) {
  ObjectReader r(node, "periods");
  Periods p;
  p.count = as_int(r.require("count"), "periods.count");
  if (const json* v = r.find("hours")) p.hours = as_number(*v, "periods.hours");
  if (const json* v = r.find("dims_per_period")) {
    p.dims_per_period = as_int(*v, "periods.dims_per_period");
  }
  r.finish();
  return p;
}

LongTermScenario parse_scenario(const json& node, const std::string& path,
                                const Periods& periods) {
  ObjectReader r(node, path);
  LongTermScenario s;
  s.id = as_string(r.require("id"), path + ".id");
  s.weight = as_number(r.require("weight"), path + ".weight");
  {
    std::string p = path + ".support";
    ObjectReader sr(r.require("support"), p);
    s.support.lower = as_vector(sr.require("lower"), p + ".lower");
    s.support.upper = as_vector(sr.require("upper"), p + ".upper");
    sr.finish();
  }
  {
    std::string p = path + ".moments";
    ObjectReader mr(r.require("moments"), p);
    s.moments.mu_lower = as_vector(mr.require("mu_lower"), p + ".mu_lower");
    s.moments.mu_upper = as_vector(mr.require("mu_upper"), p + ".mu_upper");
    mr.finish();
  }
  {
    std::string p = path + ".allocation";
    const json& alloc = r.require("allocation");
    if (!alloc.is_array() || alloc.empty()) {
      throw ParseError(p + ": expected a non-empty array");
    }
    // A single buses x dims matrix is shorthand for "same block every period".
    bool single = alloc[0].is_array() && !alloc[0].empty() && alloc[0][0].is_number();
    if (single) {
      Matrix m = to_matrix(as_rows(alloc, p), p);
      s.allocation.assign(static_cast<std::size_t>(std::max(periods.count, 0)), m);
    } else {
      for (std::size_t t = 0; t < alloc.size(); ++t) {
        std::string pt = p + "[" + std::to_string(t) + "]";
        s.allocation.push_back(to_matrix(as_rows(alloc[t], pt), pt));
      }
    }
  }
  s.gen_cost = as_vector(r.require("gen_cost"), path + ".gen_cost");
  s.gen_capacity = as_vector(r.require("gen_capacity"), path + ".gen_capacity");
  if (const json* v = r.find("ramp_down")) s.ramp_down = as_vector(*v, path + ".ramp_down");
  if (const json* v = r.find("ramp_up")) s.ramp_up = as_vector(*v, path + ".ramp_up");
  s.shed_cost = as_vector(r.require("shed_cost"), path + ".shed_cost");
  s.surplus_cost = as_vector(r.require("surplus_cost"), path + ".surplus_cost");
  if (const json* v = r.find("nominal_demand")) {
    s.nominal_demand = as_rows(*v, path + ".nominal_demand");
  }
  if (const json* v = r.find("initial_generation")) {
    s.initial_generation = as_vector(*v, path + ".initial_generation");
  }
  if (const json* v = r.find("nominal_daily_demand")) {
    s.nominal_daily_demand = as_number(*v, path + ".nominal_daily_demand");
  }
  r.finish();
  return s;
}

InvestmentPolicy parse_policy(const json& node) {
  ObjectReader r(node, "investment_policy");
  InvestmentPolicy p;
  if (const json* v = r.find("budget")) p.budget = as_number(*v, "investment_policy.budget");
  if (const json* v = r.find("max_new_lines")) {
    p.max_new_lines = as_int(*v, "investment_policy.max_new_lines");
  }
  r.finish();
  return p;
}

json rows_to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

void require_size(std::size_t got, std::size_t want, const std::string& field) {
  if (got != want) {
    throw ValidationError(field, "expected " + std::to_string(want) +
                                     " entries, got " + std::to_string(got));
  }
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ValidationError(field, "must be strictly positive");
}

void require_nonnegative(const std::vector<double>& v, const std::string& field) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {
      throw ValidationError(field + "[" + std::to_string(i) + "]",
                            "must be nonnegative");
    }
  }
}

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

double CaseData::investment_cost(const std::vector<double>& x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size() && i < network.candidate_lines.size(); ++i) {
    total += network.candidate_lines[i].cost * x[i];
  }
  return total;
}

CaseData parse_case(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  ObjectReader r(doc, "");
  CaseData data;
  if (const json* v = r.find("name")) data.name = as_string(*v, "name");
  data.network = parse_network(r.require("network"));
  data.periods = parse_periods(r.require("periods"));
  const json& scen = r.require("scenarios");
  if (!scen.is_array()) throw ParseError("scenarios: expected an array");
  for (std::size_t i = 0; i < scen.size(); ++i) {
    data.scenarios.push_back(parse_scenario(scen[i], idx("scenarios", i), data.periods));
  }
  if (const json* v = r.find("investment_policy")) {
    data.investment_policy = parse_policy(*v);
  }
  r.finish();
  validate_case(data);
  return data;
}

CaseData load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("file not found: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_case(buf.str());
}

std::string serialize_case(const CaseData& data) {
  const Network& net = data.network;
  json doc;
  if (!data.name.empty()) doc["name"] = data.name;
  json network;
  network["buses"] = net.bus_ids;
  json existing = json::array();
  for (const ExistingLine& l : net.existing_lines) {
    json j{{"from", net.bus_ids[l.from]}, {"to", net.bus_ids[l.to]},
           {"susceptance", l.susceptance}, {"capacity", l.capacity}};
    if (!l.name.empty()) j["name"] = l.name;
    existing.push_back(std::move(j));
  }
  network["existing_lines"] = std::move(existing);
  json candidates = json::array();
  for (const CandidateLine& l : net.candidate_lines) {
    json j{{"from", net.bus_ids[l.from]}, {"to", net.bus_ids[l.to]},
           {"susceptance", l.susceptance}, {"capacity", l.capacity},
           {"cost", l.cost}};
    if (!l.name.empty()) j["name"] = l.name;
    candidates.push_back(std::move(j));
  }
  network["candidate_lines"] = std::move(candidates);
  json gens = json::array();
  for (const Generator& g : net.generators) {
    json j{{"bus", net.bus_ids[g.bus]}};
    if (!g.name.empty()) j["name"] = g.name;
    gens.push_back(std::move(j));
  }
  network["generators"] = std::move(gens);
  network["base_mva"] = net.base_mva;
  network["max_angle_spread_rad"] = net.max_angle_spread;
  doc["network"] = std::move(network);

  doc["periods"] = {{"count", data.periods.count},
                    {"hours", data.periods.hours},
                    {"dims_per_period", data.periods.dims_per_period}};

  json scenarios = json::array();
  for (const LongTermScenario& s : data.scenarios) {
    json j;
    j["id"] = s.id;
    j["weight"] = s.weight;
    j["support"] = {{"lower", s.support.lower}, {"upper", s.support.upper}};
    j["moments"] = {{"mu_lower", s.moments.mu_lower},
                    {"mu_upper", s.moments.mu_upper}};
    json alloc = json::array();
    for (const Matrix& m : s.allocation) alloc.push_back(rows_to_json(m));
    j["allocation"] = std::move(alloc);
    j["gen_cost"] = s.gen_cost;
    j["gen_capacity"] = s.gen_capacity;
    if (s.ramp_down) j["ramp_down"] = *s.ramp_down;
    if (s.ramp_up) j["ramp_up"] = *s.ramp_up;
    j["shed_cost"] = s.shed_cost;
    j["surplus_cost"] = s.surplus_cost;
    if (!s.nominal_demand.empty()) j["nominal_demand"] = s.nominal_demand;
    if (s.initial_generation) j["initial_generation"] = *s.initial_generation;
    if (s.nominal_daily_demand) j["nominal_daily_demand"] = *s.nominal_daily_demand;
    scenarios.push_back(std::move(j));
  }
  doc["scenarios"] = std::move(scenarios);

  json policy = json::object();
  if (data.investment_policy.budget) policy["budget"] = *data.investment_policy.budget;
  if (data.investment_policy.max_new_lines) {
    policy["max_new_lines"] = *data.investment_policy.max_new_lines;
  }
  doc["investment_policy"] = std::move(policy);
  return doc.dump(2);
}

void save_case(const CaseData& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_case(data) << '\n';
}

void validate_case(const CaseData& data) {
  const Network& net = data.network;
  const std::size_t nb = net.bus_count();
  const std::size_t ng = net.generator_count();
  if (nb == 0) throw ValidationError("network.buses", "at least one bus is required");

  auto check_line = [&](std::size_t from, std::size_t to, double b, double cap,
                        const std::string& p) {
    if (from >= nb) throw ValidationError(p + ".from", "bus index out of range");
    if (to >= nb) throw ValidationError(p + ".to", "bus index out of range");
    if (from == to) throw ValidationError(p, "line endpoints must differ");
    require_positive(b, p + ".susceptance");
    require_positive(cap, p + ".capacity");
  };
  for (std::size_t i = 0; i < net.existing_lines.size(); ++i) {
    const ExistingLine& l = net.existing_lines[i];
    check_line(l.from, l.to, l.susceptance, l.capacity, idx("network.existing_lines", i));
  }
  for (std::size_t i = 0; i < net.candidate_lines.size(); ++i) {
    const CandidateLine& l = net.candidate_lines[i];
    std::string p = idx("network.candidate_lines", i);
    check_line(l.from, l.to, l.susceptance, l.capacity, p);
    require_positive(l.cost, p + ".cost");
  }
  for (std::size_t i = 0; i < ng; ++i) {
    if (net.generators[i].bus >= nb) {
      throw ValidationError(idx("network.generators", i) + ".bus",
                            "bus index out of range");
    }
  }
  require_positive(net.base_mva, "network.base_mva");
  require_positive(net.max_angle_spread, "network.max_angle_spread_rad");

  if (data.periods.count < 1) throw ValidationError("periods.count", "must be >= 1");
  if (data.periods.dims_per_period < 1) {
    throw ValidationError("periods.dims_per_period", "must be >= 1");
  }
  require_positive(data.periods.hours, "periods.hours");

  if (data.scenarios.empty()) {
    throw ValidationError("scenarios", "at least one long-term scenario is required");
  }
  const std::size_t d = data.dimension();
  const std::size_t nt = static_cast<std::size_t>(data.periods.count);
  const std::size_t m = static_cast<std::size_t>(data.periods.dims_per_period);
  double weight_sum = 0.0;
  std::set<std::string> ids;
  for (std::size_t w = 0; w < data.scenarios.size(); ++w) {
    const LongTermScenario& s = data.scenarios[w];
    std::string p = idx("scenarios", w);
    if (!ids.insert(s.id).second) throw ValidationError(p + ".id", "duplicate scenario id");
    if (!(s.weight >= 0.0 && s.weight <= 1.0)) {
      throw ValidationError(p + ".weight", "must lie in [0, 1]");
    }
    weight_sum += s.weight;

    require_size(s.support.lower.size(), d, p + ".support.lower");
    require_size(s.support.upper.size(), d, p + ".support.upper");
    require_size(s.moments.mu_lower.size(), d, p + ".moments.mu_lower");
    require_size(s.moments.mu_upper.size(), d, p + ".moments.mu_upper");
    for (std::size_t i = 0; i < d; ++i) {
      const double lo = s.support.lower[i];
      const double hi = s.support.upper[i];
      const double ml = s.moments.mu_lower[i];
      const double mu = s.moments.mu_upper[i];
      if (lo > hi) {
        throw ValidationError(idx(p + ".support.lower", i), "exceeds support upper bound");
      }
      if (ml > mu) {
        throw ValidationError(idx(p + ".moments.mu_lower", i), "exceeds mu_upper");
      }
      if (ml < lo) {
        throw ValidationError(idx(p + ".moments.mu_lower", i), "lies below the support");
      }
      if (mu > hi) {
        throw ValidationError(idx(p + ".moments.mu_upper", i), "lies above the support");
      }
    }

    require_size(s.allocation.size(), nt, p + ".allocation");
    for (std::size_t t = 0; t < nt; ++t) {
      require_size(s.allocation[t].rows, nb, idx(p + ".allocation", t) + " rows");
      require_size(s.allocation[t].cols, m, idx(p + ".allocation", t) + " columns");
    }

    require_size(s.gen_cost.size(), ng, p + ".gen_cost");
    require_size(s.gen_capacity.size(), ng, p + ".gen_capacity");
    require_nonnegative(s.gen_cost, p + ".gen_cost");
    require_nonnegative(s.gen_capacity, p + ".gen_capacity");
    if (s.ramp_down) {
      require_size(s.ramp_down->size(), ng, p + ".ramp_down");
      require_nonnegative(*s.ramp_down, p + ".ramp_down");
    }
    if (s.ramp_up) {
      require_size(s.ramp_up->size(), ng, p + ".ramp_up");
      require_nonnegative(*s.ramp_up, p + ".ramp_up");
    }
    if (s.initial_generation) {
      require_size(s.initial_generation->size(), ng, p + ".initial_generation");
    }
    require_size(s.shed_cost.size(), nb, p + ".shed_cost");
    require_size(s.surplus_cost.size(), nb, p + ".surplus_cost");
    const double max_gen_cost =
        s.gen_cost.empty() ? 0.0 : *std::max_element(s.gen_cost.begin(), s.gen_cost.end());
    for (std::size_t n = 0; n < nb; ++n) {
      if (!(s.shed_cost[n] > max_gen_cost)) {
        throw ValidationError(idx(p + ".shed_cost", n),
                              "must exceed the largest generation cost");
      }
      if (!(s.surplus_cost[n] > max_gen_cost)) {
        throw ValidationError(idx(p + ".surplus_cost", n),
                              "must exceed the largest generation cost");
      }
    }
    if (!s.nominal_demand.empty()) {
      require_size(s.nominal_demand.size(), nt, p + ".nominal_demand");
      for (std::size_t t = 0; t < nt; ++t) {
        require_size(s.nominal_demand[t].size(), nb, idx(p + ".nominal_demand", t));
      }
    }
    if (s.nominal_daily_demand) {
      require_positive(*s.nominal_daily_demand, p + ".nominal_daily_demand");
    }
  }
  if (std::abs(weight_sum - 1.0) > kWeightSumTol) {
    throw ValidationError("scenarios[*].weight",
                          "weights must sum to 1 (got " + std::to_string(weight_sum) + ")");
  }
  if (data.investment_policy.budget && *data.investment_policy.budget < 0.0) {
    throw ValidationError("investment_policy.budget", "must be nonnegative");
  }
  if (data.investment_policy.max_new_lines && *data.investment_policy.max_new_lines < 0) {
    throw ValidationError("investment_policy.max_new_lines", "must be nonnegative");
  }
}

bool is_feasible_investment(const CaseData& data, const std::vector<double>& x) {
  if (x.size() != data.network.candidate_count()) return false;
  int built = 0;
  for (double v : x) {
    if (v != 0.0 && v != 1.0) return false;
    built += v == 1.0 ? 1 : 0;
  }
  const InvestmentPolicy& pol = data.investment_policy;
  if (pol.max_new_lines && built > *pol.max_new_lines) return false;
  if (pol.budget && data.investment_cost(x) > *pol.budget + 1e-9) return false;
  return true;
}

}  // namespace drotep

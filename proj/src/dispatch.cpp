#include "drotep/dispatch.hpp"

#include <cmath>
#include <string>

#include "drotep/error.hpp"
#include "drotep/lp_dual.hpp"

namespace drotep {
namespace {

void check_dimensions(const CaseData& data, std::size_t x_size, std::size_t xi_size) {
  if (x_size != data.network.candidate_count()) {
    throw Error("investment vector has " + std::to_string(x_size) + " entries, expected " +
                std::to_string(data.network.candidate_count()));
  }
  if (xi_size != data.dimension()) {
    throw Error("net-demand vector has " + std::to_string(xi_size) + " entries, expected " +
                std::to_string(data.dimension()));
  }
}

std::vector<std::vector<double>> gather(const std::vector<std::vector<int>>& idx,
                                        const std::vector<double>& values) {
  std::vector<std::vector<double>> out(idx.size());
  for (std::size_t t = 0; t < idx.size(); ++t) {
    out[t].reserve(idx[t].size());
    for (int j : idx[t]) out[t].push_back(values[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace

double disjunctive_big_m(const Network& net, const CandidateLine& line) {
  return net.base_mva * std::abs(line.susceptance) * net.max_angle_spread;
}

DispatchBlock append_dispatch_block(LinearModel& model, const CaseData& data,
                                    const LongTermScenario& sc, const InvestmentRef& x,
                                    std::span<const double> xi, double objective_weight) {
  const Network& net = data.network;
  const std::size_t x_size = x.is_fixed() ? x.values.size() : x.columns.size();
  check_dimensions(data, x_size, xi.size());

  const auto periods = static_cast<std::size_t>(data.periods.count);
  const auto m = static_cast<std::size_t>(data.periods.dims_per_period);
  const std::size_t buses = net.bus_count();
  const std::size_t gens = net.generator_count();
  const std::size_t n_exist = net.existing_lines.size();
  const std::size_t n_cand = net.candidate_count();
  const double hours = data.periods.hours;

  DispatchBlock b;
  b.q.resize(periods);
  b.flow.resize(periods);
  b.theta.resize(periods);
  b.shed.resize(periods);
  b.surplus.resize(periods);
  b.balance.resize(periods);

  for (std::size_t t = 0; t < periods; ++t) {
    for (std::size_t g = 0; g < gens; ++g) {
      int v = model.add_variable(0.0, sc.gen_capacity[g]);
      b.q[t].push_back(v);
      b.cost.push_back({v, hours * sc.gen_cost[g]});
    }
    for (const ExistingLine& l : net.existing_lines) {
      b.flow[t].push_back(model.add_variable(-l.capacity, l.capacity));
    }
    for (std::size_t c = 0; c < n_cand; ++c) {
      const double cap = net.candidate_lines[c].capacity;
      const double scale = x.is_fixed() ? x.values[c] : 1.0;
      b.flow[t].push_back(model.add_variable(-cap * scale, cap * scale));
    }
    for (std::size_t n = 0; n < buses; ++n) {
      b.theta[t].push_back(n == 0 ? model.add_variable(0.0, 0.0)
                                  : model.add_variable(-kInf, kInf));
    }
    for (std::size_t n = 0; n < buses; ++n) {
      int s = model.add_variable(0.0, kInf);
      int u = model.add_variable(0.0, kInf);
      b.shed[t].push_back(s);
      b.surplus[t].push_back(u);
      b.cost.push_back({s, hours * sc.shed_cost[n]});
      b.cost.push_back({u, hours * sc.surplus_cost[n]});
    }

    // Nodal balance.
    std::vector<std::vector<Term>> rows(buses);
    for (std::size_t g = 0; g < gens; ++g) rows[net.generators[g].bus].push_back({b.q[t][g], 1.0});
    for (std::size_t l = 0; l < n_exist; ++l) {
      rows[net.existing_lines[l].from].push_back({b.flow[t][l], -1.0});
      rows[net.existing_lines[l].to].push_back({b.flow[t][l], 1.0});
    }
    for (std::size_t c = 0; c < n_cand; ++c) {
      rows[net.candidate_lines[c].from].push_back({b.flow[t][n_exist + c], -1.0});
      rows[net.candidate_lines[c].to].push_back({b.flow[t][n_exist + c], 1.0});
    }
    const Matrix& alloc = sc.allocation[t];
    for (std::size_t n = 0; n < buses; ++n) {
      rows[n].push_back({b.shed[t][n], 1.0});
      rows[n].push_back({b.surplus[t][n], -1.0});
      double rhs = sc.nominal(t, n);
      for (std::size_t j = 0; j < m; ++j) rhs += alloc(n, j) * xi[t * m + j];
      b.balance[t].push_back(model.add_constraint(rhs, rhs, rows[n]));
    }

    // Kirchhoff's voltage law.
    for (std::size_t l = 0; l < n_exist; ++l) {
      const ExistingLine& line = net.existing_lines[l];
      const double s = net.base_mva * line.susceptance;
      model.add_constraint(0.0, 0.0, {{b.flow[t][l], 1.0},
                                      {b.theta[t][line.from], -s},
                                      {b.theta[t][line.to], s}});
    }
    for (std::size_t c = 0; c < n_cand; ++c) {
      const CandidateLine& line = net.candidate_lines[c];
      const double s = net.base_mva * line.susceptance;
      const double big_m = disjunctive_big_m(net, line);
      const int f = b.flow[t][n_exist + c];
      if (x.is_fixed()) {
        const double slack = big_m * (1.0 - x.values[c]);
        model.add_constraint(-slack, slack, {{f, 1.0},
                                             {b.theta[t][line.from], -s},
                                             {b.theta[t][line.to], s}});
      } else {
        const int xc = x.columns[c];
        model.add_constraint(-kInf, 0.0, {{f, 1.0}, {xc, -line.capacity}});
        model.add_constraint(0.0, kInf, {{f, 1.0}, {xc, line.capacity}});
        model.add_constraint(-kInf, big_m, {{f, 1.0},
                                            {b.theta[t][line.from], -s},
                                            {b.theta[t][line.to], s},
                                            {xc, big_m}});
        model.add_constraint(-big_m, kInf, {{f, 1.0},
                                            {b.theta[t][line.from], -s},
                                            {b.theta[t][line.to], s},
                                            {xc, -big_m}});
      }
    }

    // Ramping: t >= 2 always, t = 1 only against a declared initial state.
    if (sc.ramp_up || sc.ramp_down) {
      for (std::size_t g = 0; g < gens; ++g) {
        const double up = sc.ramp_up ? (*sc.ramp_up)[g] : kInf;
        const double down = sc.ramp_down ? (*sc.ramp_down)[g] : kInf;
        if (t > 0) {
          model.add_constraint(-down, up, {{b.q[t][g], 1.0}, {b.q[t - 1][g], -1.0}});
        } else if (sc.initial_generation) {
          const double q0 = (*sc.initial_generation)[g];
          model.add_constraint(q0 - down, q0 + up, {{b.q[t][g], 1.0}});
        }
      }
    }
  }

  if (objective_weight != 0.0) {
    for (const Term& term : b.cost) model.add_cost(term.var, objective_weight * term.coef);
  }
  return b;
}

LinearModel build_dispatch_model(const CaseData& data, const LongTermScenario& scenario,
                                 std::span<const double> x, std::span<const double> xi,
                                 DispatchBlock* block) {
  LinearModel model;
  DispatchBlock b = append_dispatch_block(
      model, data, scenario, InvestmentRef::fixed(std::vector<double>(x.begin(), x.end())), xi,
      1.0);
  if (block != nullptr) *block = std::move(b);
  return model;
}

double DispatchResult::total_shed_mwh(double hours) const {
  double total = 0.0;
  for (const auto& period : shed) {
    for (double v : period) total += v;
  }
  return total * hours;
}

DispatchResult dispatch_cost(const CaseData& data, const LongTermScenario& scenario,
                             std::span<const double> x, std::span<const double> xi,
                             const SolverOptions& options) {
  DispatchBlock block;
  LinearModel model = build_dispatch_model(data, scenario, x, xi, &block);
  Solution sol = solve_lp(model, options);
  if (sol.status != SolveStatus::kOptimal) {
    throw SolverError("dispatch LP returned status '" + std::string(to_string(sol.status)) +
                      "'; the model is feasible by construction");
  }
  DispatchResult r;
  r.cost = sol.objective;
  r.q = gather(block.q, sol.primal);
  r.flow = gather(block.flow, sol.primal);
  r.theta = gather(block.theta, sol.primal);
  r.shed = gather(block.shed, sol.primal);
  r.surplus = gather(block.surplus, sol.primal);
  r.pi = gather(block.balance, sol.row_duals);
  r.row_duals = std::move(sol.row_duals);
  r.col_duals = std::move(sol.col_duals);
  return r;
}

double dispatch_dual_objective(const CaseData& data, const LongTermScenario& scenario,
                               std::span<const double> x, std::span<const double> xi,
                               std::span<const double> row_duals,
                               std::span<const double> col_duals) {
  LinearModel model = build_dispatch_model(data, scenario, x, xi);
  return dual_objective(model, row_duals, col_duals);
}

}  // namespace drotep

#pragma once

// Minimum-cost DC dispatch g(x, xi, omega) over all periods.
//
// Per period t and bus n:
//   G q_t + A f_t + shed_t - surplus_t = nominal_t + B_t xi_t
// with A(from, l) = -1, A(to, l) = +1. Existing lines obey f = S (theta_from -
// theta_to); candidate lines obey |f - S dtheta| <= C (1 - x) and
// |f| <= Fbar x, where S = base_mva * b and C = base_mva * |b| * max spread.
// Bus 0 is the angle reference in every period.

#include <cstddef>
#include <span>
#include <vector>

#include "drotep/case.hpp"
#include "drotep/solver.hpp"
#include "drotep/uncertainty.hpp"

namespace drotep {

/// Investment decisions as constants (operational problems) or as model
/// columns (master problem / extensive form).
struct InvestmentRef {
  std::vector<double> values;
  std::vector<int> columns;

  static InvestmentRef fixed(std::vector<double> x) { return {std::move(x), {}}; }
  static InvestmentRef variables(std::vector<int> cols) { return {{}, std::move(cols)}; }
  bool is_fixed() const { return columns.empty(); }
};

/// Column and row indices of one dispatch block inside a LinearModel.
/// All nested vectors are indexed [period][item].
struct DispatchBlock {
  std::vector<std::vector<int>> q;
  std::vector<std::vector<int>> flow;  // existing lines, then candidates
  std::vector<std::vector<int>> theta;
  std::vector<std::vector<int>> shed;
  std::vector<std::vector<int>> surplus;
  std::vector<std::vector<int>> balance;  // rows
  /// Operating cost hours * (c q + l- shed + l+ surplus) as terms.
  std::vector<Term> cost;
};

/// Appends one dispatch block. When `objective_weight` is nonzero the cost
/// terms are also added to the model objective with that multiplier.
DispatchBlock append_dispatch_block(LinearModel& model, const CaseData& data,
                                    const LongTermScenario& scenario,
                                    const InvestmentRef& x, std::span<const double> xi,
                                    double objective_weight = 0.0);

/// Standalone dispatch LP at fixed (x, xi).
LinearModel build_dispatch_model(const CaseData& data, const LongTermScenario& scenario,
                                 std::span<const double> x, std::span<const double> xi,
                                 DispatchBlock* block = nullptr);

struct DispatchResult {
  double cost = 0.0;
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> flow;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> shed;
  std::vector<std::vector<double>> surplus;
  std::vector<std::vector<double>> pi;  // balance duals, $/MW
  /// Full dual vector of the dispatch LP (sensitivity convention).
  std::vector<double> row_duals;
  std::vector<double> col_duals;

  double total_shed_mwh(double hours) const;
};

/// Throws SolverError if the LP is not solved to optimality (it is feasible
/// by construction, so any other status is an internal failure).
DispatchResult dispatch_cost(const CaseData& data, const LongTermScenario& scenario,
                             std::span<const double> x, std::span<const double> xi,
                             const SolverOptions& options = {});

/// Dual objective (b + B xi - T x)' pi of the dispatch LP for the given
/// multipliers. Throws Error on dimension mismatch.
double dispatch_dual_objective(const CaseData& data, const LongTermScenario& scenario,
                               std::span<const double> x, std::span<const double> xi,
                               std::span<const double> row_duals,
                               std::span<const double> col_duals);

/// Big-M of the disjunctive KVL rows for one candidate line.
double disjunctive_big_m(const Network& net, const CandidateLine& line);

}  // namespace drotep

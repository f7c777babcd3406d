#include "drotep/lp_dual.hpp"

#include <cmath>

#include "drotep/error.hpp"

namespace drotep {
namespace {

// Returns the dual columns for a pair of bounds and registers their
// objective coefficients.
std::pair<int, int> add_bound_multipliers(LinearModel& dual, double lower, double upper) {
  const bool has_lower = std::isfinite(lower);
  const bool has_upper = std::isfinite(upper);
  if (has_lower && has_upper && lower == upper) {
    int v = dual.add_variable(-kInf, kInf, lower);
    return {v, v};
  }
  int lo = has_lower ? dual.add_variable(0.0, kInf, lower) : -1;
  int up = has_upper ? dual.add_variable(-kInf, 0.0, upper) : -1;
  return {lo, up};
}

}  // namespace

DualModel build_dual(const LinearModel& primal) {
  if (primal.sense() != Sense::kMinimize) throw SolverError("build_dual expects a minimization");
  if (primal.has_integers()) throw SolverError("build_dual expects a continuous model");

  DualModel out;
  LinearModel& dual = out.model;
  dual.set_sense(Sense::kMaximize);
  dual.set_offset(primal.offset());

  const std::size_t m = primal.num_constraints();
  const std::size_t n = primal.num_variables();
  out.row_lower.resize(m);
  out.row_upper.resize(m);
  out.col_lower.resize(n);
  out.col_upper.resize(n);

  std::vector<std::vector<Term>> column_terms(n);
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& r = primal.constraint(i);
    auto [lo, up] = add_bound_multipliers(dual, r.lower, r.upper);
    out.row_lower[i] = lo;
    out.row_upper[i] = up;
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      auto& terms = column_terms[static_cast<std::size_t>(r.index[k])];
      if (lo >= 0) terms.push_back({lo, r.value[k]});
      if (up >= 0 && up != lo) terms.push_back({up, r.value[k]});
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Variable& v = primal.variable(j);
    auto [lo, up] = add_bound_multipliers(dual, v.lower, v.upper);
    out.col_lower[j] = lo;
    out.col_upper[j] = up;
    auto& terms = column_terms[j];
    if (lo >= 0) terms.push_back({lo, 1.0});
    if (up >= 0 && up != lo) terms.push_back({up, 1.0});
    dual.add_constraint(primal.cost(j), primal.cost(j), terms);
  }
  return out;
}

double dual_objective(const LinearModel& primal, std::span<const double> row_duals,
                      std::span<const double> col_duals, double dual_tol) {
  if (row_duals.size() != primal.num_constraints() ||
      col_duals.size() != primal.num_variables()) {
    throw Error("dual vector dimension mismatch");
  }
  auto term = [&](double y, double lower, double upper) {
    if (y == 0.0) return 0.0;
    const double bound = y > 0.0 ? lower : upper;
    // Multipliers within the dual feasibility tolerance on an infinite side
    // are solver noise, not a certificate of an unbounded dual.
    if (!std::isfinite(bound)) return std::abs(y) <= dual_tol ? 0.0 : -kInf;
    return y * bound;
  };
  double value = primal.offset();
  for (std::size_t i = 0; i < row_duals.size(); ++i) {
    const Constraint& r = primal.constraint(i);
    value += term(row_duals[i], r.lower, r.upper);
  }
  for (std::size_t j = 0; j < col_duals.size(); ++j) {
    const Variable& v = primal.variable(j);
    value += term(col_duals[j], v.lower, v.upper);
  }
  return value;
}

}  // namespace drotep

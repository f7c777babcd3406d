#include <cmath>
#include <string>

#include "drotep/error.hpp"
#include "drotep/solver.hpp"

namespace drotep {

int LinearModel::add_variable(double lower, double upper, double cost, bool integer) {
  vars_.push_back({lower, upper, integer});
  costs_.push_back(cost);
  return static_cast<int>(vars_.size() - 1);
}

int LinearModel::add_constraint(double lower, double upper, std::span<const Term> terms) {
  Constraint row;
  row.lower = lower;
  row.upper = upper;
  row.index.reserve(terms.size());
  row.value.reserve(terms.size());
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    row.index.push_back(t.var);
    row.value.push_back(t.coef);
  }
  rows_.push_back(std::move(row));
  return static_cast<int>(rows_.size() - 1);
}

void LinearModel::set_bounds(int var, double lower, double upper) {
  Variable& v = vars_.at(static_cast<std::size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

bool LinearModel::has_integers() const {
  for (const Variable& v : vars_) {
    if (v.integer) return true;
  }
  return false;
}

void LinearModel::check() const {
  const auto n = static_cast<int>(vars_.size());
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (!std::isfinite(costs_[j])) {
      throw SolverError("non-finite cost on variable " + std::to_string(j));
    }
    if (std::isnan(vars_[j].lower) || std::isnan(vars_[j].upper)) {
      throw SolverError("NaN bound on variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Constraint& r = rows_[i];
    if (std::isnan(r.lower) || std::isnan(r.upper)) {
      throw SolverError("NaN bound on row " + std::to_string(i));
    }
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      if (r.index[k] < 0 || r.index[k] >= n) {
        throw SolverError("row " + std::to_string(i) + " references variable " +
                          std::to_string(r.index[k]) + " which does not exist");
      }
      if (!std::isfinite(r.value[k])) {
        throw SolverError("non-finite coefficient in row " + std::to_string(i));
      }
    }
  }
  if (!std::isfinite(offset_)) throw SolverError("non-finite objective offset");
}

double LinearModel::evaluate(std::span<const double> x) const {
  double v = offset_;
  for (std::size_t j = 0; j < costs_.size() && j < x.size(); ++j) v += costs_[j] * x[j];
  return v;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kGapLimit: return "gap-limit";
    case SolveStatus::kTimeLimit: return "time-limit";
    case SolveStatus::kError: return "error";
  }
  return "error";
}

}  // namespace drotep

#pragma once

// Thin contract to an LP/MILP engine. Models are assembled as plain data
// (LinearModel) and handed to a SolverBackend; nothing outside this header
// and its implementation talks to the engine directly.

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drotep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Term {
  int var;
  double coef;
};

enum class Sense { kMinimize, kMaximize };

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
};

/// lower <= sum(coef * x[var]) <= upper. Equal bounds make an equality row.
struct Constraint {
  double lower = -kInf;
  double upper = kInf;
  std::vector<int> index;
  std::vector<double> value;
};

class LinearModel {
 public:
  int add_variable(double lower, double upper, double cost = 0.0,
                   bool integer = false);
  int add_binary(double cost = 0.0) { return add_variable(0.0, 1.0, cost, true); }

  int add_constraint(double lower, double upper, std::span<const Term> terms);
  int add_constraint(double lower, double upper, std::initializer_list<Term> terms) {
    return add_constraint(lower, upper, std::span<const Term>(terms.begin(), terms.size()));
  }

  void set_cost(int var, double cost) { costs_.at(static_cast<std::size_t>(var)) = cost; }
  void add_cost(int var, double cost) { costs_.at(static_cast<std::size_t>(var)) += cost; }
  void set_bounds(int var, double lower, double upper);
  void set_sense(Sense s) { sense_ = s; }
  void set_offset(double offset) { offset_ = offset; }
  void add_offset(double delta) { offset_ += delta; }

  Sense sense() const { return sense_; }
  double offset() const { return offset_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  const Variable& variable(std::size_t j) const { return vars_[j]; }
  const Constraint& constraint(std::size_t i) const { return rows_[i]; }
  Constraint& constraint(std::size_t i) { return rows_[i]; }
  double cost(std::size_t j) const { return costs_[j]; }
  const std::vector<double>& costs() const { return costs_; }
  bool has_integers() const;

  /// Throws SolverError on out-of-range indices or non-finite coefficients.
  void check() const;

  /// Objective value of a primal point (including the offset).
  double evaluate(std::span<const double> x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<double> costs_;
  std::vector<Constraint> rows_;
  Sense sense_ = Sense::kMinimize;
  double offset_ = 0.0;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kGapLimit, kTimeLimit, kError };

std::string_view to_string(SolveStatus status);

enum class BasisStatus { kLower, kBasic, kUpper, kZero, kNonbasic, kUnknown };

/// Dual sign convention: row_duals[i] and col_duals[j] are the sensitivities
/// of the optimal objective (in the model's own sense) to the active bound of
/// row i / variable j. For min x s.t. x >= 3 the row dual is +1.
struct Solution {
  SolveStatus status = SolveStatus::kError;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> row_activity;
  std::vector<double> row_duals;  // LP only
  std::vector<double> col_duals;  // LP only
  std::vector<BasisStatus> col_basis;  // LP only, when available
  std::vector<BasisStatus> row_basis;
  double mip_gap = 0.0;         // relative, MILP only
  double mip_dual_bound = 0.0;  // MILP only; bound in the model's sense

  bool ok() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kGapLimit;
  }
  bool has_duals() const { return !row_duals.empty(); }
  bool has_basis() const { return !col_basis.empty(); }
};

/// Configuration keys solver.backend / solver.threads / solver.time_limit_s.
struct SolverOptions {
  std::string backend = "highs";
  int threads = 1;
  double time_limit_s = kInf;
  double feasibility_tol = 1e-6;
  double mip_rel_gap = 0.0;
  bool verbose = false;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string_view name() const = 0;
  virtual bool reports_basis() const = 0;
  virtual Solution solve(const LinearModel& model, const SolverOptions& options) = 0;
};

/// Environment variable consulted when no backend is configured explicitly.
inline constexpr const char* kBackendEnvVar = "DRO_TEP_SOLVER_BACKEND";

/// Names accepted by make_backend.
std::vector<std::string> available_backends();

/// Throws SolverError for unknown names.
std::unique_ptr<SolverBackend> make_backend(std::string_view name);

/// Applies DRO_TEP_SOLVER_BACKEND (if set) on top of the given options.
SolverOptions options_from_environment(SolverOptions base = {});

/// Continuous LP. Throws SolverError if the model carries integer variables.
Solution solve_lp(const LinearModel& model, const SolverOptions& options = {});

/// MILP with relative gap `rel_gap` and a wall-clock limit.
Solution solve_mip(const LinearModel& model, double rel_gap, double time_limit_s,
                   const SolverOptions& options = {});

}  // namespace drotep

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "Highs.h"
#include "drotep/error.hpp"
#include "drotep/solver.hpp"

namespace drotep {
namespace {

BasisStatus convert(HighsBasisStatus s) {
  switch (s) {
    case HighsBasisStatus::kLower: return BasisStatus::kLower;
    case HighsBasisStatus::kBasic: return BasisStatus::kBasic;
    case HighsBasisStatus::kUpper: return BasisStatus::kUpper;
    case HighsBasisStatus::kZero: return BasisStatus::kZero;
    case HighsBasisStatus::kNonbasic: return BasisStatus::kNonbasic;
  }
  return BasisStatus::kUnknown;
}

// Builds a column-wise HighsLp. Maximization is solved as minimization of
// the negated objective so that the dual sign convention is uniform.
HighsLp to_highs(const LinearModel& model) {
  HighsLp lp;
  const std::size_t n = model.num_variables();
  const std::size_t m = model.num_constraints();
  const double sign = model.sense() == Sense::kMaximize ? -1.0 : 1.0;
  lp.num_col_ = static_cast<HighsInt>(n);
  lp.num_row_ = static_cast<HighsInt>(m);
  lp.sense_ = ObjSense::kMinimize;
  lp.offset_ = sign * model.offset();
  lp.col_cost_.resize(n);
  lp.col_lower_.resize(n);
  lp.col_upper_.resize(n);
  bool any_integer = false;
  for (std::size_t j = 0; j < n; ++j) {
    lp.col_cost_[j] = sign * model.cost(j);
    lp.col_lower_[j] = model.variable(j).lower;
    lp.col_upper_[j] = model.variable(j).upper;
    any_integer = any_integer || model.variable(j).integer;
  }
  if (any_integer) {
    lp.integrality_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      lp.integrality_[j] = model.variable(j).integer ? HighsVarType::kInteger
                                                     : HighsVarType::kContinuous;
    }
  }
  lp.row_lower_.resize(m);
  lp.row_upper_.resize(m);

  // Row-major input, transposed into CSC.
  std::vector<HighsInt> counts(n + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& r = model.constraint(i);
    lp.row_lower_[i] = r.lower;
    lp.row_upper_[i] = r.upper;
    for (int j : r.index) ++counts[static_cast<std::size_t>(j) + 1];
  }
  for (std::size_t j = 0; j < n; ++j) counts[j + 1] += counts[j];
  lp.a_matrix_.format_ = MatrixFormat::kColwise;
  lp.a_matrix_.num_col_ = lp.num_col_;
  lp.a_matrix_.num_row_ = lp.num_row_;
  lp.a_matrix_.start_ = counts;
  lp.a_matrix_.index_.resize(static_cast<std::size_t>(counts[n]));
  lp.a_matrix_.value_.resize(static_cast<std::size_t>(counts[n]));
  std::vector<HighsInt> fill(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& r = model.constraint(i);
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      auto pos = static_cast<std::size_t>(fill[static_cast<std::size_t>(r.index[k])]++);
      lp.a_matrix_.index_[pos] = static_cast<HighsInt>(i);
      lp.a_matrix_.value_[pos] = r.value[k];
    }
  }
  return lp;
}

class HighsBackend final : public SolverBackend {
 public:
  std::string_view name() const override { return "highs"; }
  bool reports_basis() const override { return true; }

  Solution solve(const LinearModel& model, const SolverOptions& options) override {
    model.check();
    const bool is_mip = model.has_integers();
    const double sign = model.sense() == Sense::kMaximize ? -1.0 : 1.0;

    Solution out;
    if (model.num_variables() == 0) {
      out.status = SolveStatus::kOptimal;
      out.objective = model.offset();
      out.mip_dual_bound = model.offset();
      out.row_activity.assign(model.num_constraints(), 0.0);
      for (std::size_t i = 0; i < model.num_constraints(); ++i) {
        const Constraint& r = model.constraint(i);
        if (r.lower > 0.0 || r.upper < 0.0) out.status = SolveStatus::kInfeasible;
      }
      if (!is_mip) out.row_duals.assign(model.num_constraints(), 0.0);
      return out;
    }

    Highs highs;
    configure(highs, options, is_mip);
    if (highs.passModel(to_highs(model)) == HighsStatus::kError) {
      throw SolverError("highs rejected the model");
    }
    highs.run();
    HighsModelStatus status = highs.getModelStatus();
    if (status == HighsModelStatus::kUnboundedOrInfeasible) {
      // Presolve could not tell which; ask the simplex directly.
      highs.setOptionValue("presolve", "off");
      highs.clearSolver();
      highs.run();
      status = highs.getModelStatus();
    }

    const HighsInfo& info = highs.getInfo();
    switch (status) {
      case HighsModelStatus::kOptimal:
      case HighsModelStatus::kModelEmpty:
        out.status = SolveStatus::kOptimal;
        break;
      case HighsModelStatus::kInfeasible:
        out.status = SolveStatus::kInfeasible;
        return out;
      case HighsModelStatus::kUnbounded:
      case HighsModelStatus::kUnboundedOrInfeasible:
        out.status = SolveStatus::kUnbounded;
        return out;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        out.status = SolveStatus::kTimeLimit;
        if (info.primal_solution_status != kSolutionStatusFeasible) return out;
        break;
      default:
        out.status = SolveStatus::kError;
        return out;
    }

    const HighsSolution& sol = highs.getSolution();
    out.primal = sol.col_value;
    out.row_activity = sol.row_value;
    out.objective = sign * info.objective_function_value;
    if (is_mip) {
      out.mip_dual_bound = sign * info.mip_dual_bound;
      out.mip_gap = std::isfinite(info.mip_gap) ? std::max(0.0, info.mip_gap) : kInf;
      if (out.status == SolveStatus::kOptimal && out.mip_gap > 1e-9) {
        out.status = SolveStatus::kGapLimit;
      }
      // Snap integer columns; HiGHS reports them within its integrality tolerance.
      for (std::size_t j = 0; j < model.num_variables(); ++j) {
        if (model.variable(j).integer) out.primal[j] = std::round(out.primal[j]);
      }
    } else {
      out.mip_dual_bound = out.objective;
      if (sol.dual_valid) {
        out.row_duals.resize(sol.row_dual.size());
        out.col_duals.resize(sol.col_dual.size());
        for (std::size_t i = 0; i < sol.row_dual.size(); ++i) out.row_duals[i] = sign * sol.row_dual[i];
        for (std::size_t j = 0; j < sol.col_dual.size(); ++j) out.col_duals[j] = sign * sol.col_dual[j];
      }
      const HighsBasis& basis = highs.getBasis();
      if (basis.valid) {
        out.col_basis.reserve(basis.col_status.size());
        for (HighsBasisStatus s : basis.col_status) out.col_basis.push_back(convert(s));
        out.row_basis.reserve(basis.row_status.size());
        for (HighsBasisStatus s : basis.row_status) out.row_basis.push_back(convert(s));
      }
    }
    return out;
  }

 private:
  static void configure(Highs& highs, const SolverOptions& o, bool is_mip) {
    highs.setOptionValue("output_flag", o.verbose);
    highs.setOptionValue("threads", std::max(1, o.threads));
    highs.setOptionValue("random_seed", 0);
    highs.setOptionValue("primal_feasibility_tolerance", o.feasibility_tol);
    highs.setOptionValue("dual_feasibility_tolerance", o.feasibility_tol);
    if (std::isfinite(o.time_limit_s)) highs.setOptionValue("time_limit", o.time_limit_s);
    if (is_mip) {
      highs.setOptionValue("mip_rel_gap", o.mip_rel_gap);
      highs.setOptionValue("mip_abs_gap", o.mip_rel_gap > 0.0 ? 1e-6 : 0.0);
      highs.setOptionValue("mip_feasibility_tolerance", o.feasibility_tol);
    } else {
      // Simplex returns vertex solutions with a basis.
      highs.setOptionValue("solver", "simplex");
    }
  }
};

}  // namespace

std::vector<std::string> available_backends() { return {"highs"}; }

std::unique_ptr<SolverBackend> make_backend(std::string_view name) {
  if (name == "highs" || name.empty()) return std::make_unique<HighsBackend>();
  throw SolverError("unknown solver backend '" + std::string(name) + "'");
}

SolverOptions options_from_environment(SolverOptions base) {
  if (const char* env = std::getenv(kBackendEnvVar); env != nullptr && *env != '\0') {
    base.backend = env;
  }
  return base;
}

Solution solve_lp(const LinearModel& model, const SolverOptions& options) {
  if (model.has_integers()) throw SolverError("solve_lp called on a model with integer variables");
  return make_backend(options.backend)->solve(model, options);
}

Solution solve_mip(const LinearModel& model, double rel_gap, double time_limit_s,
                   const SolverOptions& options) {
  if (rel_gap < 0.0) throw SolverError("relative MIP gap must be nonnegative");
  SolverOptions o = options;
  o.mip_rel_gap = rel_gap;
  o.time_limit_s = std::min(o.time_limit_s, time_limit_s);
  return make_backend(o.backend)->solve(model, o);
}

}  // namespace drotep

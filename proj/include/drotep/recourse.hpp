#pragma once

// Worst-case expected dispatch cost H_DR(x, omega) over all distributions on
// the support box whose mean lies in [mu_lower, mu_upper].
//
// Restricted primal over a pool {xi^k}:
//   max sum_k g(x, xi^k) p_k  s.t.  sum_k p_k = 1,
//       mu_lower <= sum_k xi^k p_k <= mu_upper,  p >= 0.
// Its dual (alpha0 free, alpha_upper, alpha_lower >= 0) prices new columns;
// the oracle maximizes the reduced cost
//   g(x, xi) - alpha0 - (alpha_upper - alpha_lower)' xi
// over the box vertices as a MILP.

#include <cstddef>
#include <limits>
#include <vector>

#include "drotep/case.hpp"
#include "drotep/solver.hpp"
#include "drotep/uncertainty.hpp"

namespace drotep {

struct RecourseOptions {
  double oracle_mip_gap = 0.0;
  double oracle_time_limit_s = kInf;
  /// Initial |pi| bound as a multiple of hours * max(shed, surplus cost).
  double pi_bound_scale = 1.0;
  int max_price_escalations = 5;
  std::size_t vertex_cap = kDefaultVertexCap;
  SolverOptions solver;
};

struct MomentDuals {
  double alpha0 = 0.0;
  std::vector<double> alpha_upper;  // >= 0, prices mu_upper
  std::vector<double> alpha_lower;  // >= 0, prices mu_lower

  /// alpha_upper - alpha_lower.
  std::vector<double> gamma() const;
  /// Objective of the moment dual: alpha0 + mu_upper'alpha_upper - mu_lower'alpha_lower.
  double objective(const MomentInterval& moments) const;
};

struct RecourseState {
  std::vector<NetDemandPoint> pool;
  std::vector<double> costs;          // g(x, xi^k)
  std::vector<double> probabilities;  // worst-case p^k, aligned with pool
  std::vector<double> contributions;  // g * p
  std::vector<bool> basic;            // p^k basic in the final LP (if reported)
  bool basis_reported = false;
  MomentDuals duals;
  double h_lower = 0.0;

  // Filled by the oracle / inner loop.
  double c_star = std::numeric_limits<double>::quiet_NaN();
  double c_star_bound = std::numeric_limits<double>::quiet_NaN();
  NetDemandPoint xi_star;
  int inner_iterations = 0;
  /// Pool size before the inner loop started; later points are new.
  std::size_t initial_pool_size = 0;
  bool converged = false;      // c_star <= tolerance
  bool duplicate_stop = false; // oracle returned a pooled point
};

struct BruteForceResult {
  double h_dr = 0.0;
  std::vector<NetDemandPoint> vertices;
  std::vector<double> costs;
  std::vector<double> probabilities;
};

/// Exact H_DR by full vertex enumeration. Throws VertexCapExceeded.
BruteForceResult recourse_bruteforce(const CaseData& data, const LongTermScenario& scenario,
                                     const std::vector<double>& x,
                                     const RecourseOptions& options = {});

/// Restricted moment LP over `pool`. Evaluates g at every pool point.
RecourseState constrained_recourse(const CaseData& data, const LongTermScenario& scenario,
                                   const std::vector<double>& x,
                                   std::vector<NetDemandPoint> pool,
                                   const RecourseOptions& options = {});

/// Same with g values already known (aligned with pool).
RecourseState constrained_recourse(const LongTermScenario& scenario,
                                   std::vector<NetDemandPoint> pool, std::vector<double> costs,
                                   const SolverOptions& solver = {});

struct OracleResult {
  double c_star = 0.0;        // incumbent reduced cost
  double c_star_bound = 0.0;  // MILP dual bound (>= c_star)
  NetDemandPoint xi_star;
  /// Dispatch dual objective inside the MILP at xi_star; equals g(x, xi_star)
  /// when the linearization is exact.
  double internal_dispatch_value = 0.0;
  int escalations = 0;
  double max_price_bound = 0.0;
};

OracleResult oracle_max_reduced_cost(const CaseData& data, const LongTermScenario& scenario,
                                     const std::vector<double>& x, const MomentDuals& duals,
                                     const RecourseOptions& options = {});

/// Column generation from `pool`: LP, oracle, append, repeat. Stops when the
/// reduced cost is <= eps, after L oracle calls, or on a repeated point.
RecourseState dwp_inner_loop(const CaseData& data, const LongTermScenario& scenario,
                             const std::vector<double>& x, std::vector<NetDemandPoint> pool,
                             int max_inner, double eps, const RecourseOptions& options = {});

/// H_lower + max(c_star_bound, 0).
double recourse_upper_bound(const RecourseState& state);

}  // namespace drotep

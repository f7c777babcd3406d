#pragma once

// LP duality helpers for bounded-row, bounded-column minimization models.
//
// Primal:  min c'y + c0   s.t.  L <= Ay <= U,  l <= y <= u.
// Dual:    max c0 + sum_i (L_i a_i + U_i b_i) + sum_j (l_j s_j + u_j t_j)
//          s.t. A'(a + b) + s + t = c,  a >= 0, b <= 0, s >= 0, t <= 0,
// with a multiplier dropped when its bound is infinite and merged into one
// free multiplier when the two bounds coincide.

#include <span>
#include <vector>

#include "drotep/solver.hpp"

namespace drotep {

struct DualModel {
  LinearModel model;  // maximization
  /// Dual column for the lower / upper side of each primal row; -1 when the
  /// side is infinite. Equality rows map both sides to one free column.
  std::vector<int> row_lower;
  std::vector<int> row_upper;
  std::vector<int> col_lower;
  std::vector<int> col_upper;
};

/// Throws SolverError unless the primal is a continuous minimization.
DualModel build_dual(const LinearModel& primal);

/// Dual objective of (row_duals, col_duals) in the sensitivity convention of
/// Solution. Returns -inf when a multiplier larger than dual_tol sits on an
/// infinite bound.
double dual_objective(const LinearModel& primal, std::span<const double> row_duals,
                      std::span<const double> col_duals, double dual_tol = 1e-7);

}  // namespace drotep

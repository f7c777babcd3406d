#pragma once

// Out-of-sample Monte Carlo evaluation of a fixed investment plan.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drotep/case.hpp"
#include "drotep/solver.hpp"
#include "drotep/uncertainty.hpp"

namespace drotep {

enum class DistributionFamily { kNormalCoverage, kBetaSymmetric };

/// Independent per-dimension law over each support interval.
struct DistributionSpec {
  DistributionFamily family = DistributionFamily::kBetaSymmetric;
  /// Coverage fraction (normal) or shape a = b (beta).
  double parameter = 4.5;

  static DistributionSpec normal(double coverage) {
    return {DistributionFamily::kNormalCoverage, coverage};
  }
  static DistributionSpec beta(double shape) { return {DistributionFamily::kBetaSymmetric, shape}; }

  /// "normal" or "beta".
  std::string family_name() const;
  /// Throws ValidationError for coverage outside (0,1) or shape <= 0.
  void validate() const;
};

/// Parses "normal" / "beta"; throws Error otherwise.
DistributionFamily parse_family(const std::string& name);

/// Normal sigma centred on the interval midpoint such that the interval
/// carries `coverage` probability. Zero for a degenerate interval.
double sigma_for_coverage(double lo, double hi, double coverage);

/// n independent draws; reproducible from `seed`. Normal draws are not
/// clipped to the support.
std::vector<NetDemandPoint> sample_net_demand(const LongTermScenario& scenario,
                                              const DistributionSpec& spec, std::size_t n,
                                              std::uint64_t seed);

/// Per-scenario seed derived from the run seed.
std::uint64_t scenario_seed(std::uint64_t seed, std::size_t scenario_index);

/// Percentage of days whose shed strictly exceeds 0.5% of nominal_daily.
double reliability_index(std::span<const double> daily_shed, double nominal_daily);

/// Daily nominal demand (MWh): sum over periods and dimensions of the
/// moment-interval midpoint, plus fixed nominal demand, times period hours.
/// The case's nominal_daily_demand overrides it.
double nominal_daily_demand(const CaseData& data, const LongTermScenario& scenario);

struct ScenarioReport {
  std::string id;
  double weight = 0.0;
  std::size_t n = 0;
  double mean_dispatch_cost = 0.0;
  double min_cost = 0.0;
  double max_cost = 0.0;
  double p05 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double mean_shed_mwh = 0.0;
  double nominal_daily_mwh = 0.0;
  double ri_pct = 0.0;
  std::vector<double> costs;        // per sample (day)
  std::vector<double> daily_shed;   // MWh per sample
};

struct SimulationReport {
  DistributionSpec spec;
  std::uint64_t seed = 0;
  std::size_t n = 0;  // samples per scenario
  std::vector<double> x;
  double investment_cost = 0.0;
  /// rho-weighted mean dispatch cost, investment excluded.
  double expected_dispatch_cost = 0.0;
  /// expected_dispatch_cost + investment_cost.
  double expected_total_cost = 0.0;
  double ri_weighted_pct = 0.0;
  std::vector<ScenarioReport> scenarios;
};

/// Solves one dispatch per sample. `samples[w]` belongs to scenario w.
/// Throws Error on empty sample sets; solver failures name the sample.
SimulationReport evaluate_plan(const std::vector<double>& x, const CaseData& data,
                               const std::vector<std::vector<NetDemandPoint>>& samples,
                               int threads = 0, const SolverOptions& solver = {});

/// sample_net_demand for every scenario followed by evaluate_plan.
SimulationReport simulate_plan(const std::vector<double>& x, const CaseData& data,
                               const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                               int threads = 0, const SolverOptions& solver = {});

}  // namespace drotep

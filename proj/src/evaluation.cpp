#include "drotep/evaluation.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>

#include "drotep/dispatch.hpp"
#include "drotep/error.hpp"
#include "parallel.hpp"

namespace drotep {
namespace {

// Linear interpolation between order statistics.
double percentile(std::vector<double> sorted_values, double q) {
  std::sort(sorted_values.begin(), sorted_values.end());
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

}  // namespace

std::string DistributionSpec::family_name() const {
  return family == DistributionFamily::kNormalCoverage ? "normal" : "beta";
}

void DistributionSpec::validate() const {
  if (family == DistributionFamily::kNormalCoverage) {
    if (!(parameter > 0.0 && parameter < 1.0)) {
      throw ValidationError("param", "normal coverage must lie in (0, 1)");
    }
  } else if (!(parameter > 0.0) || !std::isfinite(parameter)) {
    throw ValidationError("param", "beta shape must be positive");
  }
}

DistributionFamily parse_family(const std::string& name) {
  if (name == "normal") return DistributionFamily::kNormalCoverage;
  if (name == "beta") return DistributionFamily::kBetaSymmetric;
  throw Error("unknown distribution '" + name + "' (expected normal or beta)");
}

double sigma_for_coverage(double lo, double hi, double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw ValidationError("coverage", "must lie in (0, 1)");
  }
  if (hi < lo) throw ValidationError("interval", "upper bound below lower bound");
  if (hi == lo) return 0.0;
  const boost::math::normal_distribution<double> standard;
  const double z = boost::math::quantile(standard, 0.5 * (1.0 + coverage));
  return 0.5 * (hi - lo) / z;
}

std::uint64_t scenario_seed(std::uint64_t seed, std::size_t scenario_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(scenario_index)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<NetDemandPoint> sample_net_demand(const LongTermScenario& sc,
                                              const DistributionSpec& spec, std::size_t n,
                                              std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw Error("at least one sample is required");
  const BoxSupport& box = sc.support;
  const std::size_t d = box.dimension();
  std::mt19937_64 rng(seed);
  std::vector<NetDemandPoint> out(n);

  if (spec.family == DistributionFamily::kNormalCoverage) {
    std::vector<double> sigma(d);
    for (std::size_t i = 0; i < d; ++i) sigma[i] = sigma_for_coverage(box.lower[i], box.upper[i], spec.parameter);
    std::normal_distribution<double> standard(0.0, 1.0);
    for (NetDemandPoint& p : out) {
      p.values.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double mid = 0.5 * (box.lower[i] + box.upper[i]);
        p.values[i] = mid + sigma[i] * standard(rng);
      }
    }
  } else {
    // Beta(a, a) as G1 / (G1 + G2) with Gi ~ Gamma(a, 1).
    std::gamma_distribution<double> gamma(spec.parameter, 1.0);
    for (NetDemandPoint& p : out) {
      p.values.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double g1 = gamma(rng);
        const double g2 = gamma(rng);
        const double b = g1 / (g1 + g2);
        p.values[i] = box.lower[i] + b * (box.upper[i] - box.lower[i]);
      }
    }
  }
  return out;
}

double reliability_index(std::span<const double> daily_shed, double nominal_daily) {
  if (!(nominal_daily > 0.0)) throw ValidationError("nominal_daily", "must be positive");
  if (daily_shed.empty()) throw Error("reliability index of an empty sample");
  const double threshold = 0.005 * nominal_daily;
  const auto bad = std::count_if(daily_shed.begin(), daily_shed.end(),
                                 [&](double s) { return s > threshold; });
  return 100.0 * static_cast<double>(bad) / static_cast<double>(daily_shed.size());
}

double nominal_daily_demand(const CaseData& data, const LongTermScenario& sc) {
  if (sc.nominal_daily_demand) return *sc.nominal_daily_demand;
  double total = 0.0;
  for (std::size_t i = 0; i < sc.moments.mu_lower.size(); ++i) {
    total += 0.5 * (sc.moments.mu_lower[i] + sc.moments.mu_upper[i]);
  }
  for (std::size_t t = 0; t < static_cast<std::size_t>(data.periods.count); ++t) {
    for (std::size_t n = 0; n < data.network.bus_count(); ++n) total += sc.nominal(t, n);
  }
  return total * data.periods.hours;
}

SimulationReport evaluate_plan(const std::vector<double>& x, const CaseData& data,
                               const std::vector<std::vector<NetDemandPoint>>& samples,
                               int threads, const SolverOptions& solver) {
  if (x.size() != data.network.candidate_count()) {
    throw Error("plan has " + std::to_string(x.size()) + " investment entries, case has " +
                std::to_string(data.network.candidate_count()) + " candidate lines");
  }
  if (samples.size() != data.scenarios.size()) throw Error("one sample set per scenario is required");

  SimulationReport report;
  report.x = x;
  report.investment_cost = data.investment_cost(x);
  for (std::size_t w = 0; w < data.scenarios.size(); ++w) {
    const LongTermScenario& sc = data.scenarios[w];
    const auto& set = samples[w];
    if (set.empty()) throw Error("empty evaluation: scenario '" + sc.id + "' has no samples");

    struct Day {
      double cost;
      double shed;
    };
    std::vector<Day> days = detail::parallel_map(set.size(), threads, [&](std::size_t k) {
      try {
        DispatchResult r = dispatch_cost(data, sc, x, set[k].values, solver);
        return Day{r.cost, r.total_shed_mwh(data.periods.hours)};
      } catch (const Error& e) {
        throw SolverError("scenario '" + sc.id + "', sample " + std::to_string(k) + ": " + e.what());
      }
    });

    ScenarioReport s;
    s.id = sc.id;
    s.weight = sc.weight;
    s.n = days.size();
    double sum_cost = 0.0;
    double sum_shed = 0.0;
    for (const Day& day : days) {
      s.costs.push_back(day.cost);
      s.daily_shed.push_back(day.shed);
      sum_cost += day.cost;
      sum_shed += day.shed;
    }
    s.mean_dispatch_cost = sum_cost / static_cast<double>(s.n);
    s.mean_shed_mwh = sum_shed / static_cast<double>(s.n);
    s.min_cost = *std::min_element(s.costs.begin(), s.costs.end());
    s.max_cost = *std::max_element(s.costs.begin(), s.costs.end());
    s.p05 = percentile(s.costs, 0.05);
    s.p50 = percentile(s.costs, 0.50);
    s.p95 = percentile(s.costs, 0.95);
    s.nominal_daily_mwh = nominal_daily_demand(data, sc);
    s.ri_pct = reliability_index(s.daily_shed, s.nominal_daily_mwh);

    report.n = std::max(report.n, s.n);
    report.expected_dispatch_cost += sc.weight * s.mean_dispatch_cost;
    report.ri_weighted_pct += sc.weight * s.ri_pct;
    report.scenarios.push_back(std::move(s));
  }
  report.expected_total_cost = report.expected_dispatch_cost + report.investment_cost;
  return report;
}

SimulationReport simulate_plan(const std::vector<double>& x, const CaseData& data,
                               const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                               int threads, const SolverOptions& solver) {
  spec.validate();
  if (n == 0) throw Error("empty evaluation: --n must be at least 1");
  std::vector<std::vector<NetDemandPoint>> samples;
  for (std::size_t w = 0; w < data.scenarios.size(); ++w) {
    samples.push_back(sample_net_demand(data.scenarios[w], spec, n, scenario_seed(seed, w)));
  }
  SimulationReport r = evaluate_plan(x, data, samples, threads, solver);
  r.spec = spec;
  r.seed = seed;
  return r;
}

}  // namespace drotep

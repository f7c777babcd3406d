#pragma once

// Planning instance: network, long-term scenarios and investment policy.
//
// Bus references inside the model are 0-based indices into
// Network::bus_ids; the case file uses the declared bus ids.

#include <cstddef>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drotep {

/// Dense row-major matrix used for allocation blocks.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct ExistingLine {
  std::size_t from = 0;
  std::size_t to = 0;
  double susceptance = 0.0;  // p.u.
  double capacity = 0.0;     // MW
  std::string name;

  friend bool operator==(const ExistingLine&, const ExistingLine&) = default;
};

struct CandidateLine {
  std::size_t from = 0;
  std::size_t to = 0;
  double susceptance = 0.0;  // p.u.
  double capacity = 0.0;     // MW
  double cost = 0.0;         // $
  std::string name;

  friend bool operator==(const CandidateLine&, const CandidateLine&) = default;
};

struct Generator {
  std::size_t bus = 0;
  std::string name;

  friend bool operator==(const Generator&, const Generator&) = default;
};

struct Network {
  std::vector<int> bus_ids;
  std::vector<ExistingLine> existing_lines;
  std::vector<CandidateLine> candidate_lines;
  std::vector<Generator> generators;
  double base_mva = 100.0;
  /// Bound on the angle spread across a line; sizes the disjunctive big-M.
  double max_angle_spread = 2.0 * std::numbers::pi;

  std::size_t bus_count() const { return bus_ids.size(); }
  std::size_t line_count() const {
    return existing_lines.size() + candidate_lines.size();
  }
  std::size_t candidate_count() const { return candidate_lines.size(); }
  std::size_t generator_count() const { return generators.size(); }

  friend bool operator==(const Network&, const Network&) = default;
};

struct BoxSupport {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }
  bool degenerate(std::size_t i) const { return lower[i] == upper[i]; }

  friend bool operator==(const BoxSupport&, const BoxSupport&) = default;
};

struct MomentInterval {
  std::vector<double> mu_lower;
  std::vector<double> mu_upper;

  friend bool operator==(const MomentInterval&, const MomentInterval&) = default;
};

struct Periods {
  int count = 1;
  double hours = 1.0;
  int dims_per_period = 1;

  friend bool operator==(const Periods&, const Periods&) = default;
};

struct LongTermScenario {
  std::string id;
  double weight = 1.0;
  BoxSupport support;
  MomentInterval moments;
  /// One buses x dims_per_period block per period.
  std::vector<Matrix> allocation;
  std::vector<double> gen_cost;      // $/MWh
  std::vector<double> gen_capacity;  // MW
  std::optional<std::vector<double>> ramp_down;  // MW/period
  std::optional<std::vector<double>> ramp_up;    // MW/period
  std::vector<double> shed_cost;     // $/MWh per bus
  std::vector<double> surplus_cost;  // $/MWh per bus
  /// periods x buses fixed demand added to the allocated net demand; empty
  /// means zero everywhere.
  std::vector<std::vector<double>> nominal_demand;
  /// Activates ramp limits in the first period.
  std::optional<std::vector<double>> initial_generation;
  /// Overrides the derived daily nominal demand used by the reliability index.
  std::optional<double> nominal_daily_demand;

  double nominal(std::size_t period, std::size_t bus) const {
    return nominal_demand.empty() ? 0.0 : nominal_demand[period][bus];
  }

  friend bool operator==(const LongTermScenario&,
                         const LongTermScenario&) = default;
};

struct InvestmentPolicy {
  std::optional<double> budget;
  std::optional<int> max_new_lines;

  friend bool operator==(const InvestmentPolicy&,
                         const InvestmentPolicy&) = default;
};

struct CaseData {
  std::string name;
  Network network;
  Periods periods;
  std::vector<LongTermScenario> scenarios;
  InvestmentPolicy investment_policy;

  /// Dimension d of the uncertainty vector.
  std::size_t dimension() const {
    return static_cast<std::size_t>(periods.count) *
           static_cast<std::size_t>(periods.dims_per_period);
  }

  double investment_cost(const std::vector<double>& x) const;

  friend bool operator==(const CaseData&, const CaseData&) = default;
};

/// Reads, parses and validates a case file. Throws ParseError or
/// ValidationError; a missing file raises ParseError("file not found: ...").
CaseData load_case(const std::filesystem::path& path);

CaseData parse_case(std::string_view json_text);

/// Canonical JSON form (explicit per-period allocation blocks).
std::string serialize_case(const CaseData& data);

void save_case(const CaseData& data, const std::filesystem::path& path);

/// Checks every invariant; throws ValidationError naming the first offender.
void validate_case(const CaseData& data);

/// True when x is binary, sized to the candidate set and satisfies the
/// budget / line-count policy.
bool is_feasible_investment(const CaseData& data, const std::vector<double>& x);

}  // namespace drotep

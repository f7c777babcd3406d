#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "drotep/case.hpp"
#include "drotep/error.hpp"
#include "drotep/uncertainty.hpp"
#include "json.hpp"

using namespace drotep;
using nlohmann::json;

namespace {

std::string data_path(const std::string& name) { return std::string(DROTEP_DATA_DIR) + "/" + name; }

json toy2_json() {
  std::ifstream in(data_path("toy2.json"));
  return json::parse(in);
}

}  // namespace

TEST(LoadCase, Toy2) {
  CaseData c = load_case(data_path("toy2.json"));
  EXPECT_EQ(c.dimension(), 2u);
  EXPECT_EQ(c.scenarios.size(), 1u);
  EXPECT_EQ(c.network.bus_count(), 2u);
  EXPECT_EQ(c.network.candidate_count(), 1u);
  EXPECT_EQ(c.scenarios[0].allocation.size(), 2u);
  EXPECT_DOUBLE_EQ(c.network.base_mva, 100.0);
}

TEST(LoadCase, MissingFile) {
  try {
    load_case("/nonexistent/missing.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("file not found"), std::string::npos);
  }
}

TEST(LoadCase, MalformedJson) { EXPECT_THROW(parse_case("{not json"), ParseError); }

TEST(LoadCase, UnknownKeyRejected) {
  json j = toy2_json();
  j["network"]["extra"] = 1;
  EXPECT_THROW(parse_case(j.dump()), ParseError);
  j = toy2_json();
  j["scenarios"][0]["bogus"] = true;
  EXPECT_THROW(parse_case(j.dump()), ParseError);
}

TEST(LoadCase, MuLowerAboveMuUpper) {
  json j = toy2_json();
  j["scenarios"][0]["moments"]["mu_lower"] = {53.0, 48.0};
  try {
    parse_case(j.dump());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(e.field().find("mu"), std::string::npos);
  }
}

TEST(LoadCase, MomentOutsideSupport) {
  json j = toy2_json();
  j["scenarios"][0]["moments"]["mu_upper"] = {61.0, 52.0};
  EXPECT_THROW(parse_case(j.dump()), ValidationError);
}

TEST(LoadCase, WeightsMustSumToOne) {
  json j = toy2_json();
  j["scenarios"][0]["weight"] = 0.9;
  EXPECT_THROW(parse_case(j.dump()), ValidationError);
}

TEST(LoadCase, LineInvariants) {
  json j = toy2_json();
  j["network"]["existing_lines"][0]["to"] = 7;
  EXPECT_THROW(parse_case(j.dump()), ValidationError);
  j = toy2_json();
  j["network"]["candidate_lines"][0]["cost"] = 0.0;
  EXPECT_THROW(parse_case(j.dump()), ValidationError);
  j = toy2_json();
  j["network"]["existing_lines"][0]["capacity"] = -1.0;
  EXPECT_THROW(parse_case(j.dump()), ValidationError);
}

TEST(LoadCase, ShedCostMustExceedGenerationCost) {
  json j = toy2_json();
  j["scenarios"][0]["shed_cost"] = {5.0, 1000.0};
  EXPECT_THROW(parse_case(j.dump()), ValidationError);
}

TEST(LoadCase, DimensionMismatch) {
  json j = toy2_json();
  j["scenarios"][0]["support"]["lower"] = {40.0};
  EXPECT_THROW(parse_case(j.dump()), ValidationError);
  j = toy2_json();
  j["scenarios"][0]["allocation"] = {{0.0}, {1.0}, {1.0}};
  EXPECT_THROW(parse_case(j.dump()), Error);
}

TEST(LoadCase, RoundTrip) {
  for (const char* name : {"toy2.json", "garver6_d2.json", "garver6_d4.json", "garver6_d6.json",
                           "garver6_d4_two.json"}) {
    if (!std::filesystem::exists(data_path(name))) continue;
    CaseData a = load_case(data_path(name));
    CaseData b = parse_case(serialize_case(a));
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(serialize_case(a), serialize_case(b)) << name;
  }
}

TEST(Investment, Policy) {
  json j = toy2_json();
  j["investment_policy"] = {{"max_new_lines", 0}};
  CaseData c = parse_case(j.dump());
  EXPECT_TRUE(is_feasible_investment(c, {0.0}));
  EXPECT_FALSE(is_feasible_investment(c, {1.0}));
  EXPECT_FALSE(is_feasible_investment(c, {0.5}));
  EXPECT_FALSE(is_feasible_investment(c, {0.0, 0.0}));
  EXPECT_DOUBLE_EQ(load_case(data_path("toy2.json")).investment_cost({1.0}), 1000.0);
}

TEST(Vertices, Box2) {
  BoxSupport box{{40, 40}, {60, 60}};
  auto v = enumerate_vertices(box, 16);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0].values, (std::vector<double>{40, 40}));
  EXPECT_EQ(v[1].values, (std::vector<double>{40, 60}));
  EXPECT_EQ(v[2].values, (std::vector<double>{60, 40}));
  EXPECT_EQ(v[3].values, (std::vector<double>{60, 60}));
  for (const auto& p : v) EXPECT_EQ(p.origin, PointOrigin::kVertex);
}

TEST(Vertices, Singleton) {
  BoxSupport box{{50, 50}, {50, 50}};
  auto v = enumerate_vertices(box, 1);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].values, (std::vector<double>{50, 50}));
}

TEST(Vertices, CapExceeded) {
  BoxSupport box{std::vector<double>(8, 0.0), std::vector<double>(8, 1.0)};
  try {
    enumerate_vertices(box, 100);
    FAIL();
  } catch (const VertexCapExceeded& e) {
    EXPECT_EQ(e.required(), 256u);
    EXPECT_EQ(e.cap(), 100u);
  }
}

TEST(Vertices, CountAndMembershipProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::bernoulli_distribution degen(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 7;
    BoxSupport box;
    std::size_t expected = 1;
    for (std::size_t i = 0; i < d; ++i) {
      double lo = u(rng);
      double hi = degen(rng) ? lo : lo + 1.0 + u(rng);
      box.lower.push_back(lo);
      box.upper.push_back(hi);
      if (hi > lo) expected *= 2;
    }
    auto v = enumerate_vertices(box);
    ASSERT_EQ(v.size(), expected);
    EXPECT_EQ(vertex_count(box), expected);
    for (const auto& p : v) {
      EXPECT_TRUE(inside_box(box, p));
      EXPECT_TRUE(is_vertex(box, p));
    }
    for (std::size_t a = 0; a < v.size(); ++a) {
      for (std::size_t b = a + 1; b < v.size(); ++b) EXPECT_FALSE(v[a].same_values(v[b]));
    }
  }
}

TEST(Dummy, Midpoints) {
  LongTermScenario s;
  s.moments = {{48, 48}, {52, 52}};
  EXPECT_EQ(dummy_scenario(s).values, (std::vector<double>{50, 50}));
  EXPECT_EQ(dummy_scenario(s).origin, PointOrigin::kDummy);
  s.moments = {{50, 50}, {50, 50}};
  EXPECT_EQ(dummy_scenario(s).values, (std::vector<double>{50, 50}));
  s.moments = {{40, 48}, {60, 52}};
  EXPECT_EQ(dummy_scenario(s).values, (std::vector<double>{50, 50}));
}

TEST(Dummy, InsideMomentInterval) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    LongTermScenario s;
    for (int i = 0; i < 4; ++i) {
      double a = u(rng), b = u(rng);
      s.moments.mu_lower.push_back(std::min(a, b));
      s.moments.mu_upper.push_back(std::max(a, b));
    }
    auto p = dummy_scenario(s);
    for (int i = 0; i < 4; ++i) {
      EXPECT_LE(s.moments.mu_lower[i], p.values[i]);
      EXPECT_LE(p.values[i], s.moments.mu_upper[i]);
    }
  }
}

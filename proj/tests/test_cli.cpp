#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "drotep/cli.hpp"
#include "drotep/error.hpp"
#include "drotep/io.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace drotep;
using drotep::test::data_path;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("drotep_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SolveFva) {
  CliRun r = cli({"solve", data_path("toy2.json"), "--mode", "fva", "--out", path("fva")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json plan = json::parse(slurp(path("fva/plan.json")));
  EXPECT_NEAR(plan["z"].get<double>(), 2040.0, 1e-5);
  EXPECT_EQ(plan["x"], json::array({1.0}));
  EXPECT_EQ(plan["mode"], "fva");
  EXPECT_EQ(plan["metadata"]["seed"], "0");
  EXPECT_TRUE(fs::exists(path("fva/trace.csv")));
}

TEST_F(CliTest, SolveEccgMatchesFva) {
  CliRun r = cli({"solve", data_path("toy2.json"), "--mode", "eccg", "-M", "4", "--out", path("e")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json plan = json::parse(slurp(path("e/plan.json")));
  EXPECT_EQ(plan["x"], json::array({1.0}));
  EXPECT_LE(plan["gap_pct"].get<double>(), 1.0);
  const std::string trace = slurp(path("e/trace.csv"));
  EXPECT_NE(trace.find("method,iter,t_master_s,t_dwp_s,t_iter_s,t_accum_s,gap_pct,inner_iters_base"),
            std::string::npos);
  EXPECT_NE(trace.find("# M: 4"), std::string::npos);
}

TEST_F(CliTest, MissingCase) {
  CliRun r = cli({"solve", path("missing.json")});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("file not found"), std::string::npos);
}

TEST_F(CliTest, BadArguments) {
  EXPECT_EQ(cli({}).code, kExitError);
  EXPECT_EQ(cli({"solve", data_path("toy2.json"), "--mode", "benders"}).code, kExitError);
  EXPECT_EQ(cli({"solve", data_path("toy2.json"), "-M", "0"}).code, kExitError);
  EXPECT_EQ(cli({"solve", data_path("toy2.json"), "--backend", "nope"}).code, kExitError);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitError);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, IterationLimitExitsTwo) {
  CliRun r = cli({"solve", data_path("garver6_d6.json"), "--mode", "ccg", "--max-iter", "1",
               "--eps", "0", "--out", path("lim")});
  EXPECT_EQ(r.code, kExitLimit) << r.err;
  json plan = json::parse(slurp(path("lim/plan.json")));
  EXPECT_EQ(plan["status"], "iteration-limit");
  EXPECT_LE(plan["lb"].get<double>(), plan["ub"].get<double>());
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  {
    std::ofstream cfg(path("run.json"));
    cfg << R"({"mode": "ccg", "eps": 0.02, "seed": 9})";
  }
  CliRun r = cli({"solve", data_path("toy2.json"), "--config", path("run.json"), "--seed", "4",
               "--out", path("c")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json plan = json::parse(slurp(path("c/plan.json")));
  EXPECT_EQ(plan["mode"], "ccg");
  EXPECT_EQ(plan["metadata"]["eps"], "0.02");
  EXPECT_EQ(plan["metadata"]["seed"], "4");
  {
    std::ofstream cfg(path("bad.json"));
    cfg << R"({"mode": "ccg", "epsilon": 0.02})";
  }
  EXPECT_EQ(cli({"solve", data_path("toy2.json"), "--config", path("bad.json")}).code, kExitError);
}

TEST_F(CliTest, EvaluateDeterministic) {
  ASSERT_EQ(cli({"solve", data_path("toy2.json"), "--mode", "fva", "--out", path("p")}).code,
            kExitOk);
  const std::string plan = path("p/plan.json");
  for (const char* sub : {"a", "b"}) {
    CliRun r = cli({"evaluate", data_path("toy2.json"), plan, "--dist", "beta", "--param", "4.5",
                 "--n", "300", "--seed", "3", "--out", path(sub)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("ri_pct=0"), std::string::npos);
  }
  EXPECT_EQ(slurp(path("a/report.csv")), slurp(path("b/report.csv")));
  EXPECT_EQ(slurp(path("a/report.json")), slurp(path("b/report.json")));
  json rep = json::parse(slurp(path("a/report.json")));
  EXPECT_EQ(rep["metadata"]["seed"], "3");
}

TEST_F(CliTest, EvaluateErrors) {
  ASSERT_EQ(cli({"solve", data_path("toy2.json"), "--mode", "fva", "--out", path("p")}).code,
            kExitOk);
  EXPECT_EQ(cli({"evaluate", data_path("toy2.json"), path("p/plan.json"), "--n", "0"}).code,
            kExitError);
  // Plan from a different case: candidate count mismatch.
  EXPECT_EQ(cli({"evaluate", data_path("garver6_d2.json"), path("p/plan.json"), "--n", "5"}).code,
            kExitError);
  EXPECT_EQ(cli({"evaluate", data_path("toy2.json"), path("none.json")}).code, kExitError);
}

TEST_F(CliTest, CompareModes) {
  CliRun r = cli({"compare", data_path("toy2.json"), "--modes", "fva,ccg,eccg", "--master-gap", "0",
               "--out", path("cmp")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(slurp(path("cmp/compare.csv")));
  std::vector<std::string> rows;
  for (std::string line; std::getline(csv, line);) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].rfind("mode,status,new_lines,investment_cost,total_cost", 0), 0u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].substr(rows[i].rfind(',') + 1), "1") << rows[i];
  }
}

TEST_F(CliTest, CompareNeedsTwoModes) {
  EXPECT_EQ(cli({"compare", data_path("toy2.json"), "--modes", "fva"}).code, kExitError);
}

TEST_F(CliTest, CompareMarksCapExceeded) {
  CliRun r = cli({"compare", data_path("garver6_d12.json"), "--modes", "fva,dtep", "--out",
               path("cap")});
  EXPECT_EQ(r.code, kExitLimit);
  const std::string csv = slurp(path("cap/compare.csv"));
  EXPECT_NE(csv.find("fva,cap-exceeded"), std::string::npos);
  EXPECT_NE(csv.find("dtep,converged"), std::string::npos);
}

TEST_F(CliTest, NoTimingsIsByteIdentical) {
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(cli({"solve", data_path("garver6_d2_two.json"), "-M", "2", "--no-timings", "--out",
                   path(sub)})
                  .code,
              kExitOk);
  }
  EXPECT_EQ(slurp(path("a/plan.json")), slurp(path("b/plan.json")));
  EXPECT_EQ(slurp(path("a/trace.csv")), slurp(path("b/trace.csv")));
}

TEST_F(CliTest, Validate) {
  CliRun r = cli({"validate", data_path("garver6_d4_two.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("d=4"), std::string::npos);
  EXPECT_NE(r.out.find("scenarios=2"), std::string::npos);
}

TEST(Io, FormatNumber) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(2040.0), "2040");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(kInf), "inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Io, RunConfigParsing) {
  RunConfig c = parse_run_config(R"({"mode": "eccg", "L": 8, "M": 3, "solver": {"threads": 2}})");
  EXPECT_EQ(c.mode, Mode::kEccg);
  EXPECT_EQ(c.max_inner, 8);
  EXPECT_EQ(c.top_m, 3);
  EXPECT_EQ(c.solver.threads, 2);
  EXPECT_THROW(parse_run_config(R"({"L": "many"})"), Error);
  EXPECT_THROW(parse_run_config(R"({"solver": {"gpu": true}})"), Error);
  EXPECT_THROW(parse_run_config("[1, 2]"), Error);
}

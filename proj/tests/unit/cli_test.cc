// Copyright 2026 The btb-equilibria Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "btb/errors.h"
#include "commands.h"
#include "config.h"
#include "json.hpp"

namespace btb::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("btb_cli_test_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string WriteConfig(const std::string& name, const std::string& json) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << json;
    return p.string();
  }

  int Run(const std::string& cmd, CliOptions opt) {
    out_.str("");
    err_.str("");
    if (!opt.out_dir) opt.out_dir = (dir_ / "out").string();
    return RunCommand(cmd, opt, out_, err_);
  }

  std::string Read(const std::string& rel) {
    std::ifstream in(dir_ / "out" / rel, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

constexpr const char* kNegative =
    R"({"market": {"phi0": 0.6, "phi1": 0.2},
        "population": {"gamma": 0.5, "p1": 0.5, "p2": 0.25},
        "oracle": {"n_samples": 200000, "grid_n": 201}})";

TEST_F(CliTest, SolveBaseInstanceReportsMixedEquilibrium) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", R"({"population": {"p": 0.8}})");
  opt.format = "json";
  ASSERT_EQ(Run("solve", opt), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("MSE  chi=0.833333333 eta=0.75"), std::string::npos) << out_.str();
  const auto j = nlohmann::json::parse(Read("solve.json"));
  EXPECT_EQ(j["selected"], "MSE");
  EXPECT_DOUBLE_EQ(j["equilibria"][0]["payoffs"]["worker_exante"].get<double>(), 0.6);
  EXPECT_DOUBLE_EQ(j["equilibria"][0]["payoffs"]["employer"].get<double>(), 0.4);
  EXPECT_EQ(j["test_typology"], "PositivelyInformative");
  EXPECT_TRUE(fs::exists(dir_ / "out" / "solve.txt"));
}

TEST_F(CliTest, SolveNegativeTestListsThreeAndSelectsAggressive) {
  CliOptions opt;
  opt.config_path = WriteConfig(
      "c.json", R"({"market": {"phi0": 0.6, "phi1": 0.2}, "population": {"p": 0.5}})");
  ASSERT_EQ(Run("solve", opt), kExitOk);
  const std::string csv = Read("solve.csv");
  EXPECT_NE(csv.find("equilibria.2.label,ZQE"), std::string::npos) << csv;
  EXPECT_NE(csv.find("selected,FQE-aggressive"), std::string::npos);
}

TEST_F(CliTest, SolveUsesGroupOnePotentialWhenPOmitted) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", R"({"population": {"gamma": 0.5, "p1": 0.8, "p2": 0.4}})");
  ASSERT_EQ(Run("solve", opt), kExitOk);
  EXPECT_NE(Read("solve.csv").find("p,0.8\n"), std::string::npos);
}

TEST_F(CliTest, InvalidConfigExitsOneAndWritesNothing) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", R"({"market": {"w": 1, "B": 0.8}})");
  EXPECT_EQ(Run("solve", opt), kExitValidation);
  EXPECT_NE(err_.str().find("B > w"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, UnknownKeyAndMalformedJsonAreValidationErrors) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", R"({"market": {"wage": 1}})");
  EXPECT_EQ(Run("solve", opt), kExitValidation);
  EXPECT_NE(err_.str().find("market.wage"), std::string::npos);
  opt.config_path = WriteConfig("d.json", "{");
  EXPECT_EQ(Run("solve", opt), kExitValidation);
  opt.config_path = WriteConfig("e.json", R"({"oracle": {"seed": -1}})");
  EXPECT_EQ(Run("solve", opt), kExitValidation);
}

TEST_F(CliTest, MissingConfigAndUnwritableOutputAreIoErrors) {
  CliOptions opt;
  opt.config_path = (dir_ / "absent.json").string();
  EXPECT_EQ(Run("solve", opt), kExitIo);
  std::ofstream(dir_ / "blocker") << "x";
  CliOptions o2;
  o2.out_dir = (dir_ / "blocker" / "sub").string();
  EXPECT_EQ(Run("solve", o2), kExitIo);
}

TEST_F(CliTest, CompareScenarios) {
  CliOptions opt;
  opt.config_path = WriteConfig("a.json", R"({"population": {"gamma": 0.8, "p1": 0.8, "p2": 0.4}})");
  ASSERT_EQ(Run("compare", opt), kExitOk);
  EXPECT_NE(Read("compare.csv").find("scenario,BtbParetoDominant"), std::string::npos);

  opt.config_path = WriteConfig("b.json", kNegative);
  opt.format = "json";
  ASSERT_EQ(Run("compare", opt), kExitOk);
  const auto j = nlohmann::json::parse(Read("compare.json"));
  EXPECT_EQ(j["scenario"], "EmployerHurtWorkersHelped");
  EXPECT_DOUBLE_EQ(j["with_box"]["employer_total"].get<double>(), 0.15);
  EXPECT_DOUBLE_EQ(j["banned"]["employer_total"].get<double>(), 0.125);
  EXPECT_DOUBLE_EQ(j["employer_btb_interval"]["lower"].get<double>(), 0.285714286);

  opt.config_path = WriteConfig("c.json", R"({"population": {"gamma": 0.5, "p1": 0.6, "p2": 0.2}})");
  ASSERT_EQ(Run("compare", opt), kExitOk);
  EXPECT_EQ(nlohmann::json::parse(Read("compare.json"))["scenario"], "NoEffect");
}

TEST_F(CliTest, CompareNeedsPopulation) {
  EXPECT_EQ(Run("compare", {}), kExitValidation);
}

TEST_F(CliTest, VerifyPassesAndPerturbationFails) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", kNegative);
  opt.quiet = true;
  EXPECT_EQ(Run("verify", opt), kExitOk) << err_.str();
  EXPECT_TRUE(out_.str().empty());
  EXPECT_NE(Read("verify.txt").find("verification passed"), std::string::npos);

  opt.debug_perturb = 0.05;
  EXPECT_EQ(Run("verify", opt), kExitVerification);
  EXPECT_NE(err_.str().find("check_equilibrium"), std::string::npos) << err_.str();
  EXPECT_NE(err_.str().find("perturbed"), std::string::npos);
}

TEST_F(CliTest, VerifyOutcomeStableAcrossSeeds) {
  CliOptions opt;
  opt.config_path = WriteConfig(
      "c.json", R"({"population": {"p": 0.8}, "oracle": {"n_samples": 100000, "grid_n": 101}})");
  opt.quiet = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    opt.seed = seed;
    EXPECT_EQ(Run("verify", opt), kExitOk) << "seed " << seed << ": " << err_.str();
  }
}

TEST_F(CliTest, SimulateChosenProfile) {
  CliOptions opt;
  opt.config_path = WriteConfig(
      "c.json", R"({"population": {"p": 0.8}, "oracle": {"n_samples": 100000}})");
  opt.chi = 0.5;
  opt.eta = 0.5;
  opt.format = "json";
  ASSERT_EQ(Run("simulate", opt), kExitOk) << err_.str();
  const auto j = nlohmann::json::parse(Read("simulate.json"));
  EXPECT_EQ(j["profile"]["source"], "configured");
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["estimates"]["worker_exante"]["samples"].get<std::uint64_t>(), 100000u);
}

TEST_F(CliTest, SweepWritesTableAndSummary) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", R"({
    "population": {"p": 0.8},
    "sweep": {"mode": "SingleGroupRegions",
              "axes": [{"name": "phi0", "min": 0, "max": 1, "steps": 41},
                       {"name": "phi1", "min": 0, "max": 1, "steps": 41}]}})");
  ASSERT_EQ(Run("sweep", opt), kExitOk) << err_.str();
  for (const char* label : {"ZQE", "MSE", "FQE-aggressive", "FQE-conservative"}) {
    EXPECT_NE(out_.str().find(std::string("  ") + label + ": "), std::string::npos) << label;
  }
  const std::string csv = Read("sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41 * 41 + 1);
  const std::string first = csv;
  ASSERT_EQ(Run("sweep", opt), kExitOk);
  EXPECT_EQ(Read("sweep.csv"), first);
}

TEST_F(CliTest, SweepRequiresBlock) {
  EXPECT_EQ(Run("sweep", {}), kExitValidation);
}

TEST_F(CliTest, SweepPropagatesCellValidationErrors) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", R"({
    "sweep": {"mode": "SingleGroupRegions",
              "axes": [{"name": "c_L", "min": 0.5, "max": 1.5, "steps": 3}]}})");
  EXPECT_EQ(Run("sweep", opt), kExitValidation);
  EXPECT_NE(err_.str().find("c_L=1"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(dir_ / "out" / "sweep.csv"));
}

TEST_F(CliTest, UnknownCommand) { EXPECT_EQ(Run("plot", {}), kExitValidation); }

TEST(ResolveOutDir, Precedence) {
  RunConfig c;
  CliOptions opt;
  ::unsetenv(std::string(kOutDirEnv).c_str());
  EXPECT_EQ(ResolveOutDir(opt, c), fs::path(std::string(kDefaultOutDir)));
  ::setenv(std::string(kOutDirEnv).c_str(), "/tmp/from_env", 1);
  EXPECT_EQ(ResolveOutDir(opt, c), fs::path("/tmp/from_env"));
  c.out_dir = "from_config";
  EXPECT_EQ(ResolveOutDir(opt, c), fs::path("from_config"));
  opt.out_dir = "from_flag";
  EXPECT_EQ(ResolveOutDir(opt, c), fs::path("from_flag"));
  ::unsetenv(std::string(kOutDirEnv).c_str());
}

TEST(ResolveConfig, FlagsOverrideFile) {
  CliOptions opt;
  opt.seed = 7;
  opt.eps = 1e-8;
  opt.format = "json";
  const RunConfig c = ResolveConfig(opt);
  EXPECT_EQ(c.oracle.seed, 7u);
  EXPECT_EQ(c.eps, 1e-8);
  EXPECT_EQ(c.format, OutputFormat::kJson);
  EXPECT_EQ(c.oracle.grid_n, 401);
  EXPECT_EQ(c.oracle.n_samples, 1000000u);
}

TEST(ParseConfig, ReadsEveryBlock) {
  const RunConfig c = ParseConfig(R"({
    "market": {"w": 2, "B": 5, "c_L": 1, "c_H": 3, "phi0": 0.3, "phi1": 0.7},
    "population": {"gamma": 0.25, "p1": 0.9, "p2": 0.1, "p": 0.6},
    "eps": 1e-10,
    "oracle": {"grid_n": 101, "n_samples": 5000, "seed": 3, "tol": 1e-8},
    "sweep": {"mode": "BtbScenarios", "threads": 2,
              "axes": [{"name": "gamma", "min": 0.1, "max": 0.9, "steps": 5}]},
    "output": {"dir": "x", "format": "json"},
    "simulate": {"chi": 0.4, "eta": 0.6}})");
  EXPECT_EQ(c.market.benefit, 5.0);
  EXPECT_EQ(c.population.share_group1, 0.25);
  EXPECT_TRUE(c.has_population);
  EXPECT_EQ(*c.potential, 0.6);
  EXPECT_EQ(c.oracle.grid_n, 101);
  EXPECT_EQ(c.sweep->mode, SweepMode::kBtbScenarios);
  EXPECT_EQ(c.sweep->threads, 2u);
  EXPECT_EQ(*c.out_dir, "x");
  EXPECT_EQ(c.simulate_profile->hire_prob, 0.6);
  EXPECT_NO_THROW(ValidateConfig(c));
}

TEST(KeyValueCsv, RoundTripsQuotedFields) {
  const KeyValueRows rows = {{"a", "1"}, {"b", "x, y"}, {"c", "say \"hi\""}, {"d", ""}};
  const std::string text = FormatKeyValueCsv(rows);
  EXPECT_EQ(ParseKeyValueCsv(text), rows);
  EXPECT_EQ(FormatKeyValueCsv(ParseKeyValueCsv(text)), text);
}

TEST_F(CliTest, ReportsRoundTrip) {
  CliOptions opt;
  opt.config_path = WriteConfig("c.json", kNegative);
  ASSERT_EQ(Run("compare", opt), kExitOk);
  const std::string csv = Read("compare.csv");
  EXPECT_EQ(FormatKeyValueCsv(ParseKeyValueCsv(csv)), csv);
  opt.format = "json";
  ASSERT_EQ(Run("compare", opt), kExitOk);
  const std::string json = Read("compare.json");
  EXPECT_EQ(nlohmann::ordered_json::parse(json).dump(2) + "\n", json);
}

}  // namespace
}  // namespace btb::cli

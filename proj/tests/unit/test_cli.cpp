// Copyright 2026 The agestruct Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <json.hpp>

#include "agestruct/cli.hpp"
#include "agestruct/io.hpp"

namespace agestruct {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "agestruct");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / "agestruct_cli_test" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string out_dir() const { return dir_.string(); }
  fs::path file(const std::string& name) const { return dir_ / name; }
  std::string write_config(const std::string& name, const std::string& text) {
    std::ofstream(file(name)) << text;
    return file(name).string();
  }
  std::vector<std::string> header(const std::string& name) const {
    std::vector<std::string> cols;
    for (const auto& c : read_csv(file(name))) cols.push_back(c.name);
    return cols;
  }

  fs::path dir_;
};

TEST_F(CliTest, EquilibriumOutputs) {
  const CliResult r = run_cli({"equilibrium", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("zeta_1 = 1.1702"));
  EXPECT_THAT(r.out, HasSubstr("eigenvalues"));
  EXPECT_EQ(header("equilibrium.csv"),
            (std::vector<std::string>{"a", "x1_star", "x2_star", "survival_1",
                                      "survival_2"}));
  EXPECT_EQ(read_csv(file("equilibrium.csv"))[0].values.size(), 401u);
}

TEST_F(CliTest, ConfigFileIsUsed) {
  const std::string cfg = write_config("c.cfg", "[grid]\nN_a = 100\n");
  const CliResult r =
      run_cli({"equilibrium", "--config", cfg, "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_csv(file("equilibrium.csv"))[0].values.size(), 101u);
}

TEST_F(CliTest, BadConfigExitsOne) {
  const std::string cfg = write_config("bad.cfg", "[model]\nA = -1\n");
  const CliResult r =
      run_cli({"equilibrium", "--config", cfg, "--out", out_dir()});
  EXPECT_EQ(r.code, 1);
  EXPECT_THAT(r.err, HasSubstr("A must be positive"));
  EXPECT_EQ(run_cli({"nonsense"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", "--solver", "euler"}).code, 1);
  const std::string unknown = write_config("u.cfg", "[model]\nfoo = 1\n");
  EXPECT_EQ(run_cli({"equilibrium", "--config", unknown}).code, 1);
}

TEST_F(CliTest, SimulateWritesTrajectory) {
  const CliResult r = run_cli({"simulate", "--solver", "ipde", "--snapshots",
                               "0,1,2", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header("trajectory.csv"),
            (std::vector<std::string>{"t", "eta1", "eta2", "u", "V", "G1",
                                      "G2", "psi_sup1", "psi_sup2"}));
  const auto cols = read_csv(file("trajectory.csv"));
  EXPECT_NEAR(cols[0].values.back(), 40.0, 1e-9);
  for (int k = 0; k < 3; ++k) {
    const std::string name = "profile_t" + std::to_string(k) + ".csv";
    ASSERT_TRUE(fs::exists(file(name))) << name;
    EXPECT_EQ(header(name), (std::vector<std::string>{"a", "x1", "x2"}));
  }
}

TEST_F(CliTest, OpenLoopExitsTwoWithPartialTrajectory) {
  const CliResult r =
      run_cli({"simulate", "--open-loop", "--out", out_dir()});
  EXPECT_EQ(r.code, 2);
  EXPECT_THAT(r.err, HasSubstr("blow-up guard"));
  ASSERT_TRUE(fs::exists(file("trajectory.csv")));
  EXPECT_LT(read_csv(file("trajectory.csv"))[0].values.back(), 40.0);
}

TEST_F(CliTest, FailedAssumptionExitsThree) {
  const std::string cfg = write_config(
      "late.cfg",
      "[model]\nk_table_1 = 0:0, 0.8:0, 1:60\nk_table_2 = 0:0, 0.8:0, 1:60\n");
  const CliResult r = run_cli({"certify", "--config", cfg, "--out", out_dir()});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
  EXPECT_THAT(r.err, HasSubstr("certificate error"));
}

TEST_F(CliTest, CertifyIsDeterministic) {
  const std::vector<std::string> args = {"certify", "--grid", "200",
                                         "--out", out_dir()};
  const CliResult a = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  const auto roa_a = read_csv(file("roa.csv"));
  const CliResult b = run_cli(args);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto roa_b = read_csv(file("roa.csv"));
  ASSERT_EQ(roa_a.size(), roa_b.size());
  for (std::size_t i = 0; i < roa_a.size(); ++i)
    EXPECT_EQ(roa_a[i].values, roa_b[i].values);
  EXPECT_EQ(header("roa.csv"),
            (std::vector<std::string>{"eta1", "eta2", "V3", "in_D", "u"}));
  EXPECT_EQ(header("bcurve.csv"), (std::vector<std::string>{"beta", "B"}));
  EXPECT_THAT(a.out, HasSubstr("closed in box = yes"));
}

TEST_F(CliTest, TransformRoundTrip) {
  ASSERT_EQ(run_cli({"equilibrium", "--out", out_dir()}).code, 0);
  const auto eq = read_csv(file("equilibrium.csv"));
  std::vector<double> x1 = eq[1].values, x2 = eq[2].values;
  for (std::size_t j = 0; j < x1.size(); ++j) {
    x1[j] *= 0.8;
    x2[j] *= 1.1;
  }
  write_csv(file("in.csv"), {{"a", eq[0].values}, {"x1", x1}, {"x2", x2}});
  const CliResult r = run_cli({"transform", "--profiles",
                               file("in.csv").string(), "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("eta_1 = " ));
  const auto psi = read_csv(file("psi.csv"));
  ASSERT_EQ(psi.size(), 3u);
  // Uniform scaling moves only eta.
  for (double v : psi[1].values) EXPECT_NEAR(v, 0.0, 1e-12);
  for (double v : psi[2].values) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST_F(CliTest, ReproduceFiguresAndManifest) {
  const CliResult r = run_cli({"reproduce-figures", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"equilibrium.csv", "bcurve.csv", "roa.csv",
                           "trajectory.csv", "profile_t0.csv",
                           "profile_t6.csv"})
    EXPECT_TRUE(fs::exists(file(name))) << name;
  std::ifstream log(file("runs.log"));
  std::string line;
  int rows = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
    for (const auto& o : j["outputs"])
      EXPECT_TRUE(fs::exists(file(o.get<std::string>()))) << o;
    ++rows;
  }
  EXPECT_GE(rows, 1);
}

TEST_F(CliTest, CheckBatteryPasses) {
  const CliResult r = run_cli({"check", "--out", out_dir()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

}  // namespace
}  // namespace agestruct

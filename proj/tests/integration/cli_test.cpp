// Copyright 2026 The cqad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the installed-style `cqad` executable end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("cqad_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const fs::path log = dir_ / "log.txt";
    const std::string cmd = env + " \"" CQAD_BIN "\" " + args + " > \"" + log.string() +
                            "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(log)};
  }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
  }

  std::string out_dir(const std::string& sub = "out") const { return (dir_ / sub).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SimulateFig2aSmoke) {
  const Outcome r = run("simulate --scenario fig2a --profile ci_fast --out " + out_dir());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto csv = lines(slurp(fs::path(out_dir()) / "fig2a_timeseries.csv"));
  ASSERT_GT(csv.size(), 2u);
  EXPECT_EQ(csv[0], "t_us,EN_full,EN_eff,trace_drift,leakage");
  const auto m = nlohmann::json::parse(slurp(fs::path(out_dir()) / "fig2a_manifest.json"));
  for (const char* key : {"resolved_params", "derived", "monitors", "wall_time_s",
                          "config_hash", "resolved_config"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  EXPECT_LT(m["monitors"]["trace_drift"].get<double>(), 1e-8);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  const auto bad = write("bad.json", R"({"scenario": "fig2a", "params": {"omega_a_GHz": -1}})");
  EXPECT_EQ(run("simulate --config " + bad + " --out " + out_dir()).status, 2);
  const auto typo = write("typo.json", "{\n  \"scenario\": \"fig2a\",\n  \"cutof\": 3\n}");
  const Outcome r = run("simulate --config " + typo);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("line 3"), std::string::npos) << r.out;
  EXPECT_EQ(run("simulate --config " + (dir_ / "missing.json").string()).status, 2);
  EXPECT_EQ(run("sweep --scenario fig2a --out " + out_dir()).status, 2);
  EXPECT_EQ(run("simulate --bogus").status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST_F(CliTest, SolverFailureExitsThreeWithMonitorDump) {
  const auto cfg = write("leaky.json", R"({
  "solver": "fock_effective",
  "cutoffs": {"a": 3, "b": 3},
  "t_end_us": 10,
  "dt_out_us": 1,
  "stepper": {"leakage_bound": 1e-9}
})");
  const Outcome r = run("simulate --config " + cfg + " --out " + out_dir());
  EXPECT_EQ(r.status, 3) << r.out;
  EXPECT_NE(r.out.find("truncation-failure"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("max_leakage"), std::string::npos) << r.out;
}

TEST_F(CliTest, ManifestReproducesCsvByteForByte) {
  const auto cfg = write("run.json", R"({
  "scenario": "fig2a",
  "name": "trip",
  "params": {"kappa_q_kHz": 30, "T_mK": 80},
  "cutoffs": {"a": 6, "b": 5},
  "t_end_us": 1.2,
  "dt_out_us": 0.05
})");
  ASSERT_EQ(run("simulate --config " + cfg + " --out " + out_dir("a")).status, 0);
  const fs::path manifest = fs::path(out_dir("a")) / "trip_manifest.json";
  ASSERT_EQ(run("simulate --from-manifest " + manifest.string() + " --out " + out_dir("b"))
                .status,
            0);
  const std::string first = slurp(fs::path(out_dir("a")) / "trip_timeseries.csv");
  const std::string second = slurp(fs::path(out_dir("b")) / "trip_timeseries.csv");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
  const auto m1 = nlohmann::json::parse(slurp(manifest));
  const auto m2 = nlohmann::json::parse(slurp(fs::path(out_dir("b")) / "trip_manifest.json"));
  EXPECT_EQ(m1["config_hash"], m2["config_hash"]);
  EXPECT_EQ(m1["resolved_params"], m2["resolved_params"]);
}

TEST_F(CliTest, Fig2bSweepSchema) {
  const Outcome r = run("sweep --scenario fig2b --out " + out_dir() + " --threads 2");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto csv = lines(slurp(fs::path(out_dir()) / "fig2b_grid.csv"));
  ASSERT_EQ(csv.size(), 22u);
  EXPECT_EQ(csv[0].rfind("delta_d_rad_per_us,EN_at_t,EN_max,t_star_us", 0), 0u) << csv[0];
  EXPECT_EQ(csv[0].substr(csv[0].size() - 9), "error_tag");
}

TEST_F(CliTest, TwoAxisSweepOrderAndFailedPoint) {
  const auto cfg = write("grid.json", R"({
  "name": "grid",
  "solver": "gaussian_effective",
  "profile": "paper_faithful",
  "t_end_us": 20,
  "dt_out_us": 5,
  "axes": [
    {"key": "Omega_d_rad_per_us", "values": [39.58407, 10, 25]},
    {"key": "T_mK", "values": [100, 0]}
  ]
})");
  const Outcome r = run("sweep --config " + cfg + " --out " + out_dir());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto csv = lines(slurp(fs::path(out_dir()) / "grid_grid.csv"));
  ASSERT_EQ(csv.size(), 7u);
  EXPECT_EQ(csv[1].rfind("10,0,", 0), 0u) << csv[1];
  EXPECT_EQ(csv[2].rfind("10,100,", 0), 0u) << csv[2];
  EXPECT_EQ(csv[3].rfind("25,0,", 0), 0u) << csv[3];
  EXPECT_EQ(csv[6].rfind("39.5840", 0), 0u) << csv[6];
  // Omega_d = 39.58407 sits on delta/2 within 1e-6 relative: singular point.
  EXPECT_NE(csv[5].find("NaN"), std::string::npos) << csv[5];
  EXPECT_EQ(csv[5].substr(csv[5].size() - 18), "singular-parameter") << csv[5];
  EXPECT_EQ(csv[1].back(), ',');
}

TEST_F(CliTest, ThreadCountFromEnvironmentAndFlag) {
  const std::string args = "sweep --scenario fig5a --profile paper_faithful --out " + out_dir();
  ASSERT_EQ(run(args, "CQAD_THREADS=2").status, 0);
  auto m = nlohmann::json::parse(slurp(fs::path(out_dir()) / "fig5a_manifest.json"));
  EXPECT_EQ(m["threads"].get<int>(), 2);
  const std::string grid = slurp(fs::path(out_dir()) / "fig5a_grid.csv");
  ASSERT_EQ(run(args + " --threads 1", "CQAD_THREADS=2").status, 0);
  m = nlohmann::json::parse(slurp(fs::path(out_dir()) / "fig5a_manifest.json"));
  EXPECT_EQ(m["threads"].get<int>(), 1);
  EXPECT_EQ(slurp(fs::path(out_dir()) / "fig5a_grid.csv"), grid);
  EXPECT_EQ(run(args, "CQAD_THREADS=zero").status, 2);
}

TEST_F(CliTest, ValidateIsDeterministicAndCatchesMutation) {
  const Outcome first = run("validate");
  ASSERT_EQ(first.status, 0) << first.out;
  EXPECT_NE(first.out.find("5/5 oracles passed"), std::string::npos);
  const Outcome second = run("validate");
  EXPECT_EQ(first.out, second.out);
  const Outcome mutated = run("validate --mutate-drift-sign");
  EXPECT_EQ(mutated.status, 1);
  EXPECT_NE(mutated.out.find("FAIL lyapunov-vs-fock"), std::string::npos) << mutated.out;
}

}  // namespace

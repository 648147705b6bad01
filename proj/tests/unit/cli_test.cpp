#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "hyperdyn/cli.hpp"

namespace fs = std::filesystem;
using namespace hyperdyn;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hyperdyn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& cmd, const std::string& config, const std::string& out = "out",
          std::optional<std::uint64_t> seed = std::nullopt) {
    const fs::path cfg = dir_ / "config.json";
    std::ofstream(cfg) << config;
    cli::Options o;
    o.command = cmd;
    o.config = cfg;
    o.out = dir_ / out;
    o.jobs = 2;
    o.seed = seed;
    return cli::run(o);
  }
  std::string read(const std::string& rel) const {
    std::ifstream in(dir_ / rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

const char* kLine = R"({
  "scenario": {"explicit": {"name": "line",
    "space": {"grid": {"lower": [0.0], "upper": [1.0], "h": 0.1}},
    "family": {"chain": {"eps1": 0.8, "levels": 5}}}},
  "hyper": {"A": {"coords": [[0.0]]}, "B": {"coords": [[0.0], [0.3]]}}
})";

const char* kConstant = R"({
  "scenario": {"explicit": {"name": "line",
    "space": {"grid": {"lower": [0.0], "upper": [1.0], "h": 0.1}},
    "family": {"chain": {"eps1": 0.8, "levels": 5}}}},
  "levels": {"tested": [1, 2, 3]},
  "points": {"stride": 1},
  "map": {"kind": "constant", "set": [2, 3, 7]}
})";

const char* kTables = R"({
  "scenario": {"explicit": {"name": "tables",
    "space": {"points": [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]},
    "family": {"coverings": [[[0, 1], [1, 2]], [[0], [1], [2]]]},
    "action": {"maps": [[1, 1, 1], [1, 1, 1]], "levels": [1, 2]}}},
  "levels": {"target": 1}
})";

}  // namespace

TEST_F(CliTest, HyperPrintsThresholdAndNoncompactness) {
  ::testing::internal::CaptureStdout();
  ASSERT_EQ(run("hyper", kLine), cli::kOk);
  const std::string out = ::testing::internal::GetCapturedStdout();
  EXPECT_NE(out.find("threshold 2"), std::string::npos) << out;
  EXPECT_NE(out.find("0.4"), std::string::npos) << out;
}

TEST_F(CliTest, UnknownKeyIsConfigError) {
  EXPECT_EQ(run("hyper", R"({"scenario": {"builtin": "coset"}, "bogus": 1})"), cli::kConfig);
  EXPECT_EQ(run("limits", R"({"scenario": {"builtin": "multitime", "params": {"bee": 0.5}}})"), cli::kConfig);
}

TEST_F(CliTest, MalformedJsonIsConfigError) { EXPECT_EQ(run("limits", "{not json"), cli::kConfig); }

TEST_F(CliTest, EmptyPointsIsConfigError) {
  EXPECT_EQ(run("limits", R"({"scenario": {"builtin": "contraction"}, "points": {"coords": []}})"), cli::kConfig);
}

TEST_F(CliTest, CorruptedFamilyIsConfigError) {
  EXPECT_EQ(run("verify", R"({"scenario": {"explicit": {
      "space": {"points": [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]},
      "family": {"coverings": [[[0, 1], [2, 3]], [[0], [1, 2], [3]]]}}},
    "theorems": ["T5"]})"),
            cli::kConfig);
}

TEST_F(CliTest, LevelOutsideFamilyIsConfigError) {
  EXPECT_EQ(run("limits", R"({"scenario": {"builtin": "contraction"}, "levels": {"target": 99}})"), cli::kConfig);
}

TEST_F(CliTest, ConstantContinuityIsContinuous) {
  ASSERT_EQ(run("continuity", kConstant), cli::kOk);
  const auto j = nlohmann::json::parse(read("out/continuity.json"));
  EXPECT_EQ(j["entries"].size(), 33u);
  for (const auto& e : j["entries"]) EXPECT_TRUE(e["continuous"].get<bool>());
}

TEST_F(CliTest, TableActionLimits) {
  ASSERT_EQ(run("limits", kTables), cli::kOk);
  const auto j = nlohmann::json::parse(read("out/limits.json"));
  ASSERT_FALSE(j["points"].empty());
  for (const auto& p : j["points"]) EXPECT_EQ(p["limit"]["indices"], nlohmann::json::array({1}));
  EXPECT_NE(read("out/limits.csv").find("point"), std::string::npos);
}

TEST_F(CliTest, LimitsAreDeterministic) {
  const std::string cfg =
      R"({"scenario": {"builtin": "contraction"}, "levels": {"target": 3}, "points": {"coords": [[0.1], [0.9]]}})";
  ASSERT_EQ(run("limits", cfg, "a"), cli::kOk);
  ASSERT_EQ(run("limits", cfg, "b"), cli::kOk);
  EXPECT_EQ(read("a/limits.json"), read("b/limits.json"));
  EXPECT_EQ(read("a/limits.csv"), read("b/limits.csv"));
}

TEST_F(CliTest, VerifyCorpusDeterministicPerSeed) {
  const std::string cfg = R"({"suites": ["vietoris_sandwich", "kuratowski_hausdorff"],
    "corpus": {"families": 5, "max_points": 5, "max_coverings": 3, "sequences": 10}})";
  ASSERT_EQ(run("verify", cfg, "a", 3), cli::kOk);
  ASSERT_EQ(run("verify", cfg, "b", 3), cli::kOk);
  EXPECT_EQ(read("a/verify.json"), read("b/verify.json"));
  const auto j = nlohmann::json::parse(read("a/verify.json"));
  EXPECT_EQ(j["seed"], 3);
}

TEST_F(CliTest, UnknownCommand) { EXPECT_EQ(run("frobnicate", kLine), cli::kConfig); }

TEST(CliFormat, NineSignificantDigits) {
  EXPECT_EQ(cli::fmt9(0.1), "0.1");
  EXPECT_EQ(cli::fmt9(1.0 / 3.0), "0.333333333");
}

TEST_F(CliTest, OutputSwitchesSkipFiles) {
  const std::string cfg = R"({"scenario": {"builtin": "contraction"}, "points": {"coords": [[0.5]]},
    "output": {"csv": false}})";
  ASSERT_EQ(run("limits", cfg), cli::kOk);
  EXPECT_TRUE(fs::exists(dir_ / "out/limits.json"));
  EXPECT_FALSE(fs::exists(dir_ / "out/limits.csv"));
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acsf_cli.hpp"

using namespace acsf;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"acsf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(cli::split(line, ','));
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("acsf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    unsetenv(cli::kOutputDirEnv);
    fs::remove_all(dir_);
  }
  fs::path dir_;
};

}  // namespace

TEST(ParseConfig, SolveWithExplicitTimes) {
  const auto cfg = cli::parse_config({"solve", "--freqs", "1,2", "--times", "-2,-1", "--out", "r.csv"});
  EXPECT_EQ(cfg.command, cli::Command::Solve);
  EXPECT_EQ(cfg.freqs, FrequencyVector({1, 2}));
  EXPECT_EQ(cli::resolve_times(cfg), (std::vector<double>{-2, -1}));
  EXPECT_EQ(cfg.output_path, "r.csv");
}

TEST(ParseConfig, RejectsBadFrequencies) {
  EXPECT_THROW(cli::parse_config({"solve", "--freqs", "2,1"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"solve", "--freqs", "1,x"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"solve", "--freqs", "1.5"}), cli::UsageError);
}

TEST(ParseConfig, TangentScientificNotation) {
  const auto cfg = cli::parse_config({"tangent", "--freqs", "1,2", "--times", "-1e6"});
  EXPECT_EQ(cfg.command, cli::Command::Tangent);
  EXPECT_EQ(cli::resolve_times(cfg), std::vector<double>{-1e6});
}

TEST(ParseConfig, UsageErrors) {
  EXPECT_THROW(cli::parse_config({"solve", "--nope"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"bogus"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config(std::vector<std::string>{}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"solve", "--times", "0"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"tangent", "--kind", "helix"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"simulate", "--times", "-1"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"solve", "--format", "xml"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"solve", "--times", "-1", "--t-count", "3"}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"solve", "--t-start", "-1", "--t-end", "1"}), cli::UsageError);
  EXPECT_NO_THROW(cli::parse_config({"solve", "--kind", "helix", "--times", "-1,0,5"}));
}

TEST(ParseConfig, DefaultGridIsLogSpaced) {
  const auto cfg = cli::parse_config({"solve", "--t-start", "-1000", "--t-end", "-0.1", "--t-count", "5"});
  const auto ts = cli::resolve_times(cfg);
  ASSERT_EQ(ts.size(), 5u);
  EXPECT_DOUBLE_EQ(ts[0], -1000.0);
  EXPECT_NEAR(ts[1], -100.0, 1e-10);
  EXPECT_DOUBLE_EQ(ts[4], -0.1);
  const auto lin = cli::resolve_times(
      cli::parse_config({"solve", "--t-start", "-2", "--t-end", "-1", "--t-count", "3", "--spacing", "linear"}));
  EXPECT_EQ(lin, (std::vector<double>{-2, -1.5, -1}));
}

TEST_F(TempDir, ConfigFileWithFlagOverride) {
  const auto path = dir_ / "cfg.json";
  std::ofstream(path) << R"({"command": "solve", "freqs": [1, 3], "times": [-4, -2],
                            "n_points": 64, "integrator": {"dt": 0.001}})";
  const auto cfg = cli::parse_config({"--config", path.string(), "--times", "-9"});
  EXPECT_EQ(cfg.command, cli::Command::Solve);
  EXPECT_EQ(cfg.freqs, FrequencyVector({1, 3}));
  EXPECT_EQ(cli::resolve_times(cfg), std::vector<double>{-9});
  EXPECT_EQ(cfg.n_points, 64u);
  EXPECT_DOUBLE_EQ(cfg.integrator.dt, 1e-3);

  std::ofstream(path) << R"({"command": "solve", "colour": "red"})";
  EXPECT_THROW(cli::parse_config({"--config", path.string()}), cli::UsageError);
  std::ofstream(path) << R"({"integrator": {"step": 1}})";
  EXPECT_THROW(cli::parse_config({"solve", "--config", path.string()}), cli::UsageError);
  std::ofstream(path) << "{not json";
  EXPECT_THROW(cli::parse_config({"solve", "--config", path.string()}), cli::UsageError);
  EXPECT_THROW(cli::parse_config({"solve", "--config", (dir_ / "missing.json").string()}), cli::UsageError);
}

TEST(Run, SolveCircle) {
  const auto r = run_cli({"solve", "--freqs", "1", "--times", "-2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "r", "F_residual"}));
  EXPECT_EQ(rows[1][0], "-2");
  EXPECT_DOUBLE_EQ(std::stod(rows[1][1]), 2.0);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(run_cli({"solve", "--freqs", "2,1"}).code, 2);
  EXPECT_EQ(run_cli({"solve", "--unknown"}).code, 2);
  const auto bad = run_cli({"solve", "--freqs", "2,1"});
  EXPECT_NE(bad.err.find("increasing"), std::string::npos);
  EXPECT_EQ(std::count(bad.err.begin(), bad.err.end(), '\n'), 1);
  // Helix bound needs r >= 1, which fails for t > 0: a computational failure.
  EXPECT_EQ(run_cli({"entropy", "--kind", "helix", "--freqs", "1", "--times", "5", "--points", "64"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"--version"}).out, std::string(cli::kVersion) + "\n");
}

TEST(Run, EntropyAtMinusInfinity) {
  const auto r = run_cli({"entropy", "--freqs", "1,2", "--times", "-1e6", "--points", "8192"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], "lambda");
  EXPECT_NEAR(std::stod(rows[1][1]), 3.0407, 1e-3);
}

TEST(Run, TangentColumns) {
  const auto r = run_cli({"tangent", "--freqs", "1,2,3", "--times", "-1e6,-1e-6", "--points", "256"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "amp_1", "amp_2", "amp_3", "dominant", "winding",
                                               "circle_dist"}));
  EXPECT_EQ(rows[1][4], "3");
  EXPECT_EQ(rows[1][5], "3");
  EXPECT_EQ(rows[2][4], "1");
  EXPECT_EQ(rows[2][5], "1");
}

TEST(Run, VerifyQuick) {
  const auto r = run_cli({"verify", "--freqs", "1,3", "--quick"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  std::istringstream in(r.out);
  std::string line;
  int pass = 0, fail = 0;
  while (std::getline(in, line)) {
    pass += line.rfind("PASS ", 0) == 0;
    fail += line.rfind("FAIL ", 0) == 0;
  }
  EXPECT_GE(pass, 5);
  EXPECT_EQ(fail, 0);
}

TEST(Run, ProductTable) {
  const auto r = run_cli({"product", "--factor", "1", "--factor", "1,2", "--times", "-1,-0.5", "--points", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][1], "6");
  EXPECT_EQ(rows[1][2], "2");
  EXPECT_LE(std::stod(rows[1][3]), 1e-10);
}

TEST(Run, JsonMirrorsCsv) {
  const auto csv = parse_csv(run_cli({"solve", "--freqs", "1,2", "--times", "-3,-1"}).out);
  const auto r = run_cli({"solve", "--freqs", "1,2", "--times", "-3,-1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["meta"]["version"], cli::kVersion);
  EXPECT_EQ(doc["meta"]["config"]["command"], "solve");
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_DOUBLE_EQ(doc["rows"][0]["r"].get<double>(), std::stod(csv[1][1]));
  EXPECT_DOUBLE_EQ(doc["rows"][1]["t"].get<double>(), -1.0);
}

TEST_F(TempDir, DeterministicOutputFiles) {
  const auto a = (dir_ / "a.csv").string(), b = (dir_ / "b.csv").string();
  for (const auto& path : {a, b})
    ASSERT_EQ(run_cli({"entropy", "--freqs", "1,2", "--t-count", "3", "--points", "256", "--seed", "5",
                       "--out", path})
                  .code,
              0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST_F(TempDir, OutputDirectoryFromEnvironment) {
  setenv(cli::kOutputDirEnv, dir_.c_str(), 1);
  ASSERT_EQ(run_cli({"solve", "--times", "-1", "--out", "nested/r.csv"}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "nested" / "r.csv"));
  const auto abs = (dir_ / "abs.csv").string();
  ASSERT_EQ(run_cli({"solve", "--times", "-1", "--out", abs}).code, 0);
  EXPECT_TRUE(fs::exists(abs));
}

TEST_F(TempDir, SampleSimulateRoundTrip) {
  const auto sample = (dir_ / "s.csv").string();
  ASSERT_EQ(run_cli({"sample", "--freqs", "1,2", "--times", "-2", "--points", "128", "--out", sample}).code, 0);
  const auto sim = (dir_ / "sim.csv").string();
  const auto r = run_cli({"simulate", "--freqs", "1,2", "--from-file", sample, "--times", "-2,-1.99",
                          "--dt", "1e-3", "--out", sim});
  ASSERT_EQ(r.code, 0) << r.err;

  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  const auto st = evolve(TorusCurveFamily(FrequencyVector({1, 2})).sample(-2.0, 128), -2.0, -1.99, cfg);
  const auto rows = parse_csv(slurp(sim));
  ASSERT_EQ(rows.size(), 1u + 2u * 128u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "step", "i", "x1", "x2", "x3", "x4"}));
  double worst = 0.0;
  for (std::size_t i = 0; i < 128; ++i) {
    const auto& row = rows[1 + 128 + i];
    EXPECT_EQ(row[1], "10");
    for (std::size_t c = 0; c < 4; ++c) worst = std::max(worst, std::abs(std::stod(row[3 + c]) - st.curve(i, c)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST_F(TempDir, SampleHelix) {
  const auto r = run_cli({"sample", "--kind", "helix", "--freqs", "1", "--times", "0", "--points", "9",
                          "--window", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].back(), "x3");
  EXPECT_DOUBLE_EQ(std::stod(rows[1][5]), -1.0);
  EXPECT_DOUBLE_EQ(std::stod(rows[9][5]), 1.0);
}

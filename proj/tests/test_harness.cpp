#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "visco/harness.hpp"
#include "visco/output.hpp"

using namespace visco;
using namespace visco::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("visco_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  Config c = Config::defaults("fig1");
  EXPECT_DOUBLE_EQ(c.number("medium.c_s"), 1.0);
  c.apply("medium.nu_s=0.5");
  EXPECT_DOUBLE_EQ(c.number("medium.nu_s"), 0.5);
  EXPECT_THROW(c.apply("medium.bogus=1"), std::invalid_argument);
  EXPECT_THROW(c.apply("no_equals_sign"), std::invalid_argument);
  EXPECT_EQ(c.vec3("geometry.receiver"), (Vec3{0.015, 0.0, 0.0}));
}

TEST(Config, LocalizeUsesTissueSpeeds) {
  const Config c = Config::defaults("localize");
  EXPECT_DOUBLE_EQ(c.number("medium.c_s"), 1600.0);
  EXPECT_EQ(c.integer("grid.n"), 512);
}

TEST(Config, FileLoadingChecksSchemaAndScenario) {
  const auto dir = scratch("config");
  const auto file = dir / "run.ini";
  write_text(file, "schema = 1\n[run]\nscenario = fig3\n[fig3]\neps = 1e-4,1e-3\n");
  const Config c = Config::load("fig3", file, {"run.seed=7"});
  EXPECT_EQ(c.numbers("fig3.eps"), (std::vector<double>{1e-4, 1e-3}));
  EXPECT_EQ(c.seed(), 7u);
  EXPECT_THROW(Config::load("fig1", file, {}), std::invalid_argument);
  write_text(file, "schema = 2\n");
  EXPECT_THROW(Config::load("fig3", file, {}), std::invalid_argument);
}

TEST(Config, ParseCases) {
  const auto cases = parse_cases("1.5:4, 2:0.2");
  ASSERT_EQ(cases.size(), 2u);
  EXPECT_DOUBLE_EQ(cases[0].first, 1.5);
  EXPECT_DOUBLE_EQ(cases[1].second, 0.2);
  EXPECT_THROW(parse_cases("2"), std::invalid_argument);
}

TEST(Output, CsvRoundTrip) {
  const auto dir = scratch("csv");
  const TimeGrid g(-0.5, 0.1, 10);
  std::vector<double> t, v;
  for (std::size_t j = 0; j < 11; ++j) {
    t.push_back(-0.5 + 0.1 * static_cast<double>(j));
    v.push_back(std::sin(1.0 + static_cast<double>(j)) / 3.0);
  }
  write_csv(dir / "trace.csv", {"t", "value"}, {t, v});
  const SampledSignal s = read_trace_csv(dir / "trace.csv");
  EXPECT_EQ(s.size(), 10u);
  EXPECT_NEAR(s.grid.dt, 0.1, 1e-12);
  for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(s.values[j], v[j]);
}

TEST(Output, RejectsNonUniformTrace) {
  const auto dir = scratch("csv_bad");
  write_csv(dir / "trace.csv", {"t", "value"}, {{0.0, 0.1, 0.3, 0.4}, {1, 2, 3, 4}});
  EXPECT_THROW(read_trace_csv(dir / "trace.csv"), std::runtime_error);
}

TEST(Fig1, DefaultRunPasses) {
  const Fig1Report r = run_fig1(Config::defaults("fig1"));
  ASSERT_EQ(r.cases.size(), 3u);
  for (const auto& c : r.cases) {
    EXPECT_TRUE(c.peak_ok) << c.y;
    EXPECT_TRUE(c.arrival_ok) << c.y;
    EXPECT_TRUE(c.refinement_ok) << c.y << " change " << c.refinement_change;
  }
}

TEST(Fig1, InviscidCurvesCoincideWithElastic) {
  Config c = Config::defaults("fig1");
  c.apply("fig1.cases=2:0,1.5:0");
  const Fig1Report r = run_fig1(c);
  for (const auto& k : r.cases) {
    const double scale = k.elastic.sup_norm();
    for (std::size_t j = 0; j < k.elastic.size(); ++j)
      EXPECT_NEAR(k.viscous.values[j], k.elastic.values[j], 1e-6 * scale);
  }
}

TEST(Fig3, ZeroEpsIsExactAndSlopeNearTwo) {
  const Fig3Report r = run_fig3(Config::defaults("fig3"));
  EXPECT_LT(r.zero_eps_error, 1e-10);
  EXPECT_TRUE(r.passed()) << "slope " << r.slope;
}

TEST(Fig3, LogLogSlopeOfExactPowerLaw) {
  std::vector<Fig3Point> pts;
  for (double e : {1e-4, 1e-3, 1e-2}) pts.push_back({e, 5.0 * e * e});
  EXPECT_NEAR(log_log_slope(pts), 2.0, 1e-12);
}

TEST(Execute, ManifestAndDeterminism) {
  Config c = Config::defaults("fig3");
  c.apply("fig3.eps=1e-4,1e-3");
  const auto a = scratch("exec_a"), b = scratch("exec_b");
  ASSERT_TRUE(execute("fig3", c, a));
  ASSERT_TRUE(execute("fig3", c, b));
  EXPECT_EQ(slurp(a / "fig3" / "fig3_error.csv"), slurp(b / "fig3" / "fig3_error.csv"));
  const auto manifest = nlohmann::json::parse(slurp(a / "fig3" / "manifest.json"));
  EXPECT_EQ(manifest["schema"], kSchemaVersion);
  EXPECT_EQ(manifest["status"], "complete");
  EXPECT_EQ(manifest["passed"], true);
  EXPECT_EQ(manifest["config"]["fig3"]["eps"], "1e-4,1e-3");
  EXPECT_TRUE(std::filesystem::exists(a / "fig3" / "plot_fig3.py"));
}

TEST(Execute, ManifestRecordsFailure) {
  Config c = Config::defaults("correct");
  const auto dir = scratch("exec_fail");
  EXPECT_THROW(execute("correct", c, dir, dir / "missing.csv"), std::exception);
  const auto manifest = nlohmann::json::parse(slurp(dir / "correct" / "manifest.json"));
  EXPECT_EQ(manifest["status"], "failed");
}

TEST(Golden, GreenTensorMatchesStoredValues) {
  Config c = Config::defaults("green");
  c.apply("grid.n=256");
  const auto dir = scratch("golden");
  ASSERT_TRUE(execute("green", c, dir));
  const auto got = read_rows(dir / "green" / "green_tensor.csv");
  const auto want = read_rows(std::filesystem::path(VISCO_GOLDEN_DIR) / "green_tensor_n256.csv");
  ASSERT_EQ(got.size(), want.size());
  double scale = 0.0;
  for (const auto& row : want)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < want.size(); ++i) {
    ASSERT_EQ(got[i].size(), want[i].size());
    for (std::size_t j = 0; j < want[i].size(); ++j) EXPECT_NEAR(got[i][j], want[i][j], 1e-9 * scale) << i << "," << j;
  }
}

TEST(Fig2, VoigtFrontDiffuses) {
  Config c = Config::defaults("fig2");
  c.apply("fig2.cases=2:0.2");
  c.apply("grid.points=41");
  const Fig2Report r = run_fig2(c);
  ASSERT_EQ(r.cases.size(), 2u);
  EXPECT_TRUE(r.front_at_shear_radius);
  EXPECT_LT(r.cases[1].front_peak, r.cases[0].front_peak);
  EXPECT_GT(r.cases[1].front_fwhm, r.cases[0].front_fwhm);
  EXPECT_TRUE(r.passed());
}

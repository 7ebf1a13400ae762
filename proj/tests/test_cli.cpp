#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracle/values.inc"

namespace {

using namespace capflow::cli;
namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "capflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliConfig config;
  Outcome o;
  if (auto stop = parse_cli(static_cast<int>(argv.size()), argv.data(), config, out, err)) {
    o.code = *stop;
  } else {
    o.code = run(config, out, err);
  }
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("capflow_test_" + name); }

double json_number(const std::string& json, const std::string& key) {
  const auto pos = json.find("\"" + key + "\"");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(json.substr(json.find(':', pos) + 1));
}

TEST(Cli, CapacityOfTheHemisphere) {
  const auto o = invoke({"capacity", "--d", "3", "--alpha", "1.5707963"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "d,alpha_radians,capacity");
  const double cap = std::stod(rows[1].substr(rows[1].rfind(',') + 1));
  EXPECT_NEAR(cap, 0.5 + 1.0 / std::numbers::pi, 1e-7);
}

TEST(Cli, DegreesMatchRadians) {
  const auto deg = invoke({"capacity", "--d", "4", "--alpha", "90", "--degrees"});
  const auto rad = invoke({"capacity", "--d", "4", "--alpha", "1.5707963267948966"});
  ASSERT_EQ(deg.code, kOk);
  EXPECT_EQ(deg.out, rad.out);
}

TEST(Cli, SolvePointChargeJson) {
  const auto o = invoke({"solve", "--d", "3", "--field", "point-charge", "--q", "1"});
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_NEAR(json_number(o.out, "alpha0"), kAlphaPc_d3_q1, 1e-13);
  EXPECT_LE(json_number(o.out, "residual"), 1e-12);
  EXPECT_NEAR(json_number(o.out, "F_Q") / kRobinPc_d3_q1, 1.0, 1e-12);
  EXPECT_NE(o.out.find("\"method\": \"characteristic-root\""), std::string::npos);
}

TEST(Cli, SolveCsvHasTheSameColumns) {
  const auto o = invoke({"solve", "--field", "quadratic", "--format", "csv"});
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_EQ(lines(o.out).at(0), "d,field,alpha0,method,residual,F_Q,C_Q");
}

TEST(Cli, DensityRows) {
  const auto o = invoke({"density", "--d", "4", "--field", "quadratic", "--points", "200"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 201u);
  EXPECT_EQ(rows[0], "eta_radians,f_eta");
  double prev_eta = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto comma = rows[i].find(',');
    const double eta = std::stod(rows[i].substr(0, comma));
    const double f = std::stod(rows[i].substr(comma + 1));
    EXPECT_GT(eta, prev_eta);
    EXPECT_GT(eta, kAlphaQuad_d4);
    EXPECT_GT(f, 0.0) << rows[i];
    prev_eta = eta;
  }
}

TEST(Cli, NorthDensityStaysInsideTheNorthCap) {
  const auto o = invoke({"density", "--field", "point-charge", "--q", "1", "--pole", "north", "--points", "20"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 21u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(std::stod(rows[i]), std::numbers::pi - kAlphaPc_d3_q1);
  }
}

TEST(Cli, SweepGrid) {
  const auto o = invoke({"ffunc-sweep", "--d", "3", "--field", "zero", "--points", "4"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "alpha_radians,F_value");
  const double a = std::stod(rows[2]);
  EXPECT_NEAR(a, std::numbers::pi * 1.5 / 4.0, 1e-15);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args = {"solve", "--d", "5", "--field", "point-charge", "--q", "0.5"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
  const std::vector<std::string> sweep = {"ffunc-sweep", "--d", "4", "--field", "quadratic", "--points", "16"};
  EXPECT_EQ(invoke(sweep).out, invoke(sweep).out);
}

TEST(Cli, OutputFile) {
  const auto path = scratch("density.csv");
  const auto o = invoke({"density", "--points", "5", "--alpha", "1", "--output", path.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(lines(text.str()).size(), 6u);
  fs::remove(path);
}

TEST(Cli, VerifyPassesAndWritesReport) {
  const auto path = scratch("report.json");
  const auto o = invoke(
      {"verify", "--d", "3", "--field", "point-charge", "--q", "1", "--points", "12", "--report", path.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_NE(o.out.find("PASS"), std::string::npos);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("\"passed\": true"), std::string::npos);
  fs::remove(path);
}

TEST(Cli, VerifyFailureExitsOne) {
  // A no-field cap forced to the hemisphere is not an equilibrium: U < F_Q off the cap.
  const auto o = invoke({"verify", "--d", "3", "--alpha", "1.5707963", "--points", "8"});
  EXPECT_EQ(o.code, kVerificationFailed);
  EXPECT_NE(o.out.find("\"passed\": false"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const std::vector<std::vector<std::string>> bad = {
      {"solve", "--d", "2"},
      {"solve", "--field", "point-charge"},
      {"solve", "--field", "point-charge", "--q", "-1"},
      {"solve", "--field", "quadratic", "--q", "1"},
      {"solve", "--field", "custom"},
      {"solve", "--field", "dipole"},
      {"solve", "--alpha", "4"},
      {"solve", "--tol", "0.1"},
      {"solve", "--points", "0"},
      {"capacity", "--alpha", "0"},
      {"solve", "--report", "x.json"},
      {"solve", "--field", "custom", "--field-file", "/nonexistent/field.csv"},
      {"nonsense"},
  };
  for (const auto& args : bad) {
    const auto o = invoke(args);
    EXPECT_EQ(o.code, kConfigError) << args[0] << " " << (args.size() > 1 ? args[1] : "");
    EXPECT_FALSE(o.err.empty());
  }
}

TEST(Cli, NonConvergenceExitsThree) {
  const auto path = scratch("huge.csv");
  {
    std::ofstream f(path);
    f.precision(17);
    for (int i = 0; i <= 100; ++i) {
      const double t = std::numbers::pi * i / 100;
      f << t << ',' << 1e307 * std::pow(1.0 + std::cos(t), 2) << '\n';
    }
  }
  const auto o = invoke({"solve", "--field", "custom", "--field-file", path.string(), "--alpha", "1"});
  EXPECT_EQ(o.code, kNonConvergence) << o.err;
  fs::remove(path);
}

}  // namespace

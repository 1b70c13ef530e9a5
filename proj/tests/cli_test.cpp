#include "legmom/cli.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace legmom::cli {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("legmom_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "problem.yaml";
  std::ofstream(p) << text;
  return p;
}

int invoke(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "legmom");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream log, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), log, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kScalarSystem = R"(
system:
  n: 1
  m: 1
  A: [0, 1]
  B: [1]
)";

GTEST_TEST(Config, BundledFilesMatchPresets) {
  for (const std::string& name : preset_names()) {
    const fs::path file = fs::path(LEGMOM_CONFIG_DIR) / (name + ".yaml");
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(slurp(file), preset_config(name)) << name;
    EXPECT_NO_THROW(load_config(file)) << name;
  }
  EXPECT_THROW(preset_config("missing"), ConfigError);
}

GTEST_TEST(Config, ParsesSections) {
  const ProblemConfig cfg = parse_config(preset_config("scalar"));
  ASSERT_TRUE(cfg.ensemble.has_value());
  EXPECT_TRUE(cfg.ensemble->is_prototype());
  EXPECT_EQ(cfg.design.algorithm, Algorithm::SamplingFree);
  EXPECT_TRUE(std::isinf(cfg.design.condition_limit));
  EXPECT_FALSE(cfg.bound.chi.has_value());
  EXPECT_EQ(cfg.bound.delta_rule, DeltaRule::Shift);
  EXPECT_TRUE(cfg.bound.refine);
  EXPECT_EQ(cfg.analyze.orders.size(), 9u);
  const DesignSettings s = cfg.settings();
  EXPECT_EQ(s.exponent, QExponent::Tridiagonal);
  EXPECT_EQ(s.order_max, 12);
}

GTEST_TEST(Config, SegmentsAndExpressions) {
  const ProblemConfig cfg = parse_config(std::string(kScalarSystem) + R"(
profiles:
  initial:
    segments:
      - {from: -1, to: 0, components: [{poly: [1, 2]}]}
      - {from: 0, to: 1, components: [{sin: [3, 0.5]}]}
  target: {segments: [{components: [{cos: [2]}]}]}
design: {T: 2, epsilon: none}
bound: {chi: 4.5, delta: 0.75}
)");
  EXPECT_NEAR((*cfg.initial)(-0.5)(0), 0.0, 1e-15);
  EXPECT_NEAR((*cfg.initial)(0.5)(0), std::sin(2.0), 1e-15);
  EXPECT_NEAR((*cfg.target)(0.25)(0), std::cos(0.5), 1e-15);
  EXPECT_TRUE(std::isinf(cfg.design.epsilon));
  EXPECT_EQ(*cfg.bound.chi, 4.5);
  EXPECT_EQ(cfg.bound.delta_rule, DeltaRule::Given);
  EXPECT_EQ(cfg.bound.delta, 0.75);
}

GTEST_TEST(Config, LegendreBasis) {
  const ProblemConfig cfg = parse_config(R"(
system: {n: 1, m: 1, basis: legendre, A: [0, 1], B: [1]}
)");
  EXPECT_NEAR(cfg.ensemble->a_coeffs()[1](0, 0), 1.0, 0.0);
}

GTEST_TEST(Config, RejectsMalformedInput) {
  const std::vector<std::string> bad = {
      "system: [1, 2",
      "- just a list",
      "design: {T: 1}",
      std::string(kScalarSystem) + "extra: 1",
      std::string(kScalarSystem) + "design: {T: -1}",
      std::string(kScalarSystem) + "design: {N_start: 5, N_max: 3}",
      std::string(kScalarSystem) + "design: {epsilon: 0}",
      std::string(kScalarSystem) + "design: {algorithm: magic}",
      std::string(kScalarSystem) + "analyze: {orders: []}",
      std::string(kScalarSystem) + "analyze: {orders: [3, 2]}",
      std::string(kScalarSystem) + "bound: {chi: 0.5}",
      std::string(kScalarSystem) + "profiles: {initial: nowhere, target: scalar_cos}",
      std::string(kScalarSystem) + "profiles: {initial: circle, target: scalar_cos}",
      std::string(kScalarSystem) +
          "profiles: {initial: {segments: [{from: -1, to: 0.5, components: [1]}]}, "
          "target: scalar_cos}",
      "system: {n: 2, m: 1, A: [[[0, 1], [1, 0]]], B: [[1, 0, 0]]}",
      "system: {n: 2, m: 1, A: [[[0, 1, 2], [1, 0, 2]]], B: [[1, 0]]}",
      "system: {n: 1, m: 1, A: [x], B: [1]}",
      "system: {n: 1, m: 1, basis: chebyshev, A: [1], B: [1]}",
  };
  for (const auto& text : bad) {
    EXPECT_THROW(parse_config(text), ConfigError) << text;
  }
  EXPECT_THROW(load_config("/nonexistent/problem.yaml"), ConfigError);
}

GTEST_TEST(Format, SeventeenSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.33333333333333331");
  EXPECT_EQ(std::stod(format_number(std::exp(1.0))), std::exp(1.0));
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

GTEST_TEST(Analyze, VerdictsAndWitness) {
  const fs::path dir = scratch("analyze");
  const fs::path scalar = fs::path(LEGMOM_CONFIG_DIR) / "scalar.yaml";
  ASSERT_EQ(invoke({"analyze", "--config", scalar.string(), "--out", (dir / "s").string()}),
            kExitOk);
  EXPECT_NE(slurp(dir / "s" / "verdict.txt").find("controllable at all tested orders"),
            std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "s" / "witness.csv"));
  const auto rows = read_csv(dir / "s" / "controllability.csv");
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0][0], "N");

  const fs::path osc = fs::path(LEGMOM_CONFIG_DIR) / "single_input_oscillator.yaml";
  ASSERT_EQ(invoke({"analyze", "--config", osc.string(), "--out", (dir / "o").string()}),
            kExitOk);
  EXPECT_NE(slurp(dir / "o" / "verdict.txt")
                .find("uncontrollable; witness direction emitted"),
            std::string::npos);
  const auto w = read_csv(dir / "o" / "witness.csv");
  ASSERT_EQ(w.size(), 5u);
  EXPECT_EQ(std::stod(w[2][1]), 1.0);
}

GTEST_TEST(Analyze, EmptyOrderListIsUsageError) {
  const fs::path dir = scratch("analyze_empty");
  const fs::path cfg =
      write_config(dir, std::string(kScalarSystem) + "analyze: {orders: []}\n");
  std::string err;
  EXPECT_EQ(invoke({"analyze", "--config", cfg.string(), "--out", dir.string()}, &err),
            kExitUsage);
  EXPECT_NE(err.find("analyze.orders"), std::string::npos);
  const fs::path no_section = write_config(dir, kScalarSystem);
  EXPECT_EQ(invoke({"analyze", "--config", no_section.string()}), kExitUsage);
}

GTEST_TEST(Design, OscillatorStopsAtFive) {
  const fs::path dir = scratch("design_osc");
  const fs::path cfg = fs::path(LEGMOM_CONFIG_DIR) / "oscillator.yaml";
  ASSERT_EQ(invoke({"design", "--config", cfg.string(), "--out", dir.string()}), kExitOk);
  const auto trace = read_csv(dir / "trace.csv");
  ASSERT_EQ(trace.size(), 5u);
  EXPECT_EQ(trace.back()[0], "5");
  EXPECT_LT(std::stod(trace.back()[1]), 1e-3);
  const auto control = read_csv(dir / "control.csv");
  EXPECT_EQ(control[0], (std::vector<std::string>{"t", "u_1", "u_2"}));
  EXPECT_EQ(control.size(), 1002u);
  EXPECT_NE(slurp(dir / "report.txt").find("chosen N: 5"), std::string::npos);
}

GTEST_TEST(Design, ScalarSamplingFreeTrace) {
  const fs::path dir = scratch("design_scalar");
  const fs::path cfg = fs::path(LEGMOM_CONFIG_DIR) / "scalar.yaml";
  ASSERT_EQ(invoke({"design", "--config", cfg.string(), "--out", dir.string()}), kExitOk);
  const auto trace = read_csv(dir / "trace.csv");
  ASSERT_EQ(trace.size(), 12u);
  EXPECT_EQ(trace.back()[0], "12");
  EXPECT_LT(std::stod(trace.back()[1]), std::stod(trace[1][1]));
  EXPECT_NE(slurp(dir / "report.txt").find("not converged by N_max"), std::string::npos);
}

GTEST_TEST(Design, NoToleranceRunsOneOrder) {
  const fs::path dir = scratch("design_none");
  const fs::path cfg = write_config(dir, std::string(kScalarSystem) + R"(
profiles: {initial: scalar_sin, target: scalar_cos}
design: {T: 1, epsilon: none, N_start: 3, N_max: 9}
)");
  ASSERT_EQ(invoke({"design", "--config", cfg.string(), "--out", (dir / "o").string()}),
            kExitOk);
  EXPECT_EQ(read_csv(dir / "o" / "trace.csv").size(), 2u);
}

GTEST_TEST(Design, ExitCodes) {
  const fs::path dir = scratch("design_codes");
  const fs::path osc = fs::path(LEGMOM_CONFIG_DIR) / "oscillator.yaml";
  std::string err;
  EXPECT_EQ(invoke({"design", "--config", osc.string(), "--algorithm", "sampling-free",
                    "--out", dir.string()},
                   &err),
            kExitNonSymmetric);
  EXPECT_NE(err.find("symmetric"), std::string::npos);
  EXPECT_EQ(invoke({"design", "--config", osc.string(), "--algorithm", "bogus"}),
            kExitUsage);
  // Every order refused by the condition limit.
  const fs::path refused = write_config(dir, R"(
system:
  n: 2
  m: 2
  A: [[[0, 0], [0, 0]], [[0, -1], [1, 0]]]
  B: [[[1, 0], [0, 1]]]
profiles: {initial: oscillator_init, target: oscillator_target}
design: {T: 1, N_start: 7, N_max: 7}
)");
  EXPECT_EQ(invoke({"design", "--config", refused.string(), "--out", dir.string()}, &err),
            kExitNumerical);
  EXPECT_EQ(invoke({"design", "--config", (dir / "missing.yaml").string()}), kExitUsage);
  EXPECT_EQ(invoke({"design"}), kExitUsage);
  EXPECT_EQ(invoke({}), kExitUsage);
  EXPECT_EQ(invoke({"reproduce", "nothing"}), kExitUsage);
  EXPECT_EQ(invoke({"--help"}), kExitOk);
}

GTEST_TEST(Design, DeterministicOutputAndSeedEcho) {
  const fs::path dir = scratch("design_determinism");
  const fs::path cfg = write_config(dir, std::string(kScalarSystem) + R"(
profiles: {initial: scalar_sin, target: scalar_cos}
design: {T: 1, epsilon: 1e-3, N_start: 2, N_max: 6, grid: 101}
)");
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(invoke({"--seed", "42", "design", "--config", cfg.string(), "--out",
                      (dir / sub).string()}),
              kExitOk);
  }
  for (const char* f : {"control.csv", "trace.csv", "report.txt"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  EXPECT_NE(slurp(dir / "a" / "report.txt").find("seed: 42"), std::string::npos);
  for (const auto& row : read_csv(dir / "a" / "control.csv")) {
    ASSERT_EQ(row.size(), 2u);
  }
}

GTEST_TEST(Reproduce, ScalarColumns) {
  const fs::path dir = scratch("reproduce_scalar");
  ASSERT_EQ(invoke({"reproduce", "scalar", "--out", dir.string()}), kExitOk);
  const auto rows = read_csv(dir / "scalar_error.csv");
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"N", "finite", "approx", "upper_bound"}));
  EXPECT_EQ(rows[1][0], "2");
  EXPECT_EQ(rows[11][0], "12");
}

}  // namespace
}  // namespace legmom::cli

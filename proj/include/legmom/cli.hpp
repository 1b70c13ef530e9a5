#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "legmom/control_synthesis.hpp"
#include "legmom/controllability.hpp"
#include "legmom/errors.hpp"
#include "legmom/moment_dynamics.hpp"
#include "legmom/profile.hpp"

namespace legmom::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitNonSymmetric = 4,
};

struct ConfigError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

enum class Algorithm { APriori, SamplingFree };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

struct DesignConfig {
  double horizon = 1.0;
  double epsilon = 1e-3;
  int order_start = 2;
  int order_max = 12;
  Algorithm algorithm = Algorithm::APriori;
  int intervals = kDefaultControlIntervals;
  Interpolation interpolation = Interpolation::PiecewiseLinear;
  int gramian_steps = kDefaultGramianSteps;
  double condition_limit = kDefaultConditionLimit;
  int grid_points = kDefaultGridPoints;
  int simulation_steps = 2000;
  int reference_order = 60;
};

struct BoundConfig {
  std::optional<double> chi;  // nullopt: optimize
  DeltaRule delta_rule = DeltaRule::NormBound;
  double delta = 0.0;
  bool refine = false;  // tridiagonal exponent
};

struct AnalyzeConfig {
  std::vector<int> orders;
  double tolerance = kDefaultRankTolerance;
};

struct ProblemConfig {
  std::optional<PolynomialEnsemble> ensemble;
  std::optional<Profile> initial;
  std::optional<Profile> target;
  bool has_design = false;
  DesignConfig design;
  BoundConfig bound;
  bool has_analyze = false;
  AnalyzeConfig analyze;
  std::string output_directory = ".";

  DesignSettings settings() const;
};

// Throws ConfigError on malformed input.
ProblemConfig parse_config(const std::string& yaml_text);
ProblemConfig load_config(const std::filesystem::path& path);

// Writers and numeric formatting shared by the commands.
std::string format_number(double v);

// Commands. Each returns an exit code and reports problems on `err`.
int cmd_analyze(const ProblemConfig& cfg, const std::filesystem::path& out,
                std::ostream& log, std::ostream& err);
int cmd_design(const ProblemConfig& cfg, std::optional<Algorithm> algorithm,
               const std::filesystem::path& out, std::ostream& log,
               std::ostream& err, std::optional<long long> seed = {});
int cmd_reproduce(const std::string& name, const std::filesystem::path& out,
                  std::ostream& log, std::ostream& err);

// Full command line: analyze | design | reproduce.
int run(int argc, const char* const* argv, std::ostream& log,
        std::ostream& err);

// Bundled problem definitions.
std::vector<std::string> preset_names();
std::string preset_config(const std::string& name);

// Benchmark drivers behind `reproduce`.
struct OscillatorBenchmark {
  std::vector<int> orders;
  std::vector<double> error_t1;
  std::vector<double> error_t35;
  DesignReport report_t1;
  DesignReport report_t35;
};
OscillatorBenchmark run_oscillator_benchmark();

struct ScalarRow {
  int order = 0;
  double finite = 0.0;       // |m_bar(T) - m_bar_F| of the truncated design
  double approx = 0.0;       // simulated L2 distance
  double upper_bound = 0.0;  // E_N
  double reference = 0.0;    // |m_ref(T) - m_F| at the reference order
  double rho = 0.0;
  double gramian_condition = 0.0;
};
struct ScalarBenchmark {
  std::vector<ScalarRow> rows;
  double horizon = 1.0;
};
ScalarBenchmark run_scalar_benchmark();

struct PatternBenchmark {
  EnsembleSnapshot final_state;
  double distance = 0.0;
  double target_norm = 0.0;
  DesignReport report;
};
PatternBenchmark run_pattern_benchmark();

}  // namespace legmom::cli

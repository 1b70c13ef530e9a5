#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "legmom/cli.hpp"

namespace legmom::cli {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw InvalidArgument("cannot write '" + path.string() + "'");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out_ << (i ? "," : "") << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::ofstream open_text(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  return out;
}

void prepare_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InvalidArgument("cannot create output directory '" + dir.string() + "'");
  }
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const NonHermitianError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonSymmetric;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

void write_control(const ControlSignal& u, const fs::path& path) {
  std::vector<std::string> header{"t"};
  for (int j = 0; j < u.inputs(); ++j) header.push_back("u_" + std::to_string(j + 1));
  CsvWriter csv(path, header);
  for (int s = 0; s <= u.intervals(); ++s) {
    std::vector<std::string> cells{format_number(u.time(s))};
    for (int j = 0; j < u.inputs(); ++j) cells.push_back(format_number(u.values()(s, j)));
    csv.row(cells);
  }
}

void write_trace(const DesignReport& r, const fs::path& path) {
  CsvWriter csv(path, {"N", "error", "gramian_condition", "status",
                       "truncated_error", "initial", "initial_tail", "control",
                       "target_tail", "design_residual", "chi", "rho"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& it : r.iterations) {
    const BoundTerms b = it.bound.value_or(BoundTerms{nan, nan, nan, nan, nan});
    csv.row({std::to_string(it.order), format_number(it.error),
             format_number(it.gramian_condition), it.status,
             format_number(it.truncated_error), format_number(b.initial),
             format_number(b.initial_tail), format_number(b.control),
             format_number(b.target_tail), format_number(b.design_residual),
             format_number(it.chi), format_number(it.rho)});
  }
}

void write_report(const DesignReport& r, double epsilon, const fs::path& path,
                  std::optional<long long> seed) {
  std::ofstream out = open_text(path);
  out << "algorithm: " << r.algorithm << '\n';
  out << "epsilon: " << format_number(epsilon) << '\n';
  out << "chosen N: " << r.chosen_order << '\n';
  out << "error metric: " << format_number(r.error_metric) << '\n';
  out << "status: " << (r.converged ? "converged" : "not converged by N_max") << '\n';
  if (seed) out << "seed: " << *seed << '\n';
  out << "warnings: " << r.warnings.size() << '\n';
  for (const auto& w : r.warnings) out << "- " << w << '\n';
}

}  // namespace

int cmd_analyze(const ProblemConfig& cfg, const fs::path& out, std::ostream& log,
                std::ostream& err) {
  return guarded(err, [&] {
    if (!cfg.has_analyze) throw ConfigError("analyze: an 'analyze' section is required");
    const DensenessReport rep =
        denseness_sweep(*cfg.ensemble, cfg.analyze.orders, cfg.analyze.tolerance);
    prepare_directory(out);
    {
      CsvWriter csv(out / "controllability.csv",
                    {"N", "dimension", "rank", "controllable", "min_singular_value",
                     "max_singular_value"});
      for (const auto& e : rep.entries) {
        csv.row({std::to_string(e.order), std::to_string(e.dimension),
                 std::to_string(e.rank.rank), e.rank.controllable ? "1" : "0",
                 format_number(e.rank.min_singular_value),
                 format_number(e.rank.max_singular_value)});
      }
    }
    {
      std::ofstream v = open_text(out / "verdict.txt");
      v << "verdict: " << rep.verdict << '\n';
      if (rep.first_failure) v << "first failing N: " << *rep.first_failure << '\n';
      if (rep.infinite_system_verdict) {
        v << "infinite system: " << *rep.infinite_system_verdict << '\n';
      }
      v << "caveat: " << rep.caveat << '\n';
    }
    if (rep.witness) {
      CsvWriter csv(out / "witness.csv", {"index", "value"});
      for (Eigen::Index i = 0; i < rep.witness->size(); ++i) {
        csv.row({std::to_string(i), format_number((*rep.witness)(i))});
      }
    }
    log << rep.verdict << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_design(const ProblemConfig& cfg, std::optional<Algorithm> algorithm,
               const fs::path& out, std::ostream& log, std::ostream& err,
               std::optional<long long> seed) {
  return guarded(err, [&] {
    if (!cfg.has_design) throw ConfigError("design: a 'design' section is required");
    if (!cfg.initial || !cfg.target) {
      throw ConfigError("design: profiles.initial and profiles.target are required");
    }
    const Algorithm alg = algorithm.value_or(cfg.design.algorithm);
    const DesignSettings settings = cfg.settings();
    const DesignReport r =
        alg == Algorithm::APriori
            ? algorithm_a_priori(*cfg.ensemble, *cfg.initial, *cfg.target, settings)
            : algorithm_sampling_free(*cfg.ensemble, *cfg.initial, *cfg.target,
                                      settings);
    prepare_directory(out);
    write_control(r.control, out / "control.csv");
    write_trace(r, out / "trace.csv");
    write_report(r, settings.epsilon, out / "report.txt", seed);
    log << r.algorithm << ": N = " << r.chosen_order
        << ", error = " << format_number(r.error_metric)
        << (r.converged ? "" : " (not converged by N_max)") << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_reproduce(const std::string& name, const fs::path& out, std::ostream& log,
                  std::ostream& err) {
  return guarded(err, [&] {
    if (name == "oscillator") {
      const OscillatorBenchmark b = run_oscillator_benchmark();
      prepare_directory(out);
      CsvWriter csv(out / "oscillator_error.csv", {"N", "T_1", "T_3.5"});
      for (std::size_t i = 0; i < b.orders.size(); ++i) {
        csv.row({std::to_string(b.orders[i]), format_number(b.error_t1[i]),
                 format_number(b.error_t35[i])});
      }
      write_control(b.report_t1.control, out / "oscillator_control.csv");
      write_trace(b.report_t1, out / "oscillator_trace_T_1.csv");
      write_trace(b.report_t35, out / "oscillator_trace_T_3.5.csv");
      log << "oscillator: " << b.orders.size() << " orders written\n";
    } else if (name == "pattern") {
      const PatternBenchmark b = run_pattern_benchmark();
      const Profile target = preset_profile("square");
      prepare_directory(out);
      CsvWriter csv(out / "pattern_final.csv",
                    {"beta", "x", "y", "target_x", "target_y"});
      for (std::size_t i = 0; i < b.final_state.grid.size(); ++i) {
        const double beta = b.final_state.grid[i];
        const Eigen::VectorXd t = target(beta);
        csv.row({format_number(beta), format_number(b.final_state.states[i](0)),
                 format_number(b.final_state.states[i](1)), format_number(t(0)),
                 format_number(t(1))});
      }
      write_control(b.report.control, out / "pattern_control.csv");
      const int order = b.report.chosen_order;
      const MomentVector m0 = analyze(preset_profile("circle"), order);
      const MomentVector mf = analyze(target, order);
      CsvWriter moments(out / "pattern_moments.csv",
                        {"k", "initial_1", "initial_2", "target_1", "target_2"});
      for (int k = 0; k < order; ++k) {
        moments.row({std::to_string(k), format_number(m0.block(k)(0)),
                     format_number(m0.block(k)(1)), format_number(mf.block(k)(0)),
                     format_number(mf.block(k)(1))});
      }
      std::ofstream rep = open_text(out / "report.txt");
      rep << "N: " << order << '\n';
      rep << "L2 distance: " << format_number(b.distance) << '\n';
      rep << "target L2 norm: " << format_number(b.target_norm) << '\n';
      rep << "relative distance: " << format_number(b.distance / b.target_norm) << '\n';
      log << "pattern: relative distance " << format_number(b.distance / b.target_norm)
          << '\n';
    } else if (name == "scalar") {
      const ScalarBenchmark b = run_scalar_benchmark();
      prepare_directory(out);
      CsvWriter csv(out / "scalar_error.csv", {"N", "finite", "approx", "upper_bound"});
      CsvWriter detail(out / "scalar_detail.csv",
                       {"N", "finite", "approx", "upper_bound", "reference", "rho",
                        "gramian_condition"});
      for (const ScalarRow& r : b.rows) {
        csv.row({std::to_string(r.order), format_number(r.finite),
                 format_number(r.approx), format_number(r.upper_bound)});
        detail.row({std::to_string(r.order), format_number(r.finite),
                    format_number(r.approx), format_number(r.upper_bound),
                    format_number(r.reference), format_number(r.rho),
                    format_number(r.gramian_condition)});
      }
      log << "scalar: " << b.rows.size() << " orders written\n";
    } else {
      throw ConfigError("unknown example '" + name +
                        "' (expected oscillator, pattern or scalar)");
    }
    return static_cast<int>(kExitOk);
  });
}

int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"Legendre-moment ensemble control"};
  app.require_subcommand(1);
  std::optional<long long> seed;
  app.add_option("--seed", seed, "Seed for randomized runs (recorded in reports)");

  std::string config_path, out_dir, algorithm, example;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Controllability sweep");
  analyze_cmd->add_option("--config", config_path, "Problem file")->required();
  analyze_cmd->add_option("--out", out_dir, "Output directory");

  CLI::App* design_cmd = app.add_subcommand("design", "Control design loop");
  design_cmd->add_option("--config", config_path, "Problem file")->required();
  design_cmd->add_option("--algorithm", algorithm, "a-priori or sampling-free");
  design_cmd->add_option("--out", out_dir, "Output directory");

  CLI::App* reproduce_cmd = app.add_subcommand("reproduce", "Bundled benchmarks");
  reproduce_cmd->add_option("name", example, "oscillator, pattern or scalar")
      ->required();
  reproduce_cmd->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, log, err);
    return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitUsage);
  }

  if (*reproduce_cmd) {
    return cmd_reproduce(example, out_dir.empty() ? fs::path(example + "_out") : fs::path(out_dir),
                         log, err);
  }
  ProblemConfig cfg;
  std::optional<Algorithm> alg;
  const int parsed = guarded(err, [&] {
    cfg = load_config(config_path);
    if (!algorithm.empty()) alg = parse_algorithm(algorithm);
    return static_cast<int>(kExitOk);
  });
  if (parsed != kExitOk) return parsed;
  const fs::path out = out_dir.empty() ? fs::path(cfg.output_directory) : fs::path(out_dir);
  if (*analyze_cmd) return cmd_analyze(cfg, out, log, err);
  return cmd_design(cfg, alg, out, log, err, seed);
}

}  // namespace legmom::cli

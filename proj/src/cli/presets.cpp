#include <limits>
#include <map>

#include "legmom/cli.hpp"

namespace legmom::cli {

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"scalar", R"(# x' = beta x + u, steering sin(pi beta / 2) to cos(pi beta / 2).
system:
  n: 1
  m: 1
  basis: monomial
  A: [0, 1]
  B: [1]
profiles:
  initial: {preset: scalar_sin}
  target: {preset: scalar_cos}
design:
  T: 1
  epsilon: 1e-12
  N_start: 2
  N_max: 12
  algorithm: sampling-free
  gramian_condition_limit: none
bound:
  chi: optimize
  delta: shift
  refine: true
analyze:
  orders: [2, 3, 4, 5, 6, 7, 8, 9, 10]
output:
  directory: scalar_out
)"},
      {"oscillator", R"(# Harmonic oscillators x' = beta A x + u with A a rotation generator.
system:
  n: 2
  m: 2
  basis: monomial
  A:
    - [[0, 0], [0, 0]]
    - [[0, -1], [1, 0]]
  B:
    - [[1, 0], [0, 1]]
profiles:
  initial: {preset: oscillator_init}
  target: {preset: oscillator_target}
design:
  T: 1
  epsilon: 1e-3
  N_start: 2
  N_max: 9
  algorithm: a-priori
analyze:
  orders: [2, 3, 4, 5, 6]
output:
  directory: oscillator_out
)"},
      {"pattern", R"(# Circle to square with the oscillator ensemble.
system:
  n: 2
  m: 2
  basis: monomial
  A:
    - [[0, 0], [0, 0]]
    - [[0, -1], [1, 0]]
  B:
    - [[1, 0], [0, 1]]
profiles:
  initial: {preset: circle}
  target: {preset: square}
design:
  T: 17
  epsilon: none
  N_start: 17
  N_max: 17
  algorithm: a-priori
  gramian_condition_limit: none
  steps: 8000
output:
  directory: pattern_out
)"},
      {"single_input_oscillator", R"(# x' = beta A x + (1, 0) u with A = [[0, 1], [-1, 0]].
system:
  n: 2
  m: 1
  basis: monomial
  A:
    - [[0, 0], [0, 0]]
    - [[0, 1], [-1, 0]]
  B:
    - [[1], [0]]
analyze:
  orders: [2, 3, 4, 5, 6]
output:
  directory: single_input_oscillator_out
)"},
  };
  return table;
}

DesignSettings full_sweep(DesignSettings s) {
  s.epsilon = std::numeric_limits<double>::min();
  return s;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& kv : presets()) names.push_back(kv.first);
  return names;
}

std::string preset_config(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

OscillatorBenchmark run_oscillator_benchmark() {
  const ProblemConfig cfg = parse_config(preset_config("oscillator"));
  OscillatorBenchmark out;
  DesignSettings s = full_sweep(cfg.settings());
  out.report_t1 = algorithm_a_priori(*cfg.ensemble, *cfg.initial, *cfg.target, s);
  s.horizon = 3.5;
  out.report_t35 = algorithm_a_priori(*cfg.ensemble, *cfg.initial, *cfg.target, s);
  for (std::size_t i = 0; i < out.report_t1.iterations.size(); ++i) {
    out.orders.push_back(out.report_t1.iterations[i].order);
    out.error_t1.push_back(out.report_t1.iterations[i].error);
    out.error_t35.push_back(out.report_t35.iterations[i].error);
  }
  return out;
}

ScalarBenchmark run_scalar_benchmark() {
  const ProblemConfig cfg = parse_config(preset_config("scalar"));
  const DesignSettings base = full_sweep(cfg.settings());
  const PolynomialEnsemble& ens = *cfg.ensemble;
  const MomentVector m0 = analyze(*cfg.initial, base.reference_order, base.rule);
  const MomentVector mf = analyze(*cfg.target, base.reference_order, base.rule);
  const MomentSystem ref = build_moment_system(ens, base.reference_order);
  const std::vector<double> grid = uniform_grid(base.grid_points);

  ScalarBenchmark out;
  out.horizon = base.horizon;
  for (int order = base.order_start; order <= base.order_max; ++order) {
    DesignSettings s = base;
    s.order_start = order;
    s.order_max = order;
    const DesignReport r = algorithm_sampling_free(ens, *cfg.initial, *cfg.target, s);
    const IterationRecord& it = r.iterations.front();
    if (it.status != "ok") {
      throw NumericalError("scalar benchmark: order " + std::to_string(order) +
                           " produced no design");
    }
    ScalarRow row;
    row.order = order;
    row.finite = it.truncated_error;
    row.upper_bound = it.error;
    row.rho = it.rho;
    row.gramian_condition = it.gramian_condition;
    row.reference =
        (propagate_exact(ref, m0.entries(), r.control) - mf.entries()).norm();
    const EnsembleSnapshot snap = simulate_ensemble(
        ens, *cfg.initial, r.control, s.horizon, grid, s.simulation);
    row.approx = l2_distance(snap, *cfg.target);
    out.rows.push_back(row);
  }
  return out;
}

PatternBenchmark run_pattern_benchmark() {
  const ProblemConfig cfg = parse_config(preset_config("pattern"));
  const DesignSettings s = cfg.settings();
  PatternBenchmark out;
  out.report = algorithm_a_priori(*cfg.ensemble, *cfg.initial, *cfg.target, s);
  out.final_state =
      simulate_ensemble(*cfg.ensemble, *cfg.initial, out.report.control,
                        s.horizon, uniform_grid(s.grid_points), s.simulation);
  out.distance = l2_distance(out.final_state, *cfg.target);
  out.target_norm = l2_norm(*cfg.target);
  return out;
}

}  // namespace legmom::cli

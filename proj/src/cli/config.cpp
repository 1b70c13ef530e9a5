#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "legmom/cli.hpp"

namespace legmom::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

const std::set<std::string> kTopLevel = {"system", "profiles", "design",
                                         "bound", "analyze", "output"};

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(where, "expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
  }
}

double as_double(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a number");
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) fail(where, "number must be finite");
    return v;
  } catch (const YAML::Exception&) {
    fail(where, "expected a number, got '" + node.Scalar() + "'");
  }
}

int as_int(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected an integer");
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    fail(where, "expected an integer, got '" + node.Scalar() + "'");
  }
}

std::string as_string(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a string");
  return node.Scalar();
}

bool is_none(const YAML::Node& node) {
  return node.IsScalar() && (node.Scalar() == "none" || node.Scalar() == "inf");
}

// A number, a row [a, b, ...] or a list of rows.
Eigen::MatrixXd as_matrix(const YAML::Node& node, int rows, int cols,
                          const std::string& where) {
  Eigen::MatrixXd out(rows, cols);
  if (node.IsScalar()) {
    if (rows != 1 || cols != 1) fail(where, "expected a " + std::to_string(rows) +
                                                "x" + std::to_string(cols) + " matrix");
    out(0, 0) = as_double(node, where);
    return out;
  }
  if (!node.IsSequence()) fail(where, "expected a matrix");
  const bool flat = node.size() > 0 && node[0].IsScalar();
  if (flat) {
    // A single row, or a column vector when cols == 1.
    if (static_cast<int>(node.size()) != rows * cols || (rows != 1 && cols != 1)) {
      fail(where, "expected a " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " matrix");
    }
    for (int i = 0; i < rows * cols; ++i) {
      out(rows == 1 ? 0 : i, rows == 1 ? i : 0) =
          as_double(node[i], where + "[" + std::to_string(i) + "]");
    }
    return out;
  }
  if (static_cast<int>(node.size()) != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows");
  }
  for (int i = 0; i < rows; ++i) {
    const YAML::Node row = node[i];
    if (!row.IsSequence() || static_cast<int>(row.size()) != cols) {
      fail(where, "row " + std::to_string(i) + " must have " +
                      std::to_string(cols) + " entries");
    }
    for (int j = 0; j < cols; ++j) {
      out(i, j) = as_double(row[j], where + "[" + std::to_string(i) + "][" +
                                        std::to_string(j) + "]");
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> as_coefficients(const YAML::Node& node, int rows,
                                             int cols, const std::string& where) {
  if (!node || !node.IsSequence() || node.size() == 0) {
    fail(where, "expected a nonempty list of coefficient matrices");
  }
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(as_matrix(node[i], rows, cols,
                            where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

PolynomialEnsemble parse_system(const YAML::Node& node) {
  check_keys(node, "system", {"n", "m", "basis", "A", "B"});
  if (!node["n"] || !node["m"]) fail("system", "n and m are required");
  const int n = as_int(node["n"], "system.n");
  const int m = as_int(node["m"], "system.m");
  if (n < 1 || m < 1) fail("system", "n and m must be positive");
  const std::string basis =
      node["basis"] ? as_string(node["basis"], "system.basis") : "monomial";
  const auto a = as_coefficients(node["A"], n, n, "system.A");
  const auto b = as_coefficients(node["B"], n, m, "system.B");
  if (basis == "monomial") return PolynomialEnsemble::from_monomial(a, b);
  if (basis == "legendre") return PolynomialEnsemble(a, b);
  fail("system.basis", "must be 'monomial' or 'legendre'");
}

Expression parse_expression(const YAML::Node& node, const std::string& where) {
  if (node.IsScalar()) return Expression::constant(as_double(node, where));
  check_keys(node, where, {"poly", "sin", "cos"});
  if (node.size() != 1) fail(where, "expected exactly one of poly, sin, cos");
  if (node["poly"]) {
    const YAML::Node c = node["poly"];
    if (!c.IsSequence() || c.size() == 0) fail(where + ".poly", "expected coefficients");
    std::vector<double> coeffs;
    for (std::size_t i = 0; i < c.size(); ++i) {
      coeffs.push_back(as_double(c[i], where + ".poly"));
    }
    return Expression::polynomial(std::move(coeffs));
  }
  const bool sine = static_cast<bool>(node["sin"]);
  const YAML::Node ab = sine ? node["sin"] : node["cos"];
  const std::string w = where + (sine ? ".sin" : ".cos");
  if (!ab.IsSequence() || ab.size() < 1 || ab.size() > 2) {
    fail(w, "expected [a] or [a, b]");
  }
  const double a = as_double(ab[0], w);
  const double b = ab.size() == 2 ? as_double(ab[1], w) : 0.0;
  return sine ? Expression::sine(a, b) : Expression::cosine(a, b);
}

Profile parse_profile(const YAML::Node& node, int n, const std::string& where) {
  if (!node) fail(where, "missing");
  std::optional<Profile> out;
  if (node.IsScalar()) {
    out = preset_profile(node.Scalar());
  } else {
    check_keys(node, where, {"preset", "segments"});
    if (node["preset"]) {
      out = preset_profile(as_string(node["preset"], where + ".preset"));
    } else if (node["segments"]) {
      const YAML::Node segs = node["segments"];
      if (!segs.IsSequence() || segs.size() == 0) {
        fail(where + ".segments", "expected a nonempty list");
      }
      std::vector<ProfileSegment> pieces;
      for (std::size_t s = 0; s < segs.size(); ++s) {
        const std::string ws = where + ".segments[" + std::to_string(s) + "]";
        check_keys(segs[s], ws, {"from", "to", "components"});
        ProfileSegment seg;
        seg.lo = segs[s]["from"] ? as_double(segs[s]["from"], ws + ".from") : -1.0;
        seg.hi = segs[s]["to"] ? as_double(segs[s]["to"], ws + ".to") : 1.0;
        const YAML::Node comps = segs[s]["components"];
        if (!comps || !comps.IsSequence()) fail(ws, "components list required");
        for (std::size_t c = 0; c < comps.size(); ++c) {
          seg.components.push_back(
              parse_expression(comps[c], ws + ".components[" + std::to_string(c) + "]"));
        }
        pieces.push_back(std::move(seg));
      }
      out = Profile(n, std::move(pieces));
    } else {
      fail(where, "expected 'preset' or 'segments'");
    }
  }
  if (out->dim() != n) fail(where, "profile dimension does not match system.n");
  return *out;
}

void parse_design(const YAML::Node& node, DesignConfig& d) {
  check_keys(node, "design",
             {"T", "epsilon", "N_start", "N_max", "algorithm", "intervals",
              "interpolation", "gramian_steps", "gramian_condition_limit", "grid",
              "steps", "reference_order"});
  if (node["T"]) d.horizon = as_double(node["T"], "design.T");
  if (!(d.horizon > 0.0)) fail("design.T", "must be positive");
  if (node["epsilon"]) {
    d.epsilon = is_none(node["epsilon"]) ? std::numeric_limits<double>::infinity()
                                         : as_double(node["epsilon"], "design.epsilon");
  }
  if (!(d.epsilon > 0.0)) fail("design.epsilon", "must be positive or 'none'");
  if (node["N_start"]) d.order_start = as_int(node["N_start"], "design.N_start");
  if (node["N_max"]) d.order_max = as_int(node["N_max"], "design.N_max");
  if (d.order_start < 1 || d.order_max < d.order_start) {
    fail("design", "need 1 <= N_start <= N_max");
  }
  if (node["algorithm"]) {
    d.algorithm = parse_algorithm(as_string(node["algorithm"], "design.algorithm"));
  }
  if (node["intervals"]) d.intervals = as_int(node["intervals"], "design.intervals");
  if (d.intervals < 2) fail("design.intervals", "must be at least 2");
  if (node["interpolation"]) {
    const std::string s = as_string(node["interpolation"], "design.interpolation");
    if (s == "linear") {
      d.interpolation = Interpolation::PiecewiseLinear;
    } else if (s == "hold") {
      d.interpolation = Interpolation::ZeroOrderHold;
    } else {
      fail("design.interpolation", "must be 'linear' or 'hold'");
    }
  }
  if (node["gramian_steps"]) {
    d.gramian_steps = as_int(node["gramian_steps"], "design.gramian_steps");
  }
  if (d.gramian_steps < 2) fail("design.gramian_steps", "must be at least 2");
  if (node["gramian_condition_limit"]) {
    const YAML::Node c = node["gramian_condition_limit"];
    d.condition_limit = is_none(c) ? kNoConditionLimit
                                   : as_double(c, "design.gramian_condition_limit");
  }
  if (!(d.condition_limit > 1.0)) {
    fail("design.gramian_condition_limit", "must exceed 1 or be 'none'");
  }
  if (node["grid"]) d.grid_points = as_int(node["grid"], "design.grid");
  if (d.grid_points < 3) fail("design.grid", "must be at least 3");
  if (node["steps"]) d.simulation_steps = as_int(node["steps"], "design.steps");
  if (d.simulation_steps < 2) fail("design.steps", "must be at least 2");
  if (node["reference_order"]) {
    d.reference_order = as_int(node["reference_order"], "design.reference_order");
  }
  if (d.reference_order <= d.order_max) {
    fail("design.reference_order", "must exceed N_max");
  }
}

void parse_bound(const YAML::Node& node, BoundConfig& b) {
  check_keys(node, "bound", {"chi", "delta", "refine"});
  if (node["chi"]) {
    const YAML::Node c = node["chi"];
    if (c.IsScalar() && c.Scalar() == "optimize") {
      b.chi.reset();
    } else {
      b.chi = as_double(c, "bound.chi");
      if (!(*b.chi > 1.0)) fail("bound.chi", "must exceed 1");
    }
  }
  if (node["delta"]) {
    const YAML::Node d = node["delta"];
    const std::string s = as_string(d, "bound.delta");
    if (s == "banded") {
      b.delta_rule = DeltaRule::NormBound;
    } else if (s == "shift") {
      b.delta_rule = DeltaRule::Shift;
    } else {
      b.delta_rule = DeltaRule::Given;
      b.delta = as_double(d, "bound.delta");
      if (b.delta < 0.0) fail("bound.delta", "must be nonnegative");
    }
  }
  if (node["refine"]) {
    try {
      b.refine = node["refine"].as<bool>();
    } catch (const YAML::Exception&) {
      fail("bound.refine", "expected true or false");
    }
  }
}

void parse_analyze(const YAML::Node& node, AnalyzeConfig& a) {
  check_keys(node, "analyze", {"orders", "tolerance"});
  const YAML::Node o = node["orders"];
  if (!o || !o.IsSequence()) fail("analyze.orders", "expected a list of orders");
  for (std::size_t i = 0; i < o.size(); ++i) {
    a.orders.push_back(as_int(o[i], "analyze.orders"));
  }
  if (a.orders.empty()) fail("analyze.orders", "must not be empty");
  for (std::size_t i = 0; i < a.orders.size(); ++i) {
    if (a.orders[i] < 1 || (i > 0 && a.orders[i] <= a.orders[i - 1])) {
      fail("analyze.orders", "must be positive and strictly increasing");
    }
  }
  if (node["tolerance"]) a.tolerance = as_double(node["tolerance"], "analyze.tolerance");
  if (!(a.tolerance > 0.0)) fail("analyze.tolerance", "must be positive");
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
  if (name == "a-priori") return Algorithm::APriori;
  if (name == "sampling-free") return Algorithm::SamplingFree;
  throw ConfigError("unknown algorithm '" + name +
                    "' (expected a-priori or sampling-free)");
}

std::string algorithm_name(Algorithm a) {
  return a == Algorithm::APriori ? "a-priori" : "sampling-free";
}

DesignSettings ProblemConfig::settings() const {
  DesignSettings s;
  s.horizon = design.horizon;
  s.epsilon = design.epsilon;
  s.order_start = design.order_start;
  s.order_max = design.order_max;
  s.control.intervals = design.intervals;
  s.control.gramian_steps = design.gramian_steps;
  s.control.condition_limit = design.condition_limit;
  s.control.interpolation = design.interpolation;
  s.reference_order = design.reference_order;
  s.grid_points = design.grid_points;
  s.simulation.steps = design.simulation_steps;
  s.chi = bound.chi;
  s.decay.reference_order = design.reference_order;
  s.decay.delta_rule = bound.delta_rule;
  s.decay.delta = bound.delta;
  s.exponent = bound.refine ? QExponent::Tridiagonal : QExponent::General;
  return s;
}

ProblemConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  try {
    check_keys(root, "config", kTopLevel);
    ProblemConfig cfg;
    if (!root["system"]) fail("config", "a 'system' section is required");
    cfg.ensemble = parse_system(root["system"]);
    const int n = cfg.ensemble->state_dim();
    if (root["profiles"]) {
      check_keys(root["profiles"], "profiles", {"initial", "target"});
      cfg.initial = parse_profile(root["profiles"]["initial"], n, "profiles.initial");
      cfg.target = parse_profile(root["profiles"]["target"], n, "profiles.target");
    }
    if (root["design"]) {
      cfg.has_design = true;
      parse_design(root["design"], cfg.design);
    }
    if (root["bound"]) parse_bound(root["bound"], cfg.bound);
    if (root["analyze"]) {
      cfg.has_analyze = true;
      parse_analyze(root["analyze"], cfg.analyze);
    }
    if (root["output"]) {
      check_keys(root["output"], "output", {"directory"});
      if (root["output"]["directory"]) {
        cfg.output_directory =
            as_string(root["output"]["directory"], "output.directory");
      }
    }
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace legmom::cli

#include "legmom/ensemble_sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace legmom {
namespace {

// Control values at the three RK4 stage times of every step.
struct StageControls {
  Eigen::MatrixXd start, mid, end;  // m x steps
};

StageControls stage_controls(const ControlSignal& u, double horizon,
                             int steps) {
  const double h = horizon / steps;
  StageControls sc;
  sc.start.resize(u.inputs(), steps);
  sc.mid.resize(u.inputs(), steps);
  sc.end.resize(u.inputs(), steps);
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const double anchor = t + 0.5 * h;
    sc.start.col(s) = u.evaluate_on_piece(t, anchor);
    sc.mid.col(s) = u.evaluate_on_piece(t + 0.5 * h, anchor);
    sc.end.col(s) = u.evaluate_on_piece(t + h, anchor);
  }
  return sc;
}

Eigen::VectorXd integrate_member(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const StageControls& sc, Eigen::VectorXd x,
                                 double h) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n);
  const Eigen::MatrixXd bu0 = b * sc.start;
  const Eigen::MatrixXd bum = b * sc.mid;
  const Eigen::MatrixXd bu1 = b * sc.end;
  for (Eigen::Index s = 0; s < sc.start.cols(); ++s) {
    k1.noalias() = a * x;
    k1 += bu0.col(s);
    tmp = x + 0.5 * h * k1;
    k2.noalias() = a * tmp;
    k2 += bum.col(s);
    tmp = x + 0.5 * h * k2;
    k3.noalias() = a * tmp;
    k3 += bum.col(s);
    tmp = x + h * k3;
    k4.noalias() = a * tmp;
    k4 += bu1.col(s);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

bool uniform_odd(const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  if (n < 3 || n % 2 == 0) return false;
  const double h = (grid.back() - grid.front()) / (n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(grid[i] - (grid.front() + i * h)) > 1e-12) return false;
  }
  return true;
}

double integrate_samples(const std::vector<double>& grid,
                         const std::vector<double>& f) {
  const std::size_t n = grid.size();
  if (n < 2) return 0.0;
  if (uniform_odd(grid)) {
    const double h = (grid.back() - grid.front()) / (n - 1);
    double acc = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += 0.5 * (grid[i + 1] - grid[i]) * (f[i] + f[i + 1]);
  }
  return acc;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidArgument("empty parameter grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::abs(grid[i]) <= 1.0)) {
      throw DomainError("grid point outside [-1, 1]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidArgument("grid must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = -1.0 + 2.0 * i / (points - 1);
  g.back() = 1.0;
  return g;
}

EnsembleSnapshot sample_profile(const Profile& profile,
                                const std::vector<double>& grid) {
  check_grid(grid);
  EnsembleSnapshot snap;
  snap.grid = grid;
  snap.states.reserve(grid.size());
  for (double beta : grid) snap.states.push_back(profile(beta));
  return snap;
}

EnsembleSnapshot simulate_ensemble(const PolynomialEnsemble& ens,
                                   const Profile& x0, const ControlSignal& u,
                                   double horizon,
                                   const std::vector<double>& grid,
                                   const EnsembleSimOptions& options,
                                   Warnings* warnings) {
  check_grid(grid);
  if (x0.dim() != ens.state_dim()) {
    throw InvalidArgument("initial profile dimension does not match ensemble");
  }
  if (u.inputs() != ens.input_dim()) {
    throw InvalidArgument("control has wrong input count");
  }
  if (!(horizon > 0.0) || horizon > u.horizon() * (1.0 + 1e-12)) {
    throw InvalidArgument("simulation horizon must lie in (0, control horizon]");
  }
  if (options.steps < 1) throw InvalidArgument("need at least one RK4 step");
  const StageControls coarse = stage_controls(u, horizon, options.steps);
  StageControls fine;
  if (options.self_check) fine = stage_controls(u, horizon, 2 * options.steps);

  EnsembleSnapshot snap;
  snap.grid = grid;
  snap.time = horizon;
  snap.states.reserve(grid.size());
  double worst = 0.0;
  double worst_beta = 0.0;
  for (double beta : grid) {
    const Eigen::MatrixXd a = ens.a_at(beta);
    const Eigen::MatrixXd b = ens.b_at(beta);
    Eigen::VectorXd x =
        integrate_member(a, b, coarse, x0(beta), horizon / options.steps);
    if (!x.allFinite()) {
      throw NumericalError("non-finite ensemble state at beta = " +
                           std::to_string(beta));
    }
    if (options.self_check) {
      const Eigen::VectorXd xf = integrate_member(
          a, b, fine, x0(beta), horizon / (2 * options.steps));
      const double moved = (xf - x).norm();
      if (moved > worst) {
        worst = moved;
        worst_beta = beta;
      }
    }
    snap.states.push_back(std::move(x));
  }
  if (worst > options.self_check_tolerance) {
    warn(warnings, "RK4 step halving moved the ensemble state by " +
                       std::to_string(worst) + " at beta = " +
                       std::to_string(worst_beta));
  }
  return snap;
}

double l2_distance(const Profile& a, const Profile& b,
                   const QuadratureRule& rule) {
  if (a.dim() != b.dim()) throw InvalidArgument("profile dimensions differ");
  std::set<double> cuts;
  for (const auto& s : a.segments()) cuts.insert({s.lo, s.hi});
  for (const auto& s : b.segments()) cuts.insert({s.lo, s.hi});
  const std::vector<double> pts(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
    const double mid = 0.5 * (pts[p] + pts[p + 1]);
    const double half = 0.5 * (pts[p + 1] - pts[p]);
    for (int q = 0; q < rule.order; ++q) {
      const double beta = mid + half * rule.nodes[q];
      acc += half * rule.weights[q] * (a(beta) - b(beta)).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

double l2_norm(const Profile& a, const QuadratureRule& rule) {
  return l2_distance(a, Profile::zero(a.dim()), rule);
}

double l2_distance(const EnsembleSnapshot& a, const Profile& b) {
  if (a.states.empty()) throw InvalidArgument("empty snapshot");
  if (a.states.front().size() != b.dim()) {
    throw InvalidArgument("snapshot and profile dimensions differ");
  }
  std::vector<double> f(a.grid.size());
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    f[i] = (a.states[i] - b(a.grid[i])).squaredNorm();
  }
  return std::sqrt(integrate_samples(a.grid, f));
}

double l2_distance(const EnsembleSnapshot& a, const EnsembleSnapshot& b) {
  if (a.states.empty() || b.states.empty()) {
    throw InvalidArgument("empty snapshot");
  }
  if (a.states.front().size() != b.states.front().size()) {
    throw InvalidArgument("snapshot dimensions differ");
  }
  std::vector<double> f(a.grid.size());
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    const double beta = a.grid[i];
    auto it = std::lower_bound(b.grid.begin(), b.grid.end(), beta);
    Eigen::VectorXd vb;
    if (it != b.grid.end() && *it == beta) {
      vb = b.states[it - b.grid.begin()];
    } else if (it == b.grid.begin()) {
      vb = b.states.front();
    } else if (it == b.grid.end()) {
      vb = b.states.back();
    } else {
      const std::size_t j = it - b.grid.begin();
      const double theta = (beta - b.grid[j - 1]) / (b.grid[j] - b.grid[j - 1]);
      vb = (1.0 - theta) * b.states[j - 1] + theta * b.states[j];
    }
    f[i] = (a.states[i] - vb).squaredNorm();
  }
  return std::sqrt(integrate_samples(a.grid, f));
}

MomentVector moments_from_snapshot(const EnsembleSnapshot& snap,
                                   const QuadratureRule& rule, int order) {
  if (snap.grid.size() != rule.nodes.size()) {
    throw InvalidArgument("snapshot grid is not the quadrature node set");
  }
  const int n = static_cast<int>(snap.states.front().size());
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n * order);
  for (std::size_t q = 0; q < snap.grid.size(); ++q) {
    if (std::abs(snap.grid[q] - rule.nodes[q]) > 1e-14) {
      throw InvalidArgument("snapshot grid is not the quadrature node set");
    }
    const Eigen::VectorXd p = legendre_values(order, snap.grid[q]);
    for (int k = 0; k < order; ++k) {
      m.segment(k * n, n) += rule.weights[q] * p(k) * snap.states[q];
    }
  }
  return MomentVector(n, order, std::move(m));
}

}  // namespace legmom

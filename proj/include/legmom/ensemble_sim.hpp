#pragma once

#include <Eigen/Dense>
#include <vector>

#include "legmom/control_signal.hpp"
#include "legmom/errors.hpp"
#include "legmom/legendre_basis.hpp"
#include "legmom/moment_dynamics.hpp"
#include "legmom/profile.hpp"

namespace legmom {

// Ensemble state sampled on a parameter grid at one time.
struct EnsembleSnapshot {
  std::vector<double> grid;             // strictly increasing, inside [-1, 1]
  std::vector<Eigen::VectorXd> states;  // one per grid point
  double time = 0.0;
};

constexpr int kDefaultGridPoints = 501;

std::vector<double> uniform_grid(int points = kDefaultGridPoints);

EnsembleSnapshot sample_profile(const Profile& profile,
                                const std::vector<double>& grid);

struct EnsembleSimOptions {
  int steps = 2000;
  bool self_check = true;
  double self_check_tolerance = 1e-8;
};

// Integrates every member x' = A(beta) x + B(beta) u(t) on [0, T] with RK4.
EnsembleSnapshot simulate_ensemble(const PolynomialEnsemble& ens,
                                   const Profile& x0, const ControlSignal& u,
                                   double horizon,
                                   const std::vector<double>& grid,
                                   const EnsembleSimOptions& options = {},
                                   Warnings* warnings = nullptr);

// L2 distance over [-1, 1]. Profile pairs use the quadrature rule on every
// piece; snapshots use composite Simpson on their grid (trapezoid when the
// grid is not uniform with an odd number of points). These are sampling
// estimates, not certified values.
double l2_distance(const Profile& a, const Profile& b,
                   const QuadratureRule& rule = default_rule());
double l2_distance(const EnsembleSnapshot& a, const Profile& b);
double l2_distance(const EnsembleSnapshot& a, const EnsembleSnapshot& b);
double l2_norm(const Profile& a, const QuadratureRule& rule = default_rule());

// Moments of a snapshot taken on the nodes of `rule`.
MomentVector moments_from_snapshot(const EnsembleSnapshot& snap,
                                   const QuadratureRule& rule, int order);

}  // namespace legmom

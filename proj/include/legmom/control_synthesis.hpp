#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "legmom/control_signal.hpp"
#include "legmom/ensemble_sim.hpp"
#include "legmom/error_bounds.hpp"
#include "legmom/moment_dynamics.hpp"
#include "legmom/profile.hpp"

namespace legmom {

constexpr double kDefaultConditionLimit = 1e12;
constexpr double kNoConditionLimit = std::numeric_limits<double>::infinity();
constexpr int kDefaultGramianSteps = 400;
constexpr int kDefaultControlIntervals = 1000;

// W(T) = int_0^T e^{As} B B^T e^{A^T s} ds by composite Simpson.
Eigen::MatrixXd gramian(const MomentSystem& sys, double horizon,
                        int steps = kDefaultGramianSteps);

// lambda_max / lambda_min of a symmetric matrix; infinity when singular.
double condition_number(const Eigen::MatrixXd& sym);

struct MinEnergyOptions {
  int intervals = kDefaultControlIntervals;
  int gramian_steps = kDefaultGramianSteps;
  // Refuse when cond(W) exceeds this; infinity disables the refusal.
  double condition_limit = kDefaultConditionLimit;
  Interpolation interpolation = Interpolation::PiecewiseLinear;
};

struct MinEnergyDesign {
  ControlSignal control;
  double gramian_condition = 0.0;
  Eigen::VectorXd endpoint;  // exact endpoint of the truncated system
  double residual = 0.0;     // |endpoint - mF|
};

// Least-energy control in the sampled class that steers m0 to mF in time T.
// Solved as a minimum-norm problem on the exact endpoint map (row
// equilibration + QR), which coincides with the Gramian formula
// u(t) = B^T e^{A^T (T-t)} W(T)^{-1} (mF - e^{AT} m0) up to discretization but
// stays accurate when W is badly conditioned. Throws GramianError when W is
// singular or its condition number exceeds the limit.
MinEnergyDesign min_energy_design(const MomentSystem& sys,
                                  const Eigen::VectorXd& m0,
                                  const Eigen::VectorXd& mf, double horizon,
                                  const MinEnergyOptions& options = {});

ControlSignal min_energy_control(const MomentSystem& sys,
                                 const MomentVector& m0, const MomentVector& mf,
                                 double horizon,
                                 const MinEnergyOptions& options = {});

struct IterationRecord {
  int order = 0;
  double error = std::numeric_limits<double>::quiet_NaN();
  double gramian_condition = std::numeric_limits<double>::quiet_NaN();
  // "ok", "refused" (condition limit) or "failed" (other numerical failure).
  std::string status;
  double truncated_error = std::numeric_limits<double>::quiet_NaN();
  std::optional<BoundTerms> bound;
  double chi = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
};

struct DesignReport {
  std::string algorithm;
  int chosen_order = 0;
  ControlSignal control;
  double error_metric = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<IterationRecord> iterations;
  Warnings warnings;
};

struct DesignSettings {
  double horizon = 1.0;
  double epsilon = 1e-3;  // infinity stops after the first iteration
  int order_start = 2;
  int order_max = 12;
  MinEnergyOptions control;
  int reference_order = 60;
  QuadratureRule rule = default_rule();

  // Simulation-validated loop.
  int grid_points = kDefaultGridPoints;
  EnsembleSimOptions simulation;

  // Bound-validated loop.
  std::optional<double> chi;  // nullopt: optimize per order
  double chi_min = 1.0 + 1e-6;
  double chi_max = 1e6;
  DecaySetup decay;
  QExponent exponent = QExponent::General;
};

// Increase N until the simulated L2 error of the ensemble is at most epsilon.
// A refused or failed order keeps the previous design and error.
DesignReport algorithm_a_priori(const PolynomialEnsemble& ens,
                                const Profile& x0, const Profile& xf,
                                const DesignSettings& settings);

// Increase N until the computable bound E_N is at most epsilon; no ensemble
// simulation. Throws NonHermitianError for a non-symmetric moment operator.
DesignReport algorithm_sampling_free(const PolynomialEnsemble& ens,
                                     const Profile& x0, const Profile& xf,
                                     const DesignSettings& settings);

}  // namespace legmom

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "legmom/errors.hpp"

namespace legmom {

// Classical fixed-step Runge-Kutta 4 for x' = f(t, x, anchor), where
// `anchor` is the midpoint of the current step (see
// ControlSignal::evaluate_on_piece). Returns the states at every step when
// `keep_path` is set, otherwise only the endpoint.
template <typename Rhs>
std::vector<Eigen::VectorXd> rk4_integrate(const Rhs& f, Eigen::VectorXd x,
                                           double t0, double t1, int steps,
                                           bool keep_path) {
  if (steps < 1) throw InvalidArgument("RK4 needs at least one step");
  const double h = (t1 - t0) / steps;
  std::vector<Eigen::VectorXd> path;
  if (keep_path) {
    path.reserve(steps + 1);
    path.push_back(x);
  }
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const double anchor = t + 0.5 * h;
    const Eigen::VectorXd k1 = f(t, x, anchor);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, x + 0.5 * h * k1, anchor);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, x + 0.5 * h * k2, anchor);
    const Eigen::VectorXd k4 = f(t + h, x + h * k3, anchor);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      throw NumericalError("RK4 state became non-finite at t = " +
                           std::to_string(t + h));
    }
    if (keep_path) path.push_back(x);
  }
  if (!keep_path) path.push_back(std::move(x));
  return path;
}

}  // namespace legmom

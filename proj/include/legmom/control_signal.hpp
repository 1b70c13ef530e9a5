#pragma once

#include <Eigen/Dense>

namespace legmom {

enum class Interpolation { ZeroOrderHold, PiecewiseLinear };

// Vector-valued control sampled on the uniform grid t_s = s T / S.
class ControlSignal {
 public:
  ControlSignal() = default;
  // `values` has S + 1 rows (samples) and m columns (inputs).
  ControlSignal(double horizon, Eigen::MatrixXd values,
                Interpolation interpolation = Interpolation::PiecewiseLinear);
  static ControlSignal zero(double horizon, int inputs, int intervals,
                            Interpolation interpolation =
                                Interpolation::PiecewiseLinear);
  static ControlSignal constant(double horizon, const Eigen::VectorXd& value,
                                int intervals);

  double horizon() const { return horizon_; }
  int intervals() const { return static_cast<int>(values_.rows()) - 1; }
  int inputs() const { return static_cast<int>(values_.cols()); }
  double step() const { return horizon_ / intervals(); }
  double time(int s) const { return s * step(); }
  Interpolation interpolation() const { return interpolation_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd sample(int s) const { return values_.row(s).transpose(); }

  // u(t) for t in [0, T].
  Eigen::VectorXd operator()(double t) const;
  // u(t) using the interpolation piece that contains `anchor`. Integrators
  // pass the midpoint of their step so that stage evaluations at a step end
  // stay on the correct piece of a zero-order hold.
  Eigen::VectorXd evaluate_on_piece(double t, double anchor) const;

  // Exact integral of |u(t)|^2 over [0, T] for the declared interpolation.
  double energy() const;

 private:
  int piece_of(double t) const;

  double horizon_ = 1.0;
  Eigen::MatrixXd values_;
  Interpolation interpolation_ = Interpolation::PiecewiseLinear;
};

}  // namespace legmom

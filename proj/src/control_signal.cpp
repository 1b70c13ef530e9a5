#include "legmom/control_signal.hpp"

#include <algorithm>
#include <cmath>

#include "legmom/errors.hpp"

namespace legmom {

ControlSignal::ControlSignal(double horizon, Eigen::MatrixXd values,
                             Interpolation interpolation)
    : horizon_(horizon),
      values_(std::move(values)),
      interpolation_(interpolation) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw InvalidArgument("control horizon must be positive");
  }
  if (values_.rows() < 2 || values_.cols() < 1) {
    throw InvalidArgument("control needs at least two samples and one input");
  }
  if (!values_.allFinite()) throw NumericalError("non-finite control sample");
}

ControlSignal ControlSignal::zero(double horizon, int inputs, int intervals,
                                  Interpolation interpolation) {
  return ControlSignal(horizon, Eigen::MatrixXd::Zero(intervals + 1, inputs),
                       interpolation);
}

ControlSignal ControlSignal::constant(double horizon,
                                      const Eigen::VectorXd& value,
                                      int intervals) {
  Eigen::MatrixXd v = value.transpose().replicate(intervals + 1, 1);
  return ControlSignal(horizon, std::move(v));
}

int ControlSignal::piece_of(double t) const {
  const int s = static_cast<int>(std::floor(t / step()));
  return std::clamp(s, 0, intervals() - 1);
}

Eigen::VectorXd ControlSignal::evaluate_on_piece(double t,
                                                 double anchor) const {
  const int s = piece_of(anchor);
  if (interpolation_ == Interpolation::ZeroOrderHold) return sample(s);
  const double theta = (t - time(s)) / step();
  return ((1.0 - theta) * values_.row(s) + theta * values_.row(s + 1))
      .transpose();
}

Eigen::VectorXd ControlSignal::operator()(double t) const {
  if (t < -1e-12 * horizon_ || t > horizon_ * (1.0 + 1e-12)) {
    throw InvalidArgument("control evaluated outside [0, T]");
  }
  if (interpolation_ == Interpolation::ZeroOrderHold && t >= horizon_) {
    return sample(intervals() - 1);
  }
  return evaluate_on_piece(t, t);
}

double ControlSignal::energy() const {
  const double h = step();
  double e = 0.0;
  for (int s = 0; s < intervals(); ++s) {
    const auto a = values_.row(s);
    if (interpolation_ == Interpolation::ZeroOrderHold) {
      e += h * a.squaredNorm();
    } else {
      const auto b = values_.row(s + 1);
      e += h / 3.0 * (a.squaredNorm() + a.dot(b) + b.squaredNorm());
    }
  }
  return e;
}

}  // namespace legmom

#include "legmom/moment_dynamics.hpp"

#include <cmath>
#include <numbers>

#include "legmom/rk4.hpp"

namespace legmom {
namespace {

// Zero out coefficients that are round-off from the quadrature projection.
void clean(std::vector<Eigen::MatrixXd>& coeffs) {
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, c.cwiseAbs().maxCoeff());
  const double cut = 1e-14 * scale;
  for (auto& c : coeffs) c = (c.array().abs() <= cut).select(0.0, c);
  while (coeffs.size() > 1 && coeffs.back().isZero(0.0)) coeffs.pop_back();
}

std::vector<Eigen::MatrixXd> monomial_to_legendre(
    const std::vector<Eigen::MatrixXd>& mono) {
  const int deg = static_cast<int>(mono.size()) - 1;
  const QuadratureRule rule = gauss_legendre(deg + 2);
  std::vector<Eigen::MatrixXd> out(
      deg + 1, Eigen::MatrixXd::Zero(mono[0].rows(), mono[0].cols()));
  for (int q = 0; q < rule.order; ++q) {
    const double beta = rule.nodes[q];
    Eigen::MatrixXd value = Eigen::MatrixXd::Zero(mono[0].rows(), mono[0].cols());
    double power = 1.0;
    for (int j = 0; j <= deg; ++j) {
      value += power * mono[j];
      power *= beta;
    }
    const Eigen::VectorXd p = legendre_values(deg + 1, beta);
    for (int i = 0; i <= deg; ++i) out[i] += rule.weights[q] * p(i) * value;
  }
  clean(out);
  return out;
}

Eigen::MatrixXd eval_monomial(const std::vector<Eigen::MatrixXd>& mono,
                              double beta) {
  Eigen::MatrixXd value = Eigen::MatrixXd::Zero(mono[0].rows(), mono[0].cols());
  for (auto it = mono.rbegin(); it != mono.rend(); ++it) {
    value = value * beta + *it;
  }
  return value;
}

Eigen::MatrixXd eval_legendre_series(const std::vector<Eigen::MatrixXd>& c,
                                     double beta) {
  const Eigen::VectorXd p = legendre_values(static_cast<int>(c.size()), beta);
  Eigen::MatrixXd value = Eigen::MatrixXd::Zero(c[0].rows(), c[0].cols());
  for (std::size_t i = 0; i < c.size(); ++i) value += p(i) * c[i];
  return value;
}

void check_reexpansion(const std::vector<Eigen::MatrixXd>& mono,
                       const std::vector<Eigen::MatrixXd>& leg) {
  for (double beta : {-1.0, -0.61, 0.0, 0.37, 1.0}) {
    const Eigen::MatrixXd a = eval_monomial(mono, beta);
    const Eigen::MatrixXd b = eval_legendre_series(leg, beta);
    if ((a - b).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff())) {
      throw NumericalError("monomial to Legendre conversion failed re-expansion");
    }
  }
}

}  // namespace

PolynomialEnsemble::PolynomialEnsemble(std::vector<Eigen::MatrixXd> a_coeffs,
                                       std::vector<Eigen::MatrixXd> b_coeffs)
    : a_(std::move(a_coeffs)), b_(std::move(b_coeffs)) {
  if (a_.empty() || b_.empty()) {
    throw InvalidArgument("ensemble needs at least one A and one B coefficient");
  }
  n_ = static_cast<int>(a_[0].rows());
  m_ = static_cast<int>(b_[0].cols());
  if (n_ < 1 || m_ < 1) throw InvalidArgument("empty ensemble dimensions");
  for (const auto& a : a_) {
    if (a.rows() != n_ || a.cols() != n_) {
      throw InvalidArgument("A coefficients must all be n x n");
    }
    if (!a.allFinite()) throw InvalidArgument("non-finite A coefficient");
  }
  for (const auto& b : b_) {
    if (b.rows() != n_ || b.cols() != m_) {
      throw InvalidArgument("B coefficients must all be n x m");
    }
    if (!b.allFinite()) throw InvalidArgument("non-finite B coefficient");
  }
}

PolynomialEnsemble PolynomialEnsemble::from_monomial(
    std::vector<Eigen::MatrixXd> a_mono, std::vector<Eigen::MatrixXd> b_mono) {
  if (a_mono.empty() || b_mono.empty()) {
    throw InvalidArgument("ensemble needs at least one A and one B coefficient");
  }
  auto a = monomial_to_legendre(a_mono);
  auto b = monomial_to_legendre(b_mono);
  check_reexpansion(a_mono, a);
  check_reexpansion(b_mono, b);
  return PolynomialEnsemble(std::move(a), std::move(b));
}

PolynomialEnsemble PolynomialEnsemble::prototype(const Eigen::MatrixXd& a,
                                                 const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  return PolynomialEnsemble({zero, std::sqrt(2.0 / 3.0) * a},
                            {std::numbers::sqrt2 * b});
}

Eigen::MatrixXd PolynomialEnsemble::a_at(double beta) const {
  return eval_legendre_series(a_, beta);
}

Eigen::MatrixXd PolynomialEnsemble::b_at(double beta) const {
  return eval_legendre_series(b_, beta);
}

bool PolynomialEnsemble::is_prototype() const {
  return a_.size() == 2 && a_[0].isZero(0.0) && b_.size() == 1;
}

BlockGenerator PolynomialEnsemble::a_generator() const {
  BlockGenerator g;
  g.block_size = n_;
  g.block_bandwidth = a_degree();
  g.block = [coeffs = a_, n = n_](int k, int l) {
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(n, n);
    const int n1 = static_cast<int>(coeffs.size()) - 1;
    for (int i = std::abs(k - l); i <= n1; ++i) {
      if ((i + k - l) % 2 != 0) continue;
      blk += product_coeff(k, i, (i + k - l) / 2) * coeffs[i];
    }
    return blk;
  };
  return g;
}

MomentOperator moment_operator(const PolynomialEnsemble& ens) {
  return MomentOperator{ens.a_generator(), ens.b_coeffs(), ens.input_dim()};
}

MomentSystem truncate(const MomentOperator& op, int order) {
  MomentSystem sys;
  sys.a_hat = truncate(op.a, order);
  sys.order = order;
  sys.n = op.a.block_size;
  sys.m = op.inputs;
  sys.b_hat = Eigen::MatrixXd::Zero(sys.n * order, sys.m);
  const int blocks = std::min<int>(order, static_cast<int>(op.b_blocks.size()));
  for (int k = 0; k < blocks; ++k) {
    sys.b_hat.block(k * sys.n, 0, sys.n, sys.m) = op.b_blocks[k];
  }
  return sys;
}

MomentSystem build_moment_system(const PolynomialEnsemble& ens, int order) {
  return truncate(moment_operator(ens), order);
}

MomentSystem prototype_system(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b, int order) {
  if (order < 1) throw InvalidArgument("truncation order must be positive");
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw InvalidArgument("prototype needs square A and matching B");
  }
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(order, order);
  for (int k = 0; k + 1 < order; ++k) {
    c(k, k + 1) = c(k + 1, k) = recurrence_coeff(k);
  }
  Eigen::MatrixXd ahat(n * order, n * order);
  for (int k = 0; k < order; ++k) {
    for (int l = 0; l < order; ++l) {
      ahat.block(k * n, l * n, n, n) = c(k, l) * a;
    }
  }
  MomentSystem sys;
  const int b_width = n == 1 ? 2 : 2 * (2 * n - 1);
  sys.a_hat = BandedMatrix(std::move(ahat), b_width);
  sys.b_hat = Eigen::MatrixXd::Zero(n * order, b.cols());
  sys.b_hat.topRows(n) = std::numbers::sqrt2 * b;
  sys.order = order;
  sys.n = n;
  sys.m = static_cast<int>(b.cols());
  return sys;
}

Trajectory simulate_truncated(const MomentSystem& sys, const MomentVector& m0,
                              const ControlSignal& u, double horizon,
                              const SimulationOptions& options,
                              Warnings* warnings) {
  if (m0.entries().size() != sys.dim()) {
    throw InvalidArgument("initial moments do not match the system dimension");
  }
  if (u.inputs() != sys.m) throw InvalidArgument("control has wrong input count");
  if (!(horizon > 0.0) || horizon > u.horizon() * (1.0 + 1e-12)) {
    throw InvalidArgument("simulation horizon must lie in (0, control horizon]");
  }
  const Eigen::MatrixXd& a = sys.a_hat.dense();
  const Eigen::MatrixXd& b = sys.b_hat;
  auto rhs = [&](double t, const Eigen::VectorXd& x, double anchor) {
    return Eigen::VectorXd(a * x + b * u.evaluate_on_piece(t, anchor));
  };
  auto path = rk4_integrate(rhs, m0.entries(), 0.0, horizon, options.steps, true);
  if (options.self_check) {
    auto fine = rk4_integrate(rhs, m0.entries(), 0.0, horizon,
                              2 * options.steps, false);
    const double moved = (fine.back() - path.back()).norm();
    if (moved > options.self_check_tolerance) {
      warn(warnings, "RK4 step halving moved the moment endpoint by " +
                         std::to_string(moved));
    }
  }
  Trajectory traj;
  traj.times.reserve(path.size());
  traj.states.reserve(path.size());
  for (std::size_t s = 0; s < path.size(); ++s) {
    traj.times.push_back(horizon * static_cast<double>(s) / options.steps);
    traj.states.emplace_back(sys.n, sys.order, std::move(path[s]));
  }
  return traj;
}

SampledMaps sampled_maps(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                         double h, Interpolation interpolation) {
  const Eigen::Index d = a.rows();
  const Eigen::Index m = b.cols();
  SampledMaps maps;
  if (interpolation == Interpolation::ZeroOrderHold) {
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(d + m, d + m);
    aug.topLeftCorner(d, d) = a * h;
    aug.topRightCorner(d, m) = b * h;
    const Eigen::MatrixXd e = expm(aug);
    maps.phi = e.topLeftCorner(d, d);
    maps.gamma0 = e.topRightCorner(d, m);
    maps.gamma1 = Eigen::MatrixXd::Zero(d, m);
    return maps;
  }
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(d + 2 * m, d + 2 * m);
  aug.topLeftCorner(d, d) = a * h;
  aug.block(0, d, d, m) = b * h;
  aug.block(d, d + m, m, m) = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd e = expm(aug);
  maps.phi = e.topLeftCorner(d, d);
  const Eigen::MatrixXd e12 = e.block(0, d, d, m);
  const Eigen::MatrixXd e13 = e.block(0, d + m, d, m);
  maps.gamma0 = e12 - e13;
  maps.gamma1 = e13;
  return maps;
}

Eigen::VectorXd propagate_exact(const MomentSystem& sys,
                                const Eigen::VectorXd& m0,
                                const ControlSignal& u) {
  if (m0.size() != sys.dim()) {
    throw InvalidArgument("initial moments do not match the system dimension");
  }
  if (u.inputs() != sys.m) throw InvalidArgument("control has wrong input count");
  const SampledMaps maps =
      sampled_maps(sys.a_hat.dense(), sys.b_hat, u.step(), u.interpolation());
  Eigen::VectorXd x = m0;
  for (int s = 0; s < u.intervals(); ++s) {
    x = maps.phi * x + maps.gamma0 * u.sample(s) + maps.gamma1 * u.sample(s + 1);
  }
  return x;
}

EndpointMap endpoint_map(const MomentSystem& sys, double horizon,
                         int intervals, Interpolation interpolation) {
  if (intervals < 1) throw InvalidArgument("need at least one control interval");
  const SampledMaps maps = sampled_maps(sys.a_hat.dense(), sys.b_hat,
                                        horizon / intervals, interpolation);
  const int d = sys.dim();
  const int m = sys.m;
  EndpointMap out;
  out.input_map = Eigen::MatrixXd::Zero(d, m * (intervals + 1));
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
  for (int s = intervals - 1; s >= 0; --s) {
    out.input_map.middleCols(s * m, m) += p * maps.gamma0;
    out.input_map.middleCols((s + 1) * m, m) += p * maps.gamma1;
    p = p * maps.phi;
  }
  out.transition = std::move(p);
  return out;
}

}  // namespace legmom

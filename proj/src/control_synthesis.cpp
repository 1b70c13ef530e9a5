#include "legmom/control_synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

namespace legmom {

Eigen::MatrixXd gramian(const MomentSystem& sys, double horizon, int steps) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (steps < 2) throw InvalidArgument("Gramian needs at least two steps");
  if (steps % 2 != 0) ++steps;
  const double h = horizon / steps;
  const Eigen::MatrixXd step = expm(sys.a_hat, h);
  Eigen::MatrixXd f = sys.b_hat;  // e^{A s} B at s = k h
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(sys.dim(), sys.dim());
  for (int k = 0; k <= steps; ++k) {
    const double weight = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    w.noalias() += weight * f * f.transpose();
    f = step * f;
  }
  w *= h / 3.0;
  return 0.5 * (w + w.transpose());
}

double condition_number(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  if (ev.size() == 0) return 1.0;
  if (!(ev(0) > 0.0)) return std::numeric_limits<double>::infinity();
  return ev(ev.size() - 1) / ev(0);
}

namespace {

// Cholesky factor of the Gram matrix of the interpolation basis on one
// channel: M = L L^T with L lower bidiagonal (diag, sub).
struct Bidiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd sub;
};

Bidiagonal energy_factor(int samples, double h, Interpolation interp) {
  Bidiagonal l;
  l.diag.resize(samples);
  l.sub = Eigen::VectorXd::Zero(std::max(samples - 1, 0));
  if (interp == Interpolation::ZeroOrderHold) {
    l.diag.setConstant(std::sqrt(h));
    return l;
  }
  // Piecewise-linear hat functions: M = h/6 tridiag(1, 4, 1), ends 2.
  for (int s = 0; s < samples; ++s) {
    const double m_ss = (s == 0 || s == samples - 1) ? h / 3.0 : 2.0 * h / 3.0;
    double d = m_ss;
    if (s > 0) {
      l.sub(s - 1) = (h / 6.0) / l.diag(s - 1);
      d -= l.sub(s - 1) * l.sub(s - 1);
    }
    l.diag(s) = std::sqrt(d);
  }
  return l;
}

// x <- L^{-1} x
void forward_solve(const Bidiagonal& l, Eigen::Ref<Eigen::VectorXd> x) {
  x(0) /= l.diag(0);
  for (Eigen::Index s = 1; s < x.size(); ++s) {
    x(s) = (x(s) - l.sub(s - 1) * x(s - 1)) / l.diag(s);
  }
}

// x <- L^{-T} x
void backward_solve(const Bidiagonal& l, Eigen::Ref<Eigen::VectorXd> x) {
  const Eigen::Index n = x.size();
  x(n - 1) /= l.diag(n - 1);
  for (Eigen::Index s = n - 2; s >= 0; --s) {
    x(s) = (x(s) - l.sub(s) * x(s + 1)) / l.diag(s);
  }
}

}  // namespace

MinEnergyDesign min_energy_design(const MomentSystem& sys,
                                  const Eigen::VectorXd& m0,
                                  const Eigen::VectorXd& mf, double horizon,
                                  const MinEnergyOptions& options) {
  const int d = sys.dim();
  const int m = sys.m;
  if (m0.size() != d || mf.size() != d) {
    throw InvalidArgument("moment vectors do not match the system dimension");
  }
  if (options.intervals < 1) throw InvalidArgument("need at least one interval");

  MinEnergyDesign out;
  out.gramian_condition =
      condition_number(gramian(sys, horizon, options.gramian_steps));
  if (!std::isfinite(out.gramian_condition)) {
    throw GramianError("controllability Gramian is singular",
                       out.gramian_condition);
  }
  if (out.gramian_condition > options.condition_limit) {
    throw GramianError("controllability Gramian condition number " +
                           std::to_string(out.gramian_condition) +
                           " exceeds the limit",
                       out.gramian_condition);
  }

  const int intervals = options.intervals;
  const EndpointMap map =
      endpoint_map(sys, horizon, intervals, options.interpolation);
  // With a zero-order hold the last sample never acts.
  const int active = options.interpolation == Interpolation::ZeroOrderHold
                       ? intervals
                       : intervals + 1;
  const Bidiagonal l =
      energy_factor(active, horizon / intervals, options.interpolation);

  // K^T = L^{-1} G^T channel by channel, so that |v| is the control energy.
  Eigen::MatrixXd kt = map.input_map.leftCols(active * m).transpose();
  for (int c = 0; c < d; ++c) {
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd col(active);
      for (int s = 0; s < active; ++s) col(s) = kt(s * m + j, c);
      forward_solve(l, col);
      for (int s = 0; s < active; ++s) kt(s * m + j, c) = col(s);
    }
  }
  Eigen::VectorXd rhs = mf - map.transition * m0;
  // Row equilibration of K.
  const Eigen::VectorXd scale = kt.colwise().norm().transpose();
  if (!(scale.minCoeff() > 0.0)) {
    throw GramianError("a moment coordinate is not reachable",
                       std::numeric_limits<double>::infinity());
  }
  for (int c = 0; c < d; ++c) {
    kt.col(c) /= scale(c);
    rhs(c) /= scale(c);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(kt);
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  const double rmax = r.diagonal().cwiseAbs().maxCoeff();
  if (!(r.diagonal().cwiseAbs().minCoeff() > 1e-15 * rmax)) {
    throw GramianError("endpoint map is rank deficient",
                       std::numeric_limits<double>::infinity());
  }
  // K v = rhs with K^T = Q R: v = Q R^{-T} rhs.
  Eigen::VectorXd y =
      r.transpose().triangularView<Eigen::Lower>().solve(rhs);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kt.rows());
  v.head(d) = y;
  v = qr.householderQ() * v;

  Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(intervals + 1, m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd ch(active);
    for (int s = 0; s < active; ++s) ch(s) = v(s * m + j);
    backward_solve(l, ch);
    samples.col(j).head(active) = ch;
  }
  if (active == intervals) samples.row(intervals) = samples.row(intervals - 1);
  if (!samples.allFinite()) throw NumericalError("non-finite control samples");

  out.control = ControlSignal(horizon, std::move(samples), options.interpolation);
  Eigen::VectorXd stacked(m * (intervals + 1));
  for (int s = 0; s <= intervals; ++s) {
    stacked.segment(s * m, m) = out.control.sample(s);
  }
  out.endpoint = map.transition * m0 + map.input_map * stacked;
  out.residual = (out.endpoint - mf).norm();
  return out;
}

ControlSignal min_energy_control(const MomentSystem& sys,
                                 const MomentVector& m0, const MomentVector& mf,
                                 double horizon,
                                 const MinEnergyOptions& options) {
  return min_energy_design(sys, m0.entries(), mf.entries(), horizon, options)
      .control;
}

namespace {

void check_settings(const PolynomialEnsemble& ens, const Profile& x0,
                    const Profile& xf, const DesignSettings& s) {
  if (!(s.horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (!(s.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (s.order_start < 1 || s.order_max < s.order_start) {
    throw InvalidArgument("need 1 <= N_start <= N_max");
  }
  if (x0.dim() != ens.state_dim() || xf.dim() != ens.state_dim()) {
    throw InvalidArgument("profile dimension does not match the ensemble");
  }
}

// Records a refused or failed order; returns false when the design failed.
template <typename Body>
bool attempt(IterationRecord& rec, DesignReport& report, Body&& body) {
  try {
    body();
    rec.status = "ok";
    return true;
  } catch (const GramianError& e) {
    rec.gramian_condition = e.condition_number();
    rec.status = std::isfinite(e.condition_number()) ? "refused" : "failed";
    warn(&report.warnings,
         "order " + std::to_string(rec.order) + ": " + e.what());
  } catch (const NumericalError& e) {
    rec.status = "failed";
    warn(&report.warnings,
         "order " + std::to_string(rec.order) + ": " + e.what());
  }
  return false;
}

}  // namespace

DesignReport algorithm_a_priori(const PolynomialEnsemble& ens,
                                const Profile& x0, const Profile& xf,
                                const DesignSettings& settings) {
  check_settings(ens, x0, xf, settings);
  DesignReport report;
  report.algorithm = "a-priori";
  const MomentOperator op = moment_operator(ens);
  const int top = std::max(settings.order_max, settings.reference_order);
  const MomentVector m0_full = analyze(x0, top, settings.rule, &report.warnings);
  const MomentVector mf_full = analyze(xf, top, settings.rule, &report.warnings);
  const std::vector<double> grid = uniform_grid(settings.grid_points);

  double error = std::numeric_limits<double>::infinity();
  bool have_design = false;
  for (int order = settings.order_start; order <= settings.order_max; ++order) {
    IterationRecord rec;
    rec.order = order;
    attempt(rec, report, [&] {
      const MomentSystem sys = truncate(op, order);
      const MomentVector m0 = m0_full.truncated(order);
      const MomentVector mf = mf_full.truncated(order);
      MinEnergyDesign design = min_energy_design(
          sys, m0.entries(), mf.entries(), settings.horizon, settings.control);
      rec.gramian_condition = design.gramian_condition;
      rec.truncated_error = design.residual;
      const EnsembleSnapshot snap =
          simulate_ensemble(ens, x0, design.control, settings.horizon, grid,
                            settings.simulation, &report.warnings);
      error = l2_distance(snap, xf);
      report.control = std::move(design.control);
      report.chosen_order = order;
      have_design = true;
    });
    rec.error = error;
    report.iterations.push_back(rec);
    if (have_design && error <= settings.epsilon) {
      report.converged = true;
      break;
    }
  }
  if (!have_design) throw NumericalError("no order produced a usable design");
  report.error_metric = error;
  return report;
}

DesignReport algorithm_sampling_free(const PolynomialEnsemble& ens,
                                     const Profile& x0, const Profile& xf,
                                     const DesignSettings& settings) {
  check_settings(ens, x0, xf, settings);
  DesignReport report;
  report.algorithm = "sampling-free";
  const MomentOperator op = moment_operator(ens);
  if (settings.reference_order <= settings.order_max) {
    throw InvalidArgument("reference order must exceed N_max");
  }
  {
    const BandedMatrix ref = truncate(op.a, settings.reference_order);
    if (!ref.hermitian()) {
      throw NonHermitianError(
          "the sampling-free design needs a symmetric moment operator; "
          "max |A - A^T| = " +
          std::to_string((ref.dense() - ref.dense().transpose())
                             .cwiseAbs()
                             .maxCoeff()));
    }
  }
  const MomentVector m0_full =
      analyze(x0, settings.reference_order, settings.rule, &report.warnings);
  const MomentVector mf_full =
      analyze(xf, settings.reference_order, settings.rule, &report.warnings);

  double error = std::numeric_limits<double>::infinity();
  bool have_design = false;
  for (int order = settings.order_start; order <= settings.order_max; ++order) {
    IterationRecord rec;
    rec.order = order;
    attempt(rec, report, [&] {
      const MomentSystem sys = truncate(op, order);
      const Eigen::VectorXd m0 = m0_full.entries().head(sys.dim());
      const Eigen::VectorXd mf = mf_full.entries().head(sys.dim());
      MinEnergyDesign design =
          min_energy_design(sys, m0, mf, settings.horizon, settings.control);
      rec.gramian_condition = design.gramian_condition;
      rec.truncated_error = design.residual;
      auto bound_at = [&](double chi) {
        const DecayParams p = decay_params(op, order, chi, settings.decay);
        return total_bound(design.control, sys, m0_full, mf_full, p,
                           settings.exponent, &design.endpoint);
      };
      double chi = 0.0;
      if (settings.chi) {
        chi = *settings.chi;
      } else {
        chi = optimize_rho(
                  [&](double c) { return bound_at(c).certified(); },
                  settings.chi_min, settings.chi_max,
                  decay_params(op, order, 2.0, settings.decay).b)
                  .chi;
      }
      const DecayParams p = decay_params(op, order, chi, settings.decay);
      rec.bound = bound_at(chi);
      rec.chi = chi;
      rec.rho = p.rho();
      error = rec.bound->certified();
      report.control = std::move(design.control);
      report.chosen_order = order;
      have_design = true;
    });
    rec.error = error;
    report.iterations.push_back(rec);
    if (have_design && error <= settings.epsilon) {
      report.converged = true;
      break;
    }
  }
  if (!have_design) throw NumericalError("no order produced a usable design");
  report.error_metric = error;
  return report;
}

}  // namespace legmom

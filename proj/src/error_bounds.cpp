#include "legmom/error_bounds.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace legmom {

double l_tail(const Eigen::VectorXd& xi, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0, 1)");
  const Eigen::Index n = xi.size();
  double acc = 0.0;
  double w = rho;  // rho^{N-k} for k = N-1 down to 0
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    acc += std::abs(xi(k)) * w;
    w *= rho;
  }
  return acc;
}

WEnvelope::WEnvelope(int dim, const DecayParams& p, QExponent exponent)
    : p_(p), rho_(p.rho()), q_pattern_(dim, dim) {
  if (!p.hermitian) {
    throw NonHermitianError(
        "the truncation error envelope requires a symmetric moment operator");
  }
  for (int j = 1; j <= dim; ++j) {
    for (int i = 1; i <= dim; ++i) {
      q_pattern_(i - 1, j - 1) =
          std::pow(rho_, truncation_exponent(i, j, dim, p.b, exponent));
    }
  }
}

double WEnvelope::operator()(double t, const Eigen::VectorXd& xi) const {
  if (xi.size() != q_pattern_.rows()) {
    throw InvalidArgument("envelope vector has the wrong length");
  }
  const double q = k_bar(t, p_) * (q_pattern_ * xi.cwiseAbs()).norm();
  const double k = std::exp(p_.lambda0 * t) * k_factor(t, p_) * l_tail(xi, rho_);
  return std::sqrt(q * q + k * k / (1.0 - rho_ * rho_));
}

double w_envelope(double t, const Eigen::VectorXd& xi, const DecayParams& p,
                  QExponent exponent) {
  return WEnvelope(static_cast<int>(xi.size()), p, exponent)(t, xi);
}

BoundTerms total_bound(const ControlSignal& u, const MomentSystem& sys,
                       const MomentVector& m0_full, const MomentVector& mF_full,
                       const DecayParams& p, QExponent exponent,
                       const Eigen::VectorXd* endpoint) {
  const int d = sys.dim();
  if (m0_full.dim() != sys.n || mF_full.dim() != sys.n) {
    throw InvalidArgument("moment dimensions do not match the system");
  }
  if (m0_full.order() < sys.order || mF_full.order() < sys.order) {
    throw InvalidArgument("reference moments must extend past the truncation");
  }
  const double horizon = u.horizon();
  const WEnvelope w(d, p, exponent);
  const Eigen::VectorXd m0 = m0_full.entries().head(d);
  const Eigen::VectorXd mf = mF_full.entries().head(d);

  BoundTerms terms;
  terms.initial = w(horizon, m0);
  terms.initial_tail = std::exp(horizon * norm_bound(p.m_max, p.b)) *
                       m0_full.entries().tail(m0_full.entries().size() - d).norm();
  terms.target_tail = mF_full.entries().tail(mF_full.entries().size() - d).norm();

  const int s_count = u.intervals();
  std::vector<double> f(s_count + 1);
  for (int s = 0; s <= s_count; ++s) {
    f[s] = w(horizon - u.time(s), sys.b_hat * u.sample(s));
  }
  const double h = u.step();
  double integral = 0.0;
  const int even = s_count - (s_count % 2);
  for (int s = 0; s + 2 <= even; s += 2) {
    integral += h / 3.0 * (f[s] + 4.0 * f[s + 1] + f[s + 2]);
  }
  if (even < s_count) integral += 0.5 * h * (f[even] + f[s_count]);
  terms.control = integral;

  const Eigen::VectorXd reached =
      endpoint != nullptr ? *endpoint : propagate_exact(sys, m0, u);
  terms.design_residual = (reached - mf).norm();
  return terms;
}

RhoOptimum optimize_rho(const std::function<double(double)>& objective,
                        double chi_lo, double chi_hi, int b, double rel_tol) {
  if (!(chi_lo > 1.0) || !(chi_hi > chi_lo)) {
    throw InvalidArgument("chi range must satisfy 1 < chi_lo < chi_hi");
  }
  auto eval = [&](double z) {
    const double v = objective(1.0 + std::exp(z));
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  const double z_lo = std::log(chi_lo - 1.0);
  const double z_hi = std::log(chi_hi - 1.0);
  constexpr int kScan = 65;
  std::vector<double> z(kScan), v(kScan);
  int best = 0;
  for (int i = 0; i < kScan; ++i) {
    z[i] = z_lo + (z_hi - z_lo) * i / (kScan - 1);
    v[i] = eval(z[i]);
    if (v[i] < v[best]) best = i;
  }
  if (!std::isfinite(v[best])) {
    throw NumericalError("bound objective is not finite anywhere on the chi range");
  }
  double a = z[std::max(best - 1, 0)];
  double c = z[std::min(best + 1, kScan - 1)];
  double best_z = z[best];
  double best_v = v[best];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = c - g * (c - a);
  double x2 = a + g * (c - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  // Stop once the chi bracket is within rel_tol of chi.
  while ((std::exp(c) - std::exp(a)) > rel_tol * (1.0 + std::exp(best_z))) {
    if (f1 <= f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = eval(x2);
    }
    if (f1 < best_v) {
      best_v = f1;
      best_z = x1;
    }
    if (f2 < best_v) {
      best_v = f2;
      best_z = x2;
    }
  }
  RhoOptimum out;
  out.chi = 1.0 + std::exp(best_z);
  out.rho = std::pow(out.chi, -2.0 / b);
  out.value = best_v;
  return out;
}

DecayParams decay_params(const MomentOperator& op, int order, double chi,
                         const DecaySetup& setup) {
  if (setup.reference_order <= order) {
    throw InvalidArgument("reference order must exceed the truncation order");
  }
  const BandedMatrix ref = truncate(op.a, setup.reference_order);
  const int d = op.a.block_size * order;
  DecayParams p;
  p.chi = chi;
  p.b = std::max(2, ref.bandwidth());
  p.m_max = ref.max_abs_entry();
  p.m12_max = ref.dense().block(0, d, d, ref.dim() - d).cwiseAbs().maxCoeff();
  p.lambda0 = setup.lambda0;
  p.hermitian = ref.hermitian();
  switch (setup.delta_rule) {
    case DeltaRule::NormBound:
      p.delta = norm_bound(p.m_max, p.b);
      break;
    case DeltaRule::Shift:
      p.delta = shift_norm_bound(ref);
      break;
    case DeltaRule::Given:
      p.delta = setup.delta;
      break;
  }
  p.validate();
  return p;
}

}  // namespace legmom

#include "legmom/legendre_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "legmom/profile.hpp"

namespace legmom {
namespace {

void check_beta(double beta) {
  if (!(std::abs(beta) <= 1.0)) {
    throw DomainError("Legendre evaluation point outside [-1, 1]: " +
                      std::to_string(beta));
  }
}

// Classical Legendre P_n(x) and its derivative.
std::pair<double, double> classical_legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw InvalidArgument("quadrature order must be positive");
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = classical_legendre(order, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = classical_legendre(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = gauss_legendre(kDefaultQuadratureOrder);
  return rule;
}

double recurrence_coeff(int k) {
  if (k < 0) throw InvalidArgument("recurrence index must be nonnegative");
  return (k + 1.0) / std::sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0));
}

Eigen::VectorXd legendre_values(int count, double beta) {
  check_beta(beta);
  Eigen::VectorXd p(std::max(count, 0));
  if (count <= 0) return p;
  p(0) = 1.0 / std::numbers::sqrt2;
  if (count == 1) return p;
  p(1) = std::sqrt(1.5) * beta;
  for (int k = 1; k + 1 < count; ++k) {
    p(k + 1) = (beta * p(k) - recurrence_coeff(k - 1) * p(k - 1)) /
               recurrence_coeff(k);
  }
  return p;
}

double eval_normalized_legendre(int k, double beta) {
  if (k < 0) throw InvalidArgument("Legendre index must be nonnegative");
  return legendre_values(k + 1, beta)(k);
}

double gauss_factor(int s) {
  if (s < 0) return 0.0;
  double g = 1.0;
  for (int j = 1; j <= s; ++j) g *= (j - 0.5) / j;
  return g;
}

double product_coeff(int k, int i, int r) {
  if (k < 0 || i < 0 || r < 0 || r > k || r > i) return 0.0;
  const double num = std::sqrt((2.0 * k + 2.0 * i - 4.0 * r + 1.0) *
                               (2.0 * k + 1.0) * (2.0 * i + 1.0));
  const double den = std::numbers::sqrt2 * (2.0 * k + 2.0 * i - 2.0 * r + 1.0);
  return num / den * gauss_factor(r) * gauss_factor(k - r) *
         gauss_factor(i - r) / gauss_factor(k + i - r);
}

MomentVector::MomentVector(int n, int order, Eigen::VectorXd entries)
    : n_(n), order_(order), entries_(std::move(entries)) {
  if (n < 1 || order < 0) throw InvalidArgument("invalid moment vector shape");
  if (entries_.size() != static_cast<Eigen::Index>(n) * order) {
    throw InvalidArgument("moment vector length must equal n * order");
  }
  if (!entries_.allFinite()) throw NumericalError("non-finite moment entry");
}

MomentVector MomentVector::zero(int n, int order) {
  return MomentVector(n, order, Eigen::VectorXd::Zero(n * order));
}

MomentVector MomentVector::truncated(int order) const {
  if (order < 0 || order > order_) {
    throw InvalidArgument("truncation order exceeds moment vector order");
  }
  return MomentVector(n_, order, entries_.head(n_ * order));
}

MomentVector MomentVector::padded(int order) const {
  if (order < order_) throw InvalidArgument("padding order below current order");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_ * order);
  e.head(entries_.size()) = entries_;
  return MomentVector(n_, order, std::move(e));
}

namespace {

Eigen::VectorXd integrate_moments(const Profile& profile, int order,
                                  const QuadratureRule& rule) {
  const int n = profile.dim();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n * order);
  for (const auto& seg : profile.segments()) {
    const double mid = 0.5 * (seg.lo + seg.hi);
    const double half = 0.5 * (seg.hi - seg.lo);
    for (int q = 0; q < rule.order; ++q) {
      const double beta = std::clamp(mid + half * rule.nodes[q], -1.0, 1.0);
      const double w = half * rule.weights[q];
      const Eigen::VectorXd p = legendre_values(order, beta);
      Eigen::VectorXd f(n);
      for (int d = 0; d < n; ++d) f(d) = seg.components[d](beta);
      for (int k = 0; k < order; ++k) m.segment(k * n, n) += (w * p(k)) * f;
    }
  }
  return m;
}

}  // namespace

MomentVector analyze(const Profile& profile, int order,
                     const QuadratureRule& rule, Warnings* warnings) {
  if (order < 1) throw InvalidArgument("moment order must be positive");
  Eigen::VectorXd m = integrate_moments(profile, order, rule);
  if (warnings != nullptr) {
    if (auto deg = profile.polynomial_degree()) {
      if (2 * rule.order - 1 < order - 1 + *deg) {
        warn(warnings, "quadrature order " + std::to_string(rule.order) +
                           " is not exact for moments of order " +
                           std::to_string(order) + " of a degree " +
                           std::to_string(*deg) + " profile");
      }
    } else {
      const Eigen::VectorXd fine =
          integrate_moments(profile, order, gauss_legendre(2 * rule.order));
      const double delta = (fine - m).lpNorm<Eigen::Infinity>();
      if (delta > 1e-9) {
        warn(warnings, "moment quadrature refinement changed the result by " +
                           std::to_string(delta));
      }
    }
  }
  return MomentVector(profile.dim(), order, std::move(m));
}

Eigen::VectorXd synthesize(const MomentVector& m, double beta) {
  const Eigen::VectorXd p = legendre_values(m.order(), beta);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m.dim());
  for (int k = 0; k < m.order(); ++k) x += p(k) * m.block(k);
  return x;
}

}  // namespace legmom

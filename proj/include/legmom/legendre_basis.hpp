#pragma once

#include <Eigen/Dense>
#include <vector>

#include "legmom/errors.hpp"

namespace legmom {

class Profile;

// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, summing to 2
  int order = 0;
};

// Nodes and weights of the `order`-point Gauss-Legendre rule (Newton on the
// roots of the classical Legendre polynomial).
QuadratureRule gauss_legendre(int order);

constexpr int kDefaultQuadratureOrder = 64;

// Shared default rule (order 64), built once.
const QuadratureRule& default_rule();

// Normalized Legendre polynomial P_k(beta), by forward three-term recurrence.
double eval_normalized_legendre(int k, double beta);

// P_0(beta), ..., P_{count-1}(beta).
Eigen::VectorXd legendre_values(int count, double beta);

// c_k = (k+1) / sqrt((2k+1)(2k+3)), so that
// beta P_k = c_k P_{k+1} + c_{k-1} P_{k-1}.
double recurrence_coeff(int k);

// G_s = Gamma(s+1/2) / (Gamma(s+1) Gamma(1/2)), with G_s = 0 for s < 0.
double gauss_factor(int s);

// Coefficient d_{k,i,r} in P_k P_i = sum_r d_{k,i,r} P_{k+i-2r}.
// Zero whenever r is outside [0, min(k, i)].
double product_coeff(int k, int i, int r);

// Stacked Legendre moments: block k (length n) is the k-th moment m_k.
class MomentVector {
 public:
  MomentVector() = default;
  MomentVector(int n, int order, Eigen::VectorXd entries);
  static MomentVector zero(int n, int order);

  int dim() const { return n_; }
  int order() const { return order_; }
  const Eigen::VectorXd& entries() const { return entries_; }
  Eigen::VectorXd block(int k) const { return entries_.segment(k * n_, n_); }

  // Leading `order` blocks (projection P_N).
  MomentVector truncated(int order) const;
  // Zero-padded to `order` blocks (embedding).
  MomentVector padded(int order) const;

 private:
  int n_ = 0;
  int order_ = 0;
  Eigen::VectorXd entries_;
};

// m_k = integral of P_k(beta) profile(beta) over [-1, 1], k < order, computed
// segment-wise with `rule`. Emits a warning when the rule is too coarse for
// exactness (polynomial profiles) or when doubling the rule order changes the
// result by more than 1e-9 (analytic profiles).
MomentVector analyze(const Profile& profile, int order,
                     const QuadratureRule& rule = default_rule(),
                     Warnings* warnings = nullptr);

// Truncated Fourier-Legendre series sum_k m_k P_k(beta).
Eigen::VectorXd synthesize(const MomentVector& m, double beta);

}  // namespace legmom

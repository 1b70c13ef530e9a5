#pragma once

#include <Eigen/Dense>
#include <vector>

#include "legmom/banded_operator.hpp"
#include "legmom/control_signal.hpp"
#include "legmom/errors.hpp"
#include "legmom/legendre_basis.hpp"

namespace legmom {

// x' = A(beta) x + B(beta) u with A(beta) = sum_i P_i(beta) A_i and
// B(beta) = sum_j P_j(beta) B_j in the normalized Legendre basis.
class PolynomialEnsemble {
 public:
  PolynomialEnsemble(std::vector<Eigen::MatrixXd> a_coeffs,
                     std::vector<Eigen::MatrixXd> b_coeffs);
  // Coefficients of beta^0, beta^1, ...; converted by exact quadrature
  // projection and checked by re-expansion.
  static PolynomialEnsemble from_monomial(std::vector<Eigen::MatrixXd> a_mono,
                                          std::vector<Eigen::MatrixXd> b_mono);
  // A(beta) = beta A, B(beta) = B.
  static PolynomialEnsemble prototype(const Eigen::MatrixXd& a,
                                      const Eigen::MatrixXd& b);

  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  int a_degree() const { return static_cast<int>(a_.size()) - 1; }
  int b_degree() const { return static_cast<int>(b_.size()) - 1; }
  const std::vector<Eigen::MatrixXd>& a_coeffs() const { return a_; }
  const std::vector<Eigen::MatrixXd>& b_coeffs() const { return b_; }

  Eigen::MatrixXd a_at(double beta) const;
  Eigen::MatrixXd b_at(double beta) const;

  // True for A(beta) = beta A with constant B.
  bool is_prototype() const;

  // Block (k, l) of the infinite moment operator:
  // sum over i of d_{k,i,(k+i-l)/2} A_i.
  BlockGenerator a_generator() const;

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<Eigen::MatrixXd> a_;
  std::vector<Eigen::MatrixXd> b_;
};

// The infinite moment pair (A_hat, B_hat): a banded generator and the
// finitely many nonzero input blocks.
struct MomentOperator {
  BlockGenerator a;
  std::vector<Eigen::MatrixXd> b_blocks;
  int inputs = 1;
};

MomentOperator moment_operator(const PolynomialEnsemble& ens);

// Truncated moment system of order N: dimension n N.
struct MomentSystem {
  BandedMatrix a_hat;
  Eigen::MatrixXd b_hat;
  int order = 0;
  int n = 1;
  int m = 1;

  int dim() const { return a_hat.dim(); }
};

MomentSystem truncate(const MomentOperator& op, int order);
MomentSystem build_moment_system(const PolynomialEnsemble& ens, int order);
// A_hat_N = C_N (x) A with C_N = tridiag(c_0, ..., c_{N-2}),
// B_hat_N = sqrt(2) (B; 0; ...).
MomentSystem prototype_system(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b, int order);

struct SimulationOptions {
  int steps = 2000;
  // Repeat with twice the steps and warn if the endpoint moves by more than
  // `self_check_tolerance`.
  bool self_check = true;
  double self_check_tolerance = 1e-8;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<MomentVector> states;
  const MomentVector& endpoint() const { return states.back(); }
};

// RK4 integration of m' = A_hat_N m + B_hat_N u(t) on [0, T].
Trajectory simulate_truncated(const MomentSystem& sys, const MomentVector& m0,
                              const ControlSignal& u, double horizon,
                              const SimulationOptions& options = {},
                              Warnings* warnings = nullptr);

// One-step maps of the sampled system: x_{s+1} = Phi x_s + G0 u_s + G1 u_{s+1}
// (G1 = 0 for a zero-order hold), exact for the interpolated control.
struct SampledMaps {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd gamma0;
  Eigen::MatrixXd gamma1;
};
SampledMaps sampled_maps(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                         double h, Interpolation interpolation);

// Variation-of-constants endpoint at the control horizon, evaluated exactly
// for the interpolated control with matrix exponentials.
Eigen::VectorXd propagate_exact(const MomentSystem& sys,
                                const Eigen::VectorXd& m0,
                                const ControlSignal& u);

// Linear map from stacked control samples (u_0; ...; u_S) to the endpoint:
// m(T) = transition m(0) + input_map u.
struct EndpointMap {
  Eigen::MatrixXd transition;
  Eigen::MatrixXd input_map;
};
EndpointMap endpoint_map(const MomentSystem& sys, double horizon,
                         int intervals, Interpolation interpolation);

}  // namespace legmom

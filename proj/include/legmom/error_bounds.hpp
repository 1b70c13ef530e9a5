#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "legmom/banded_operator.hpp"
#include "legmom/control_signal.hpp"
#include "legmom/legendre_basis.hpp"
#include "legmom/moment_dynamics.hpp"

namespace legmom {

// L_N(xi) = sum_{k<N} |xi_k| rho^{N-k}.
double l_tail(const Eigen::VectorXd& xi, double rho);

// Envelope W(t, xi) >= |(e^{tA} - e^{tA_N (+) A_22}) xi| for xi supported on
// the first N coordinates:
// W^2 = |Q(t)|xi||^2 + (e^{lambda0 t} K(t))^2 L_N(xi)^2 / (1 - rho^2).
class WEnvelope {
 public:
  WEnvelope(int dim, const DecayParams& p,
            QExponent exponent = QExponent::General);
  double operator()(double t, const Eigen::VectorXd& xi) const;

 private:
  DecayParams p_;
  double rho_;
  Eigen::MatrixXd q_pattern_;  // Q(t) / Kbar(t)
};

double w_envelope(double t, const Eigen::VectorXd& xi, const DecayParams& p,
                  QExponent exponent = QExponent::General);

// Terms of the truncation error bound E_N.
struct BoundTerms {
  double initial = 0.0;         // W(T, m_bar(0))
  double initial_tail = 0.0;    // e^{T M (b+1)} |m_bar(0) - m(0)|
  double control = 0.0;         // int_0^T W(T - tau, B_hat u(tau)) dtau
  double target_tail = 0.0;     // |m_bar_F - m_F|
  double design_residual = 0.0; // |m_bar(T) - m_bar_F| of the truncated design

  // Four-term bound, valid when the design reaches m_bar_F exactly.
  double total() const { return initial + initial_tail + control + target_tail; }
  // Bound on |m(T) - m_F| that also covers an inexact design.
  double certified() const { return total() + design_residual; }
};

// m0_full and mF_full are the moments at a reference order above N. When
// `endpoint` is null the truncated endpoint is propagated exactly.
BoundTerms total_bound(const ControlSignal& u, const MomentSystem& sys,
                       const MomentVector& m0_full, const MomentVector& mF_full,
                       const DecayParams& p,
                       QExponent exponent = QExponent::General,
                       const Eigen::VectorXd* endpoint = nullptr);

struct RhoOptimum {
  double chi = 0.0;
  double rho = 0.0;
  double value = 0.0;
};

// Minimizes objective(chi) over [chi_lo, chi_hi]: coarse logarithmic scan,
// then golden-section refinement to relative tolerance `rel_tol` in chi.
RhoOptimum optimize_rho(const std::function<double(double)>& objective,
                        double chi_lo, double chi_hi, int b,
                        double rel_tol = 1e-6);

// How the spectral-radius bound Delta is chosen.
enum class DeltaRule {
  NormBound,  // M (b + 1)
  Shift,      // sum of per-diagonal maxima
  Given,
};

struct DecaySetup {
  int reference_order = 60;
  DeltaRule delta_rule = DeltaRule::NormBound;
  double delta = 0.0;  // used with DeltaRule::Given
  double lambda0 = 0.0;
};

// Decay parameters of the operator truncated at `order`, with entry maxima and
// Delta taken from the reference truncation.
DecayParams decay_params(const MomentOperator& op, int order, double chi,
                         const DecaySetup& setup = {});

}  // namespace legmom

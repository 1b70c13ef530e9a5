#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "legmom/errors.hpp"

namespace legmom {

constexpr double kHermitianTolerance = 1e-12;

// Finite square matrix whose entries vanish for |i - j| > bandwidth / 2.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  // Throws if an entry outside the declared band is nonzero or non-finite.
  BandedMatrix(Eigen::MatrixXd entries, int bandwidth);
  // Declares the smallest even bandwidth that contains every nonzero entry.
  static BandedMatrix from_dense(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  int bandwidth() const { return bandwidth_; }
  bool hermitian() const { return hermitian_; }
  const Eigen::MatrixXd& dense() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }
  double max_abs_entry() const;

 private:
  Eigen::MatrixXd entries_;
  int bandwidth_ = 0;
  bool hermitian_ = true;
};

// Infinite block-banded operator described entry-block by entry-block.
struct BlockGenerator {
  int block_size = 1;
  int block_bandwidth = 0;           // blocks vanish for |k - l| > this
  std::optional<int> capacity;       // largest materializable order, if finite
  std::function<Eigen::MatrixXd(int k, int l)> block;

  // Scalar bandwidth b of the materialized matrix.
  int scalar_bandwidth() const;
};

// Leading principal submatrix with `order` rows (for a BandedMatrix) or
// `order` block rows (for a generator).
BandedMatrix truncate(const BandedMatrix& src, int order);
BandedMatrix truncate(const BlockGenerator& src, int order);

// Bound m_max (b + 1) on the l2 norm of any b-banded matrix with
// entries bounded by m_max.
double norm_bound(double m_max, int b);

// Sum over diagonals of the largest entry on that diagonal: a sharper
// operator-norm bound that treats the matrix as a combination of shifts.
double shift_norm_bound(const BandedMatrix& m);

// Matrix exponential e^{tM} (Pade scaling and squaring).
Eigen::MatrixXd expm(const Eigen::MatrixXd& m, double t = 1.0);
Eigen::MatrixXd expm(const BandedMatrix& m, double t = 1.0);

// Parameters of the entrywise decay bounds for exponentials of symmetric
// banded operators with spectrum in [lambda0 - delta, lambda0 + delta].
struct DecayParams {
  double chi = 2.0;
  int b = 2;
  double delta = 0.0;
  double lambda0 = 0.0;
  double m_max = 0.0;
  double m12_max = 0.0;
  bool hermitian = true;

  double rho() const;
  // Throws unless chi > 1, b is even and positive, delta >= 0.
  void validate() const;
  static double chi_from_rho(double rho, int b);
};

// K(t) = 2 chi / (chi - 1) exp(t delta (chi + 1/chi) / 2).
double k_factor(double t, const DecayParams& p);

// Kbar(t) = b (b + 2) t m12_max (chi / (chi - 1))^2 e^{lambda0 t}
//           exp(t delta (chi + 1/chi) / 2).
double k_bar(double t, const DecayParams& p);

// e^{lambda0 t} K(t) rho^{|i-j|}; i, j are 1-based.
double entry_decay_bound(int i, int j, double t, const DecayParams& p);

// Exponent used for the truncation-error matrix Q.
enum class QExponent {
  General,      // |N-i| + |N-j| - b/2
  Tridiagonal,  // 2N - i - j + 1, valid for b = 2 only
};

// Power of rho in entry (i, j) of the truncation-error matrix Q.
double truncation_exponent(int i, int j, int order, int b, QExponent exponent);

// Bound on |[e^{tA} - e^{tA_N (+) A_22}]_{ij}| for 1-based i, j <= N.
double truncation_exp_bound(int i, int j, double t, int order,
                            const DecayParams& p,
                            QExponent exponent = QExponent::General);

}  // namespace legmom

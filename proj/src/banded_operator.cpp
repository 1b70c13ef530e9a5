#include "legmom/banded_operator.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace legmom {

BandedMatrix::BandedMatrix(Eigen::MatrixXd entries, int bandwidth)
    : entries_(std::move(entries)), bandwidth_(bandwidth) {
  if (entries_.rows() != entries_.cols()) {
    throw InvalidArgument("banded matrix must be square");
  }
  if (bandwidth < 0 || bandwidth % 2 != 0) {
    throw InvalidArgument("bandwidth must be a nonnegative even integer");
  }
  if (!entries_.allFinite()) throw NumericalError("non-finite matrix entry");
  const int n = dim();
  const int half = bandwidth / 2;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(i - j) > half && entries_(i, j) != 0.0) {
        throw InvalidArgument("entry (" + std::to_string(i) + ", " +
                              std::to_string(j) +
                              ") lies outside the declared bandwidth " +
                              std::to_string(bandwidth));
      }
    }
  }
  hermitian_ = n == 0 || (entries_ - entries_.transpose())
                                 .cwiseAbs()
                                 .maxCoeff() < kHermitianTolerance;
}

BandedMatrix BandedMatrix::from_dense(Eigen::MatrixXd entries) {
  int half = 0;
  for (int j = 0; j < entries.cols(); ++j) {
    for (int i = 0; i < entries.rows(); ++i) {
      if (entries(i, j) != 0.0) half = std::max(half, std::abs(i - j));
    }
  }
  return BandedMatrix(std::move(entries), 2 * half);
}

double BandedMatrix::max_abs_entry() const {
  return dim() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

int BlockGenerator::scalar_bandwidth() const {
  if (block_size == 1) return 2 * block_bandwidth;
  return 2 * (block_size * block_bandwidth + block_size - 1);
}

BandedMatrix truncate(const BandedMatrix& src, int order) {
  if (order < 1) throw InvalidArgument("truncation order must be positive");
  if (order > src.dim()) {
    throw InvalidArgument("truncation order " + std::to_string(order) +
                          " exceeds matrix dimension " +
                          std::to_string(src.dim()));
  }
  return BandedMatrix(src.dense().topLeftCorner(order, order),
                      src.bandwidth());
}

BandedMatrix truncate(const BlockGenerator& src, int order) {
  if (order < 1) throw InvalidArgument("truncation order must be positive");
  if (src.capacity && order > *src.capacity) {
    throw InvalidArgument("truncation order " + std::to_string(order) +
                          " exceeds generator capacity " +
                          std::to_string(*src.capacity));
  }
  const int n = src.block_size;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n * order, n * order);
  for (int k = 0; k < order; ++k) {
    const int lo = std::max(0, k - src.block_bandwidth);
    const int hi = std::min(order - 1, k + src.block_bandwidth);
    for (int l = lo; l <= hi; ++l) {
      m.block(k * n, l * n, n, n) = src.block(k, l);
    }
  }
  return BandedMatrix(std::move(m), src.scalar_bandwidth());
}

double norm_bound(double m_max, int b) {
  if (m_max < 0.0) throw InvalidArgument("entry bound must be nonnegative");
  return m_max * (b + 1);
}

double shift_norm_bound(const BandedMatrix& m) {
  const int n = m.dim();
  const int half = m.bandwidth() / 2;
  double total = 0.0;
  for (int d = -half; d <= half; ++d) {
    double diag_max = 0.0;
    for (int i = std::max(0, -d); i < n && i + d < n; ++i) {
      diag_max = std::max(diag_max, std::abs(m(i, i + d)));
    }
    total += diag_max;
  }
  return total;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& m, double t) {
  if (!m.allFinite() || !std::isfinite(t)) {
    throw NumericalError("matrix exponential of non-finite input");
  }
  Eigen::MatrixXd scaled = t * m;
  Eigen::MatrixXd e = scaled.exp();
  if (!e.allFinite()) throw NumericalError("matrix exponential overflowed");
  return e;
}

Eigen::MatrixXd expm(const BandedMatrix& m, double t) {
  return expm(m.dense(), t);
}

double DecayParams::rho() const {
  validate();
  return std::pow(chi, -2.0 / b);
}

void DecayParams::validate() const {
  if (!(chi > 1.0) || !std::isfinite(chi)) {
    throw InvalidArgument("decay parameter chi must exceed 1");
  }
  if (b < 2 || b % 2 != 0) {
    throw InvalidArgument("decay bandwidth must be a positive even integer");
  }
  if (!(delta >= 0.0)) throw InvalidArgument("spectral radius bound must be >= 0");
}

double DecayParams::chi_from_rho(double rho, int b) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0, 1)");
  return std::pow(rho, -b / 2.0);
}

double k_factor(double t, const DecayParams& p) {
  p.validate();
  return 2.0 * p.chi / (p.chi - 1.0) *
         std::exp(t * p.delta * (p.chi + 1.0 / p.chi) / 2.0);
}

double k_bar(double t, const DecayParams& p) {
  p.validate();
  const double r = p.chi / (p.chi - 1.0);
  return p.b * (p.b + 2.0) * t * p.m12_max * r * r * std::exp(p.lambda0 * t) *
         std::exp(t * p.delta * (p.chi + 1.0 / p.chi) / 2.0);
}

double entry_decay_bound(int i, int j, double t, const DecayParams& p) {
  if (i < 1 || j < 1) throw InvalidArgument("indices are 1-based");
  return std::exp(p.lambda0 * t) * k_factor(t, p) *
         std::pow(p.rho(), std::abs(i - j));
}

double truncation_exponent(int i, int j, int order, int b,
                           QExponent exponent) {
  if (i < 1 || j < 1 || i > order || j > order) {
    throw InvalidArgument("indices must lie in [1, N]");
  }
  if (exponent == QExponent::Tridiagonal) {
    if (b != 2) {
      throw InvalidArgument("the refined exponent requires bandwidth 2");
    }
    return 2.0 * order - i - j + 1.0;
  }
  return std::abs(order - i) + std::abs(order - j) - b / 2.0;
}

double truncation_exp_bound(int i, int j, double t, int order,
                            const DecayParams& p, QExponent exponent) {
  const double e = truncation_exponent(i, j, order, p.b, exponent);
  return k_bar(t, p) * std::pow(p.rho(), e);
}

}  // namespace legmom

#include "legmom/controllability.hpp"

#include <Eigen/SVD>

namespace legmom {

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& a,
                                       const Eigen::MatrixXd& b) {
  const Eigen::Index d = a.rows();
  const Eigen::Index m = b.cols();
  Eigen::MatrixXd co(d, d * m);
  Eigen::MatrixXd col = b;
  for (Eigen::Index k = 0; k < d; ++k) {
    co.middleCols(k * m, m) = col;
    col = a * col;
  }
  return co;
}

Eigen::MatrixXd controllability_matrix(const MomentSystem& sys) {
  return controllability_matrix(sys.a_hat.dense(), sys.b_hat);
}

Eigen::MatrixXd krylov_columns(const MomentOperator& op, int count,
                               int reference_order) {
  if (count < 1) throw InvalidArgument("need at least one Krylov column");
  const MomentSystem ref = truncate(op, reference_order);
  const Eigen::Index m = ref.m;
  Eigen::MatrixXd out(ref.dim(), count * m);
  Eigen::MatrixXd col = ref.b_hat;
  for (int k = 0; k < count; ++k) {
    out.middleCols(k * m, m) = col;
    col = ref.a_hat.dense() * col;
  }
  return out;
}

RankResult rank_test(const Eigen::MatrixXd& co, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("rank tolerance must be positive");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(co);
  const Eigen::VectorXd& sv = svd.singularValues();
  RankResult r;
  r.max_singular_value = sv.size() > 0 ? sv(0) : 0.0;
  const Eigen::Index rows = co.rows();
  // Singular values beyond min(rows, cols) are zero.
  r.min_singular_value = sv.size() >= rows ? sv(rows - 1) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * r.max_singular_value) ++r.rank;
  }
  r.controllable = r.rank == rows;
  return r;
}

double witness_check(const Eigen::VectorXd& w, const Eigen::MatrixXd& co) {
  const double norm = w.norm();
  if (!(norm > 0.0)) throw InvalidArgument("witness vector must be nonzero");
  if (w.size() != co.rows()) {
    throw InvalidArgument("witness length does not match the column length");
  }
  return (co.transpose() * w).cwiseAbs().maxCoeff() / norm;
}

std::optional<Eigen::VectorXd> left_null_witness(const Eigen::MatrixXd& co,
                                                 double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(co, Eigen::ComputeFullU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * smax) ++rank;
  }
  const Eigen::Index rows = co.rows();
  if (rank == rows) return std::nullopt;
  const Eigen::MatrixXd null = svd.matrixU().rightCols(rows - rank);
  // Coordinate direction with the largest component in the null space.
  const Eigen::VectorXd weight = null.rowwise().squaredNorm();
  const double top = weight.maxCoeff();
  Eigen::Index best = 0;
  while (weight(best) < top - 1e-12) ++best;
  Eigen::VectorXd w = null * null.row(best).transpose();
  w.normalize();
  if (w(best) < 0.0) w = -w;
  return w;
}

DensenessReport denseness_sweep(const MomentOperator& op,
                                const std::vector<int>& orders, double tol,
                                bool prototype_class) {
  if (orders.empty()) throw InvalidArgument("order list is empty");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 1 || (i > 0 && orders[i] <= orders[i - 1])) {
      throw InvalidArgument("orders must be positive and increasing");
    }
  }
  DensenessReport report;
  for (int order : orders) {
    const MomentSystem sys = truncate(op, order);
    const Eigen::MatrixXd co = controllability_matrix(sys);
    DensenessEntry e;
    e.order = order;
    e.dimension = sys.dim();
    e.rank = rank_test(co, tol);
    if (!e.rank.controllable && !report.first_failure) {
      report.all_controllable = false;
      report.first_failure = order;
      report.witness = left_null_witness(co, tol);
    }
    report.entries.push_back(e);
  }
  if (report.all_controllable) {
    report.verdict = "controllable at all tested orders";
  } else {
    report.verdict = "uncontrollable; witness direction emitted";
  }
  if (prototype_class) {
    report.infinite_system_verdict =
        report.all_controllable
            ? "no obstruction found: every truncation up to order " +
                  std::to_string(orders.back()) +
                  " is controllable, consistent with ensemble controllability"
            : "not ensemble controllable: the truncation of order " +
                  std::to_string(*report.first_failure) +
                  " is uncontrollable";
  }
  return report;
}

DensenessReport denseness_sweep(const PolynomialEnsemble& ens,
                                const std::vector<int>& orders, double tol) {
  return denseness_sweep(moment_operator(ens), orders, tol, ens.is_prototype());
}

}  // namespace legmom

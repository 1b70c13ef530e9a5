#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "legmom/moment_dynamics.hpp"

namespace legmom {

// [B, A B, ..., A^{D-1} B] for the D-dimensional truncated system.
Eigen::MatrixXd controllability_matrix(const MomentSystem& sys);
Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& a,
                                       const Eigen::MatrixXd& b);

// First `count` Krylov vectors A^k B of the infinite operator, evaluated on a
// truncation of order `reference_order`. Exact (free of truncation effects)
// while count * block bandwidth < reference_order.
Eigen::MatrixXd krylov_columns(const MomentOperator& op, int count,
                               int reference_order);

struct RankResult {
  int rank = 0;
  bool controllable = false;
  double min_singular_value = 0.0;
  double max_singular_value = 0.0;
};

constexpr double kDefaultRankTolerance = 1e-10;

// Numerical rank: singular values above tol * sigma_max. Controllable iff the
// rank equals the number of rows.
RankResult rank_test(const Eigen::MatrixXd& co,
                     double tol = kDefaultRankTolerance);

// max over columns of |<w, col>| / |w|.
double witness_check(const Eigen::VectorXd& w, const Eigen::MatrixXd& co);

// Unit vector in the left null space of `co`, preferring a coordinate
// direction when one lies (nearly) inside it. Empty if co has full row rank.
std::optional<Eigen::VectorXd> left_null_witness(
    const Eigen::MatrixXd& co, double tol = kDefaultRankTolerance);

struct DensenessEntry {
  int order = 0;
  int dimension = 0;
  RankResult rank;
};

struct DensenessReport {
  // Carried by every report.
  static constexpr const char* kCaveat =
      "finite-order evidence only: controllability of every tested truncation "
      "does not by itself establish approximate controllability of the "
      "infinite moment system; an infinite-system verdict is issued only for "
      "the class A(beta) = beta A with constant B";

  std::vector<DensenessEntry> entries;
  bool all_controllable = true;
  std::optional<int> first_failure;
  std::optional<Eigen::VectorXd> witness;  // at first_failure
  std::string verdict;
  // Set only for the prototype class.
  std::optional<std::string> infinite_system_verdict;
  std::string caveat = kCaveat;
};

DensenessReport denseness_sweep(const MomentOperator& op,
                                const std::vector<int>& orders,
                                double tol = kDefaultRankTolerance,
                                bool prototype_class = false);
DensenessReport denseness_sweep(const PolynomialEnsemble& ens,
                                const std::vector<int>& orders,
                                double tol = kDefaultRankTolerance);

}  // namespace legmom

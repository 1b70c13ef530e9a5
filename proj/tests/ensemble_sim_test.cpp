#include "legmom/ensemble_sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "legmom/control_synthesis.hpp"
#include "test_support.hpp"

namespace legmom {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

MatrixXd rotation() {
  MatrixXd a(2, 2);
  a << 0.0, -1.0, 1.0, 0.0;
  return a;
}

double max_state_gap(const EnsembleSnapshot& a, const EnsembleSnapshot& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    worst = std::max(worst, (a.states[i] - b.states[i]).cwiseAbs().maxCoeff());
  }
  return worst;
}

GTEST_TEST(SimulateEnsemble, ScalarFreeFlow) {
  const auto ens = PolynomialEnsemble::prototype(scalar(1.0), scalar(1.0));
  const Profile one({Expression::constant(1.0)});
  const auto grid = uniform_grid(101);
  const EnsembleSnapshot s =
      simulate_ensemble(ens, one, ControlSignal::zero(2.0, 1, 10), 2.0, grid);
  EXPECT_EQ(s.time, 2.0);
  ASSERT_EQ(s.states.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(s.states[i](0), std::exp(2.0 * grid[i]), 1e-10);
  }
}

GTEST_TEST(SimulateEnsemble, OscillatorRotates) {
  const auto ens = PolynomialEnsemble::prototype(rotation(), MatrixXd::Identity(2, 2));
  const Profile x0 = preset_profile("oscillator_init");
  const auto grid = uniform_grid(51);
  const double t = 1.7;
  const EnsembleSnapshot s =
      simulate_ensemble(ens, x0, ControlSignal::zero(t, 2, 10), t, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double th = grid[i] * t;
    MatrixXd r(2, 2);
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    EXPECT_LT((s.states[i] - r * x0(grid[i])).norm(), 1e-10);
  }
}

GTEST_TEST(SimulateEnsemble, MatchesSynthesizedMomentTrajectory) {
  const auto ens = PolynomialEnsemble::prototype(scalar(1.0), scalar(1.0));
  const Profile x0 = preset_profile("scalar_sin");
  const Profile xf = preset_profile("scalar_cos");
  const ControlSignal u =
      min_energy_control(build_moment_system(ens, 5), analyze(x0, 5), analyze(xf, 5), 1.0);
  const auto grid = uniform_grid(101);
  const EnsembleSnapshot s = simulate_ensemble(ens, x0, u, 1.0, grid);
  const int order = 40;
  const Trajectory tr =
      simulate_truncated(build_moment_system(ens, order), analyze(x0, order), u, 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(s.states[i](0), synthesize(tr.endpoint(), grid[i])(0), 1e-5);
  }
}

PolynomialEnsemble cubic_ensemble() {
  return PolynomialEnsemble::from_monomial({scalar(0.2), scalar(1.0), scalar(-0.5)},
                                           {scalar(1.0), scalar(0.3)});
}

GTEST_TEST(SimulateEnsemble, Linearity) {
  const auto ens = cubic_ensemble();
  const std::vector<double> cx{0.4, 1.0, 0.0, -2.0}, cy{1.0, -0.5, 0.25};
  const double alpha = -1.7;
  std::vector<double> cz(4, 0.0);
  for (int i = 0; i < 4; ++i) cz[i] = alpha * cx[i] + (i < 3 ? cy[i] : 0.0);
  const auto grid = uniform_grid(41);
  const auto zero = ControlSignal::zero(1.5, 1, 10);
  const auto sx = simulate_ensemble(ens, Profile({Expression::polynomial(cx)}), zero, 1.5, grid);
  const auto sy = simulate_ensemble(ens, Profile({Expression::polynomial(cy)}), zero, 1.5, grid);
  const auto sz = simulate_ensemble(ens, Profile({Expression::polynomial(cz)}), zero, 1.5, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(sz.states[i](0), alpha * sx.states[i](0) + sy.states[i](0), 1e-10);
  }
}

GTEST_TEST(SimulateEnsemble, Superposition) {
  const auto ens = cubic_ensemble();
  const Profile x0({Expression::sine(2.0, 0.1)});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const ControlSignal u(1.5, MatrixXd::NullaryExpr(31, 1, [&] { return d(rng); }));
  const auto grid = uniform_grid(41);
  const auto full = simulate_ensemble(ens, x0, u, 1.5, grid);
  const auto free = simulate_ensemble(ens, x0, ControlSignal::zero(1.5, 1, 30), 1.5, grid);
  const auto forced = simulate_ensemble(ens, Profile::zero(1), u, 1.5, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(full.states[i](0), free.states[i](0) + forced.states[i](0), 1e-9);
  }
}

GTEST_TEST(SimulateEnsemble, NonFiniteStateNamesParameter) {
  const auto ens = PolynomialEnsemble::prototype(scalar(1e6), scalar(1.0));
  const Profile one({Expression::constant(1.0)});
  EnsembleSimOptions opt;
  opt.steps = 20;
  opt.self_check = false;
  try {
    simulate_ensemble(ens, one, ControlSignal::zero(10.0, 1, 2), 10.0, {0.0, 1.0}, opt);
    FAIL() << "expected a numerical error";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
  }
}

GTEST_TEST(SimulateEnsemble, RejectsGridOutsideInterval) {
  const auto ens = PolynomialEnsemble::prototype(scalar(1.0), scalar(1.0));
  const Profile one({Expression::constant(1.0)});
  EXPECT_ANY_THROW(
      simulate_ensemble(ens, one, ControlSignal::zero(1.0, 1, 2), 1.0, {0.0, 1.5}));
}

GTEST_TEST(SimulateEnsemble, CommutingDiagramAtOrderForty) {
  const auto ens = PolynomialEnsemble::prototype(scalar(1.0), scalar(1.0));
  const Profile x0 = preset_profile("scalar_sin");
  const int order = 40;
  const ControlSignal u = min_energy_control(build_moment_system(ens, 6), analyze(x0, 6),
                                             analyze(preset_profile("scalar_cos"), 6), 1.0,
                                             {.condition_limit = kNoConditionLimit});
  const QuadratureRule rule = gauss_legendre(64);
  const auto snap = simulate_ensemble(ens, x0, u, 1.0, rule.nodes);
  const MomentVector via_ensemble = moments_from_snapshot(snap, rule, order);
  const Trajectory tr =
      simulate_truncated(build_moment_system(ens, order), analyze(x0, order), u, 1.0);
  EXPECT_LT((via_ensemble.entries() - tr.endpoint().entries()).norm(), 1e-5);
}

GTEST_TEST(L2Distance, Examples) {
  const Profile a = preset_profile("scalar_sin");
  EXPECT_EQ(l2_distance(a, a), 0.0);
  // Normalized P_3 has unit norm.
  const double s = std::sqrt(7.0 / 2.0);
  const Profile p3({Expression::polynomial({0.0, -1.5 * s, 0.0, 2.5 * s})});
  EXPECT_NEAR(l2_distance(p3, Profile::zero(1)), 1.0, 1e-14);
  EXPECT_NEAR(l2_norm(p3), 1.0, 1e-14);
  const double oracle = std::sqrt(testing::panel_integral([](double b) {
    const double d = std::sin(0.5 * std::numbers::pi * b) - std::cos(0.5 * std::numbers::pi * b);
    return d * d;
  }));
  EXPECT_NEAR(l2_distance(a, preset_profile("scalar_cos")), oracle, 1e-13);
  EXPECT_NEAR(oracle, std::numbers::sqrt2, 1e-13);
  EXPECT_THROW(l2_distance(a, preset_profile("circle")), InvalidArgument);
}

GTEST_TEST(L2Distance, SegmentedProfiles) {
  // |circle - square|^2 integrated piecewise matches a fine panel rule.
  const Profile c = preset_profile("circle"), q = preset_profile("square");
  const double oracle = std::sqrt(testing::panel_integral(
      [&](double b) { return (c(b) - q(b)).squaredNorm(); }, 800));
  EXPECT_NEAR(l2_distance(c, q), oracle, 1e-12);
  EXPECT_NEAR(l2_norm(q), std::sqrt(8.0 / 3.0), 1e-12);
}

GTEST_TEST(L2Distance, SnapshotEstimates) {
  const Profile a = preset_profile("scalar_sin");
  const Profile b = preset_profile("scalar_cos");
  const auto sa = sample_profile(a, uniform_grid());
  EXPECT_NEAR(l2_distance(sa, b), std::numbers::sqrt2, 1e-9);
  EXPECT_NEAR(l2_distance(sa, sample_profile(b, uniform_grid(301))), std::numbers::sqrt2, 1e-4);
  EXPECT_EQ(l2_distance(sa, sa), 0.0);
  // Non-uniform grid falls back to the trapezoid rule.
  std::vector<double> grid{-1.0, -0.3, 0.2, 0.9, 1.0};
  EXPECT_NEAR(l2_distance(sample_profile(a, grid), a), 0.0, 0.0);
}

GTEST_TEST(Presets, Examples) {
  EXPECT_LT((preset_profile("oscillator_init")(0.5) - Eigen::Vector2d(4.0, 3.0)).norm(), 1e-15);
  EXPECT_LT((preset_profile("oscillator_target")(0.5) - Eigen::Vector2d(0.5, 1.0)).norm(), 1e-15);
  EXPECT_LT((preset_profile("circle")(0.0) - Eigen::Vector2d(1.0, 0.0)).norm(), 1e-15);
  EXPECT_LT((preset_profile("square")(-0.75) - Eigen::Vector2d(0.0, -1.0)).norm(), 1e-15);
  EXPECT_LT((preset_profile("square")(-0.25) - Eigen::Vector2d(1.0, 0.0)).norm(), 1e-15);
  EXPECT_LT((preset_profile("square")(0.25) - Eigen::Vector2d(0.0, 1.0)).norm(), 1e-15);
  EXPECT_LT((preset_profile("square")(0.75) - Eigen::Vector2d(-1.0, 0.0)).norm(), 1e-15);
  EXPECT_NEAR(preset_profile("scalar_sin")(1.0)(0), 1.0, 1e-15);
  EXPECT_NEAR(preset_profile("scalar_cos")(0.0)(0), 1.0, 1e-15);
  EXPECT_THROW(preset_profile("triangle"), InvalidArgument);
}

}  // namespace
}  // namespace legmom

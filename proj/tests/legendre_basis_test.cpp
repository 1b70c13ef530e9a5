#include "legmom/legendre_basis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "legmom/profile.hpp"
#include "test_support.hpp"

namespace legmom {
namespace {

using testing::rodrigues;
using testing::rodrigues_coeffs;

GTEST_TEST(QuadratureRule, Invariants) {
  for (int order : {1, 2, 5, 32, 64, 100}) {
    const QuadratureRule r = gauss_legendre(order);
    ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(order));
    double sum = 0.0;
    for (int i = 0; i < order; ++i) {
      EXPECT_GT(r.weights[i], 0.0);
      EXPECT_LE(std::abs(r.nodes[i]), 1.0);
      if (i > 0) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
      sum += r.weights[i];
    }
    EXPECT_NEAR(sum, 2.0, 1e-12);
    // Exact for monomials up to degree 2 order - 1.
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
      double q = 0.0;
      for (int i = 0; i < order; ++i) q += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(q, exact, 1e-10) << "order " << order << " degree " << deg;
    }
  }
}

GTEST_TEST(NormalizedLegendre, Examples) {
  EXPECT_NEAR(eval_normalized_legendre(0, 0.3), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(eval_normalized_legendre(1, 1.0), std::sqrt(1.5), 1e-15);
  EXPECT_NEAR(eval_normalized_legendre(4, 0.5), rodrigues(4, 0.5), 1e-14);
  // (35/16 - 30/4 + 3) / 8 * sqrt(9/2)
  EXPECT_NEAR(eval_normalized_legendre(4, 0.5), -0.61319416181020915, 1e-14);
  EXPECT_THROW(eval_normalized_legendre(2, 1.0000001), DomainError);
  EXPECT_THROW(eval_normalized_legendre(2, -1.5), DomainError);
}

GTEST_TEST(NormalizedLegendre, MatchesRodriguesOracle) {
  for (int k = 0; k <= 20; ++k) {
    for (double x = -1.0; x <= 1.0; x += 0.05) {
      EXPECT_NEAR(eval_normalized_legendre(k, x), rodrigues(k, x), 1e-9)
          << "k " << k << " x " << x;
    }
  }
}

GTEST_TEST(RecurrenceCoeff, Examples) {
  EXPECT_NEAR(recurrence_coeff(0), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(recurrence_coeff(1), 2.0 / std::sqrt(15.0), 1e-15);
  EXPECT_NEAR(recurrence_coeff(4), 5.0 / std::sqrt(99.0), 1e-15);
  EXPECT_NEAR(recurrence_coeff(4), 0.5025189076, 1e-10);
}

GTEST_TEST(RecurrenceCoeff, BoundedAndMonotone) {
  double prev = recurrence_coeff(0);
  for (int k = 1; k < 2000; ++k) {
    const double c = recurrence_coeff(k);
    EXPECT_LT(c, prev);
    EXPECT_GT(c, 0.5);
    EXPECT_LT(c, 1.0 / std::sqrt(3.0) + 1e-15);
    prev = c;
  }
  EXPECT_NEAR(recurrence_coeff(100000), 0.5, 1e-6);
}

GTEST_TEST(GaussFactor, Examples) {
  EXPECT_EQ(gauss_factor(0), 1.0);
  EXPECT_NEAR(gauss_factor(1), 0.5, 1e-16);
  EXPECT_NEAR(gauss_factor(2), 0.375, 1e-16);
  EXPECT_EQ(gauss_factor(-1), 0.0);
  // Gamma(s + 1/2) / (Gamma(s + 1) Gamma(1/2)) via lgamma for moderate s.
  for (int s : {3, 10, 50, 150}) {
    const double ref = std::exp(std::lgamma(s + 0.5) - std::lgamma(s + 1.0) -
                                std::lgamma(0.5));
    EXPECT_NEAR(gauss_factor(s) / ref, 1.0, 1e-12);
  }
  // Finite and positive well past the point where Gamma overflows.
  EXPECT_GT(gauss_factor(400), 0.0);
  EXPECT_TRUE(std::isfinite(gauss_factor(400)));
}

double triple_oracle(int a, int b, int c) {
  const auto pa = testing::rodrigues_coeffs_ld(a);
  const auto pb = testing::rodrigues_coeffs_ld(b);
  const auto pc = testing::rodrigues_coeffs_ld(c);
  auto ev = [](const std::vector<long double>& p, double x) {
    long double acc = 0.0L;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  return testing::panel_integral(
      [&](double x) {
        return static_cast<double>(ev(pa, x) * ev(pb, x) * ev(pc, x));
      },
      200);
}

GTEST_TEST(ProductCoeff, Examples) {
  EXPECT_NEAR(product_coeff(7, 0, 0), 1.0 / std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(product_coeff(1, 1, 0), std::sqrt(0.4), 1e-14);
  EXPECT_NEAR(product_coeff(1, 1, 1), 1.0 / std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(product_coeff(1, 1, 0), triple_oracle(1, 1, 2), 1e-12);
  EXPECT_NEAR(product_coeff(1, 1, 1), triple_oracle(1, 1, 0), 1e-12);
  EXPECT_EQ(product_coeff(1, 3, 2), 0.0);
  EXPECT_EQ(product_coeff(4, 2, 3), 0.0);
  EXPECT_EQ(product_coeff(4, 2, -1), 0.0);
}

GTEST_TEST(ProductCoeff, MatchesTripleProductOracle) {
  for (int k = 0; k <= 8; ++k) {
    for (int i = 0; i <= 8; ++i) {
      for (int r = 0; r <= std::min(k, i); ++r) {
        EXPECT_NEAR(product_coeff(k, i, r), triple_oracle(k, i, k + i - 2 * r),
                    1e-10)
            << k << " " << i << " " << r;
      }
    }
  }
}

GTEST_TEST(ProductCoeff, ProductIdentity) {
  double worst = 0.0;
  for (int k = 0; k <= 8; ++k) {
    for (int i = 0; i <= 8; ++i) {
      for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.01) {
        const double xb = std::min(x, 1.0);
        double sum = 0.0;
        for (int r = 0; r <= std::min(k, i); ++r) {
          sum += product_coeff(k, i, r) *
                 eval_normalized_legendre(k + i - 2 * r, xb);
        }
        worst = std::max(worst, std::abs(eval_normalized_legendre(k, xb) *
                                             eval_normalized_legendre(i, xb) -
                                         sum));
      }
    }
  }
  EXPECT_LT(worst, 1e-10);
}

GTEST_TEST(ProductCoeff, UniformlyBounded) {
  const int n1 = 6;
  for (int k = 0; k <= 200; ++k) {
    for (int i = 0; i <= n1; ++i) {
      for (int r = 0; r <= i; ++r) {
        EXPECT_LE(product_coeff(k, i, r), std::sqrt(n1 + 1.0) + 1e-9);
      }
    }
  }
}

GTEST_TEST(Basis, Orthonormality) {
  const QuadratureRule rule = gauss_legendre(32);
  for (int i = 0; i <= 30; ++i) {
    for (int j = 0; j <= 30; ++j) {
      double q = 0.0;
      for (int s = 0; s < rule.order; ++s) {
        const Eigen::VectorXd p = legendre_values(31, rule.nodes[s]);
        q += rule.weights[s] * p(i) * p(j);
      }
      EXPECT_NEAR(q, i == j ? 1.0 : 0.0, 1e-10);
    }
  }
}

GTEST_TEST(Basis, RecurrenceResidual) {
  double worst = 0.0;
  for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.001) {
    const double xb = std::min(x, 1.0);
    const Eigen::VectorXd p = legendre_values(32, xb);
    for (int k = 0; k <= 30; ++k) {
      const double lower = k > 0 ? recurrence_coeff(k - 1) * p(k - 1) : 0.0;
      worst = std::max(worst,
                       std::abs(recurrence_coeff(k) * p(k + 1) - xb * p(k) + lower));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

Profile legendre_profile(int k) {
  return Profile({Expression::polynomial(rodrigues_coeffs(k))});
}

GTEST_TEST(Analyze, Examples) {
  const MomentVector m3 = analyze(legendre_profile(3), 6);
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(6);
  e3(3) = 1.0;
  EXPECT_LT((m3.entries() - e3).norm(), 1e-13);

  const MomentVector one = analyze(Profile({Expression::constant(1.0)}), 4);
  EXPECT_NEAR(one.entries()(0), std::numbers::sqrt2, 1e-14);
  EXPECT_LT(one.entries().tail(3).norm(), 1e-14);

  const MomentVector lin = analyze(Profile({Expression::polynomial({0.0, 1.0})}), 4);
  EXPECT_NEAR(lin.entries()(1), std::sqrt(2.0 / 3.0), 1e-14);
  EXPECT_LT(std::abs(lin.entries()(0)) + std::abs(lin.entries()(2)) +
                std::abs(lin.entries()(3)),
            1e-14);
}

GTEST_TEST(Analyze, PiecewiseProfileAndVectorBlocks) {
  const Profile sq = preset_profile("square");
  const MomentVector m = analyze(sq, 10);
  ASSERT_EQ(m.dim(), 2);
  ASSERT_EQ(m.entries().size(), 20);
  for (int k = 0; k < 10; ++k) {
    for (int d = 0; d < 2; ++d) {
      const double oracle = testing::panel_integral(
          [&](double x) { return rodrigues(k, x) * sq(x)(d); }, 400);
      EXPECT_NEAR(m.block(k)(d), oracle, 1e-12);
    }
  }
}

GTEST_TEST(Analyze, WarningChannel) {
  Warnings w;
  analyze(Profile({Expression::polynomial(rodrigues_coeffs(12))}), 20,
          gauss_legendre(4), &w);
  EXPECT_FALSE(w.empty());
  w.clear();
  analyze(preset_profile("scalar_sin"), 20, default_rule(), &w);
  EXPECT_TRUE(w.empty());
  analyze(Profile({Expression::sine(40.0)}), 20, gauss_legendre(8), &w);
  EXPECT_FALSE(w.empty());
}

GTEST_TEST(Analyze, Parseval) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> c(9);
    for (double& x : c) x = u(rng);
    const Profile f({Expression::polynomial(c)});
    const double l2 = std::sqrt(testing::panel_integral(
        [&](double x) { return std::pow(testing::poly_eval(c, x), 2); }));
    EXPECT_NEAR(analyze(f, 12).entries().norm(), l2, 1e-10);
  }
}

GTEST_TEST(Synthesize, Examples) {
  MomentVector m(1, 3, Eigen::Vector3d(std::numbers::sqrt2, 0.0, 0.0));
  EXPECT_NEAR(synthesize(m, 0.9)(0), 1.0, 1e-15);
  MomentVector e1(1, 3, Eigen::Vector3d(0.0, 1.0, 0.0));
  EXPECT_NEAR(synthesize(e1, 1.0)(0), std::sqrt(1.5), 1e-15);
  EXPECT_THROW(synthesize(e1, 1.2), DomainError);
}

GTEST_TEST(Synthesize, RoundTrip) {
  const MomentVector m = analyze(preset_profile("scalar_sin"), 20);
  double acc = 0.0;
  std::vector<double> f(201);
  for (int i = 0; i <= 200; ++i) {
    const double x = -1.0 + i * 0.01;
    f[i] = std::pow(synthesize(m, x)(0) - std::sin(0.5 * std::numbers::pi * x), 2);
  }
  for (int i = 0; i < 200; i += 2) acc += 0.01 / 3.0 * (f[i] + 4 * f[i + 1] + f[i + 2]);
  EXPECT_LT(std::sqrt(acc), 1e-10);

  // analyze o synthesize is the identity on polynomials of degree < N.
  const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(8, -1.0, 2.0);
  const MomentVector given(1, 8, c);
  std::vector<double> mono(8, 0.0);
  for (int k = 0; k < 8; ++k) {
    const auto rk = rodrigues_coeffs(k);
    for (std::size_t j = 0; j < rk.size(); ++j) mono[j] += c(k) * rk[j];
  }
  EXPECT_LT((analyze(Profile({Expression::polynomial(mono)}), 8).entries() - c)
                .norm(),
            1e-12);
}

GTEST_TEST(MomentVector, ShapeChecks) {
  EXPECT_THROW(MomentVector(2, 3, Eigen::VectorXd::Zero(5)), InvalidArgument);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(2);
  bad(1) = std::nan("");
  EXPECT_THROW(MomentVector(1, 2, bad), NumericalError);
  const MomentVector m(2, 2, Eigen::Vector4d(1, 2, 3, 4));
  EXPECT_EQ(m.truncated(1).entries().size(), 2);
  EXPECT_EQ(m.padded(4).entries().size(), 8);
  EXPECT_EQ(m.padded(4).entries()(3), 4.0);
  EXPECT_EQ(m.block(1)(0), 3.0);
}

}  // namespace
}  // namespace legmom

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string_view>
#include <vector>

namespace legmom {

// One scalar coordinate of a profile on a segment: a monomial polynomial
// c0 + c1 beta + ..., sin(a beta + b) or cos(a beta + b).
struct Expression {
  enum class Kind { Polynomial, Sin, Cos };

  Kind kind = Kind::Polynomial;
  std::vector<double> coeffs;
  double a = 0.0;
  double b = 0.0;

  static Expression polynomial(std::vector<double> coeffs);
  static Expression constant(double value) { return polynomial({value}); }
  static Expression sine(double a, double b = 0.0);
  static Expression cosine(double a, double b = 0.0);

  double operator()(double beta) const;
  // Polynomial degree, or nullopt for the trigonometric kinds.
  std::optional<int> degree() const;
};

struct ProfileSegment {
  double lo = -1.0;
  double hi = 1.0;
  std::vector<Expression> components;  // one per state dimension
};

// Piecewise map beta -> R^n on [-1, 1].
class Profile {
 public:
  Profile(int n, std::vector<ProfileSegment> segments);
  // Single segment covering [-1, 1].
  explicit Profile(std::vector<Expression> components);
  static Profile zero(int n);

  int dim() const { return n_; }
  const std::vector<ProfileSegment>& segments() const { return segments_; }

  Eigen::VectorXd operator()(double beta) const;
  // Largest polynomial degree over all pieces, or nullopt if any piece is
  // trigonometric.
  std::optional<int> polynomial_degree() const;

 private:
  int n_;
  std::vector<ProfileSegment> segments_;
};

// Named profiles: oscillator_init, oscillator_target, circle, square,
// scalar_sin, scalar_cos.
Profile preset_profile(std::string_view name);

}  // namespace legmom

#include "legmom/profile.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "legmom/errors.hpp"

namespace legmom {

Expression Expression::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  Expression e;
  e.kind = Kind::Polynomial;
  e.coeffs = std::move(coeffs);
  return e;
}

Expression Expression::sine(double a, double b) {
  Expression e;
  e.kind = Kind::Sin;
  e.a = a;
  e.b = b;
  return e;
}

Expression Expression::cosine(double a, double b) {
  Expression e;
  e.kind = Kind::Cos;
  e.a = a;
  e.b = b;
  return e;
}

double Expression::operator()(double beta) const {
  switch (kind) {
    case Kind::Polynomial: {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * beta + *it;
      }
      return acc;
    }
    case Kind::Sin:
      return std::sin(a * beta + b);
    case Kind::Cos:
      return std::cos(a * beta + b);
  }
  return 0.0;
}

std::optional<int> Expression::degree() const {
  if (kind != Kind::Polynomial) return std::nullopt;
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d > 0 && coeffs[d] == 0.0) --d;
  return d;
}

Profile::Profile(int n, std::vector<ProfileSegment> segments)
    : n_(n), segments_(std::move(segments)) {
  if (n_ < 1) throw InvalidArgument("profile dimension must be positive");
  if (segments_.empty()) throw InvalidArgument("profile has no segments");
  constexpr double tol = 1e-14;
  if (std::abs(segments_.front().lo + 1.0) > tol ||
      std::abs(segments_.back().hi - 1.0) > tol) {
    throw InvalidArgument("profile segments must cover [-1, 1]");
  }
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const auto& seg = segments_[s];
    if (!(seg.lo < seg.hi)) throw InvalidArgument("empty profile segment");
    if (s > 0 && std::abs(seg.lo - segments_[s - 1].hi) > tol) {
      throw InvalidArgument("profile segments must be contiguous");
    }
    if (static_cast<int>(seg.components.size()) != n_) {
      throw InvalidArgument("profile segment has " +
                            std::to_string(seg.components.size()) +
                            " components, expected " + std::to_string(n_));
    }
  }
  segments_.front().lo = -1.0;
  segments_.back().hi = 1.0;
}

Profile::Profile(std::vector<Expression> components)
    : n_(static_cast<int>(components.size())) {
  *this = Profile(n_, {ProfileSegment{-1.0, 1.0, std::move(components)}});
}

Profile Profile::zero(int n) {
  return Profile(std::vector<Expression>(n, Expression::constant(0.0)));
}

Eigen::VectorXd Profile::operator()(double beta) const {
  if (!(std::abs(beta) <= 1.0)) {
    throw DomainError("profile evaluated outside [-1, 1]");
  }
  std::size_t s = 0;
  while (s + 1 < segments_.size() && beta >= segments_[s].hi) ++s;
  Eigen::VectorXd x(n_);
  for (int d = 0; d < n_; ++d) x(d) = segments_[s].components[d](beta);
  return x;
}

std::optional<int> Profile::polynomial_degree() const {
  int deg = 0;
  for (const auto& seg : segments_) {
    for (const auto& c : seg.components) {
      auto d = c.degree();
      if (!d) return std::nullopt;
      deg = std::max(deg, *d);
    }
  }
  return deg;
}

Profile preset_profile(std::string_view name) {
  using E = Expression;
  constexpr double pi = std::numbers::pi;
  if (name == "oscillator_init") {
    return Profile({E::polynomial({5.0, -2.0}), E::constant(3.0)});
  }
  if (name == "oscillator_target") {
    return Profile({E::polynomial({0.0, 1.0}), E::polynomial({0.0, 2.0})});
  }
  if (name == "circle") return Profile({E::cosine(pi), E::sine(pi)});
  if (name == "square") {
    return Profile(
        2, {{-1.0, -0.5, {E::polynomial({3.0, 4.0}), E::constant(-1.0)}},
            {-0.5, 0.0, {E::constant(1.0), E::polynomial({1.0, 4.0})}},
            {0.0, 0.5, {E::polynomial({1.0, -4.0}), E::constant(1.0)}},
            {0.5, 1.0, {E::constant(-1.0), E::polynomial({3.0, -4.0})}}});
  }
  if (name == "scalar_sin") return Profile({E::sine(0.5 * pi)});
  if (name == "scalar_cos") return Profile({E::cosine(0.5 * pi)});
  throw InvalidArgument("unknown profile preset: " + std::string(name));
}

}  // namespace legmom

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace legmom {

// Non-fatal diagnostics collected by long-running operations.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

// Evaluation point outside [-1, 1].
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Violated precondition on user-supplied data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values, failed factorizations and similar.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The controllability Gramian is singular or worse conditioned than allowed.
class GramianError : public NumericalError {
 public:
  GramianError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition_number() const { return condition_; }

 private:
  double condition_;
};

// A bound that needs a symmetric operator was handed a non-symmetric one.
class NonHermitianError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace legmom

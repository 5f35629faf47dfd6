#ifndef ARITHDYN_ERRORS_HPP
#define ARITHDYN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arithdyn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input itself is unusable: bad shapes, degenerate maps, zero vectors.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The input is fine but a configured resource cap or numerical contract was
/// hit before the requested guarantee could be delivered.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class AllZero : public InputError {
 public:
  AllZero() : InputError("AllZero: every coordinate is zero") {}
};

class MapsToZero : public InputError {
 public:
  MapsToZero() : InputError("MapsToZero: all forms vanish at the point (not a morphism there)") {}
};

class DimensionMismatch : public InputError {
 public:
  explicit DimensionMismatch(const std::string& what) : InputError("DimensionMismatch: " + what) {}
};

class Degenerate : public InputError {
 public:
  explicit Degenerate(const std::string& what) : InputError("Degenerate: " + what) {}
};

class DegreeTooSmall : public InputError {
 public:
  explicit DegreeTooSmall(unsigned degree)
      : InputError("DegreeTooSmall: degree " + std::to_string(degree) + " < 2") {}
};

class NonzeroRequired : public InputError {
 public:
  NonzeroRequired() : InputError("NonzeroRequired: the lifted vector is zero") {}
};

class UnsupportedDimension : public InputError {
 public:
  explicit UnsupportedDimension(std::size_t n)
      : InputError("UnsupportedDimension: only P^1 is supported, got P^" + std::to_string(n)) {}
};

class ConfigError : public InputError {
 public:
  explicit ConfigError(const std::string& what) : InputError("ConfigError: " + what) {}
};

class NotFound : public ContractViolation {
 public:
  explicit NotFound(unsigned exponent)
      : ContractViolation("NotFound: no certificate with exponent M = " + std::to_string(exponent)),
        exponent_(exponent) {}
  unsigned exponent() const noexcept { return exponent_; }

 private:
  unsigned exponent_;
};

class BudgetExceeded : public ContractViolation {
 public:
  BudgetExceeded(const std::string& what, std::size_t step)
      : ContractViolation("BudgetExceeded: " + what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class EnumerationTooLarge : public ContractViolation {
 public:
  explicit EnumerationTooLarge(const std::string& what) : ContractViolation("EnumerationTooLarge: " + what) {}
};

class DegenerateNearZero : public ContractViolation {
 public:
  explicit DegenerateNearZero(std::size_t step)
      : ContractViolation("DegenerateNearZero: lift image underflowed at step " + std::to_string(step)) {}
};

class RootFindingFailed : public ContractViolation {
 public:
  explicit RootFindingFailed(double residual)
      : ContractViolation("RootFindingFailed: residual " + std::to_string(residual) + " above tolerance") {}
};

}  // namespace arithdyn

#endif  // ARITHDYN_ERRORS_HPP

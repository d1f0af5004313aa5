#ifndef HILLQ_ERRORS_HPP
#define HILLQ_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "hillq/multi_index.hpp"

namespace hillq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonzeroAverage : public Error {
 public:
  using Error::Error;
};

class InsufficientSupport : public Error {
 public:
  using Error::Error;
};

/// A divisor |ω·ν| fell below the configured floor. Carries the offending
/// index and, when raised from the Lindstedt recursion, the order.
class ResonantMode : public Error {
 public:
  ResonantMode(MultiIndex nu, double divisor, std::optional<int> order = std::nullopt);

  const MultiIndex& nu() const { return nu_; }
  double divisor() const { return divisor_; }
  std::optional<int> order() const { return order_; }

 private:
  MultiIndex nu_;
  double divisor_;
  std::optional<int> order_;
};

/// m·ω₁ + nω₀ + 2Ω₀ vanishes (to the floor) for some index in the box.
class NonResonanceViolation : public ResonantMode {
 public:
  using ResonantMode::ResonantMode;
};

/// Exact or near-exact resonance found while estimating a Diophantine constant.
class ResonanceFound : public ResonantMode {
 public:
  using ResonantMode::ResonantMode;
};

class UnstableUnperturbed : public Error {
 public:
  explicit UnstableUnperturbed(double trace);
  double trace() const { return trace_; }

 private:
  double trace_;
};

class DegenerateEigenvector : public Error {
 public:
  using Error::Error;
};

class TruncationBlowup : public Error {
 public:
  using Error::Error;
};

class RealityViolation : public Error {
 public:
  using Error::Error;
};

class ZeroDivisor : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class PhaseWindingAmbiguous : public Error {
 public:
  using Error::Error;
};

/// Malformed problem file or bad command-line input.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace hillq

#endif  // HILLQ_ERRORS_HPP

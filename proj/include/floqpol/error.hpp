#ifndef FLOQPOL_ERROR_HPP
#define FLOQPOL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace floqpol {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a model or configuration invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure stopped at its cap. For truncation convergence the
/// last two P_1 values are attached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous = 0.0,
                   double last = 0.0)
      : Error(what), previous_(previous), last_(last) {}
  double previous() const { return previous_; }
  double last() const { return last_; }

 private:
  double previous_;
  double last_;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

/// Denominator of a closed form vanishes.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double critical_amplitude)
      : Error(what), critical_amplitude_(critical_amplitude) {}
  double critical_amplitude() const { return critical_amplitude_; }

 private:
  double critical_amplitude_;
};

class ResonanceError : public Error {
 public:
  using Error::Error;
};

class StepSizeError : public Error {
 public:
  using Error::Error;
};

class PropagationError : public Error {
 public:
  PropagationError(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace floqpol

#endif  // FLOQPOL_ERROR_HPP

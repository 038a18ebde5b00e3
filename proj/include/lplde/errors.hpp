#ifndef LPLDE_ERRORS_HPP
#define LPLDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lplde {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class DivisionByZero : public Error {
public:
  explicit DivisionByZero(const std::string &msg = "division by zero") : Error(msg) {}
};

// Mixing coefficient rings (or BigFloat precisions) in one operation.
class RingMismatch : public Error {
public:
  explicit RingMismatch(const std::string &msg) : Error(msg) {}
};

class ResonantRHS : public Error {
public:
  explicit ResonantRHS(const std::string &msg) : Error(msg) {}
};

class InvalidFamily : public Error {
public:
  explicit InvalidFamily(const std::string &msg) : Error(msg) {}
};

class NonOscillatory : public Error {
public:
  explicit NonOscillatory(const std::string &msg) : Error(msg) {}
};

class OrderOutOfRange : public Error {
public:
  explicit OrderOutOfRange(const std::string &msg) : Error(msg) {}
};

class ParameterDependence : public Error {
public:
  explicit ParameterDependence(const std::string &msg) : Error(msg) {}
};

class InsufficientData : public Error {
public:
  explicit InsufficientData(const std::string &msg) : Error(msg) {}
};

class NoRealRoot : public Error {
public:
  explicit NoRealRoot(const std::string &msg) : Error(msg) {}
};

class NoSignChange : public Error {
public:
  explicit NoSignChange(const std::string &msg) : Error(msg) {}
};

class ToleranceNotReached : public Error {
public:
  explicit ToleranceNotReached(const std::string &msg) : Error(msg) {}
};

class QuadratureFailure : public Error {
public:
  explicit QuadratureFailure(const std::string &msg) : Error(msg) {}
};

class StepSizeUnderflow : public Error {
public:
  explicit StepSizeUnderflow(const std::string &msg) : Error(msg) {}
};

class NoConvergence : public Error {
public:
  explicit NoConvergence(const std::string &msg) : Error(msg) {}
};

class InsufficientSpan : public Error {
public:
  explicit InsufficientSpan(const std::string &msg) : Error(msg) {}
};

class NoCrossing : public Error {
public:
  explicit NoCrossing(const std::string &msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string &msg) : Error(msg) {}
};

} // namespace lplde

#endif

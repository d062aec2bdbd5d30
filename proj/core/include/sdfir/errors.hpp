#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdfir {

enum class ErrorCode {
  Dimension,
  Parameter,
  Numeric,
  Interconnection,
  PoleEvaluation,
  Stability,
  Domain,
  Solver,
  Config,
  Invariant,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base of every exception thrown by the library. `subject()` names the
/// offending object (e.g. "target") when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string subject = {})
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

#define SDFIR_DEFINE_ERROR(Name, Code)                                      \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& message, std::string subject = {})     \
        : Error(ErrorCode::Code, message, std::move(subject)) {}            \
  };

SDFIR_DEFINE_ERROR(DimensionError, Dimension)
SDFIR_DEFINE_ERROR(ParameterError, Parameter)
SDFIR_DEFINE_ERROR(NumericError, Numeric)
SDFIR_DEFINE_ERROR(InterconnectionError, Interconnection)
SDFIR_DEFINE_ERROR(PoleEvaluationError, PoleEvaluation)
SDFIR_DEFINE_ERROR(StabilityError, Stability)
SDFIR_DEFINE_ERROR(DomainError, Domain)
SDFIR_DEFINE_ERROR(SolverError, Solver)
SDFIR_DEFINE_ERROR(ConfigError, Config)
SDFIR_DEFINE_ERROR(InvariantError, Invariant)

#undef SDFIR_DEFINE_ERROR

}  // namespace sdfir

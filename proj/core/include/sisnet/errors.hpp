#pragma once

#include <stdexcept>
#include <string>

namespace sisnet {

// Base for every error raised by the library. The CLI maps the subclasses
// onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input values: negative weights, non-finite coordinates,
// out-of-range indices, conflicting duplicate edges.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Too few samples to build a regression (T = 0).
class InsufficientDataError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// The healthy state has no diagonal Lyapunov certificate (s1(M) > 1), or
// the constructed certificate failed numerical verification.
class CertificateError : public Error {
 public:
  CertificateError(const std::string& what, double offending_eigenvalue)
      : Error(what), offending_eigenvalue_(offending_eigenvalue) {}
  double offending_eigenvalue() const { return offending_eigenvalue_; }

 private:
  double offending_eigenvalue_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A simulated state left [0,1]^n although the invariance conditions held.
class InvarianceViolation : public Error {
 public:
  using Error::Error;
};

// Training data carried no information about the parameters.
class IdentificationError : public Error {
 public:
  IdentificationError(const std::string& what, std::string case_tag)
      : Error(what), case_tag_(std::move(case_tag)) {}
  const std::string& case_tag() const { return case_tag_; }

 private:
  std::string case_tag_;
};

// Pipeline-level precondition: derived parameters violate the step-size
// bounds, zero-count households, and similar.
class PipelineError : public Error {
 public:
  using Error::Error;
};

}  // namespace sisnet

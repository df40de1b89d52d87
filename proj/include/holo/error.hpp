#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace holo {

enum class ErrorCode {
  SyntaxError,
  NotRecognizedForm,
  DegenerateField,
  PoleEvaluation,
  UnsupportedKind,
  NonConvergence,
  OrderMismatch,
  IllConditioned,
  NotSimple,
  EssentialNotSupported,
  NoRotation,
  GridEscape,
  WrongDegree,
  DegenerateEquator,
  SingularPath,
  BranchJump,
  BadStart,
  InconclusiveLimit,
  Undetermined,
  CriticalPointHit,
  NoMatch,
  IOError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure with the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t pos, const std::string& expected, const std::string& what)
      : Error(ErrorCode::SyntaxError, what), pos_(pos), expected_(expected) {}
  std::size_t position() const { return pos_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t pos_;
  std::string expected_;
};

class PoleEvaluation : public Error {
 public:
  PoleEvaluation(std::complex<double> pole, const std::string& what)
      : Error(ErrorCode::PoleEvaluation, what), pole_(pole) {}
  std::complex<double> pole() const { return pole_; }

 private:
  std::complex<double> pole_;
};

}  // namespace holo

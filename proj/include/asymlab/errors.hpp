#pragma once

#include <stdexcept>
#include <string>

namespace asymlab {

/// Base of every error raised by the library. The CLI prints `what()`
/// verbatim, so messages name the originating operation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class BranchDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotDifferentiableError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// An orbit left the domain; `step()` is the index of the offending iterate.
class EscapeError : public Error {
 public:
  EscapeError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Level `level()` of the renormalization ladder does not exist at this
/// parameter: the map is not deep enough in the cascade.
class LevelNotBornError : public Error {
 public:
  LevelNotBornError(const std::string& what, int level)
      : Error(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

class SearchExhaustedError : public Error {
 public:
  using Error::Error;
};

class ContinuationError : public Error {
 public:
  using Error::Error;
};

class CoverIntegrityError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace asymlab

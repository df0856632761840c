#pragma once

#include <stdexcept>
#include <string>

namespace bosemix {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map categories to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};
class ParameterError : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class RegimeError : public Error {
 public:
  using Error::Error;
};
class NumericalError : public Error {
 public:
  using Error::Error;
};
class ConsistencyError : public Error {
 public:
  using Error::Error;
};
class MiscibilityError : public Error {
 public:
  using Error::Error;
};
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace bosemix

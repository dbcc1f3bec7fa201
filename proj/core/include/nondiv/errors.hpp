#pragma once

#include <stdexcept>
#include <string>

namespace nondiv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DependentVectors : public Error {
 public:
  DependentVectors() : Error("vectors are linearly dependent") {}
  using Error::Error;
};

class DegreeOutOfRange : public Error {
 public:
  using Error::Error;
};

class NotUnimodular : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidScenario : public Error {
 public:
  using Error::Error;
};

class InvalidTorusElement : public Error {
 public:
  using Error::Error;
};

// The enumeration cap was hit; the bound handed to the enumerator was too generous.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class WholeSpace : public Error {
 public:
  WholeSpace() : Error("subspace is the whole space") {}
};

// A completeness certificate could not be produced within the vector budget.
class IncompleteSearch : public Error {
 public:
  using Error::Error;
};

class NotBelowEta0 : public Error {
 public:
  using Error::Error;
};

class InternalInvariantViolation : public Error {
 public:
  using Error::Error;
};

// Malformed input file or field; `where` names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace nondiv

#pragma once

#include <stdexcept>
#include <string>

namespace plfc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value or set used outside the domain it was declared on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs a finite enumeration met an infinite sort.
class EnumerationError : public Error {
 public:
  using Error::Error;
};

/// A weight expression could not be evaluated (e.g. a symbolic alpha-cut level is not ground).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace plfc

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs of an operation does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Cyclical monotonicity fails: a longest-path relaxation found a positive cycle.
class PositiveCycleError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain where a quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A checked structural identity failed at run time.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV input. Line and column are 1-based; column 0 means "whole line".
class CsvError : public Error {
 public:
  CsvError(std::string path, std::size_t line, std::size_t column, const std::string& what);

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string path_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace ldot

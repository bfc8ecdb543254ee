#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wwopt {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration value (alpha out of range, zero window, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's mathematical domain (gamma at x <= 0,
/// negative memory age, degenerate label sets, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector or matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Problem reading or parsing input data. Carries 1-based row/column context
/// when the error refers to a specific CSV cell (0 means not applicable).
class DataError : public Error {
 public:
  enum class Kind {
    MissingFile,
    MissingColumn,
    EmptyBody,
    BadCell,
    RaggedRow,
  };

  DataError(Kind kind, const std::string& what, std::size_t row = 0,
            std::size_t column = 0)
      : Error(what), kind_(kind), row_(row), column_(column) {}

  Kind kind() const { return kind_; }
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t row_;
  std::size_t column_;
};

/// Training produced a non-finite loss; step() index of the offending update.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace wwopt

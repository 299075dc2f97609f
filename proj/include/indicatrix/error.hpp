#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace indicatrix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A univariate function or a division was applied outside its domain.
class DomainError : public Error {
 public:
  DomainError(std::string function, double argument)
      : Error(function + ": argument " + std::to_string(argument) + " outside domain"),
        function_(std::move(function)),
        argument_(argument) {}

  const std::string& function() const { return function_; }
  double argument() const { return argument_; }

 private:
  std::string function_;
  double argument_;
};

/// Two jets of different shape were combined, or a derivative beyond the
/// truncation order was requested.
class OrderError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation of a parsed expression failed; carries the source offset of the
/// failing node.
class EvalError : public Error {
 public:
  EvalError(const std::string& message, std::size_t offset)
      : Error(message + " (expression offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// The metric is not Finsler at the requested point (singular or indefinite
/// fundamental tensor, nonpositive warp, point off the indicatrix, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace indicatrix

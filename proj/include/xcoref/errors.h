#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xcoref {

// Base of every error the engine raises. The CLI maps subclasses to exit
// codes: InvariantViolation -> 3, everything else -> 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed record in an input file. Carries the 1-based line number.
class LineError : public Error {
 public:
  LineError(const std::string &kind, std::size_t line, const std::string &msg)
      : Error(kind + " at line " + std::to_string(line) + ": " + msg),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public LineError {
 public:
  SchemaError(std::size_t line, const std::string &msg)
      : LineError("schema error", line, msg) {}
};

class IntegrityError : public LineError {
 public:
  IntegrityError(std::size_t line, const std::string &msg)
      : LineError("integrity error", line, msg) {}
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class MissingEntry : public Error {
 public:
  using Error::Error;
};

class DuplicateMention : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage broke one of its structural guarantees (e.g. chains no
// longer partition the mentions).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace xcoref

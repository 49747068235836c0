#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blends {

/// Base of every error raised by the library. `kind()` is a short stable tag
/// used by the CLI for machine-parsable diagnostics.
class Error : public std::runtime_error {
 public:
  Error(const char* kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  const char* kind() const noexcept { return kind_; }

 private:
  const char* kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error("argument", what) {}
};

/// Knot or grade mismatch between operands that must be compatible.
class CompatibilityError : public Error {
 public:
  explicit CompatibilityError(const std::string& what) : Error("compatibility", what) {}
};

/// Series division by a series with vanishing constant term.
class DivisionError : public Error {
 public:
  explicit DivisionError(const std::string& what) : Error("division", what) {}
};

/// A non-finite intermediate appeared during evaluation.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error("overflow", what) {}
};

/// Point is not on any segment of a blendstring.
class OffPathError : public Error {
 public:
  explicit OffPathError(const std::string& what) : Error("off-path", what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error("parse", format(what, line, column)), line_(line), column_(column) {}

  /// 1-based; 0 when the error has no textual position.
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

/// A single collocation step could not be formed (singular system etc.).
class StepFailure : public Error {
 public:
  explicit StepFailure(const std::string& what) : Error("step", what) {}
};

/// The marching solver gave up.
class SolveError : public Error {
 public:
  explicit SolveError(const std::string& what) : Error("solve", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace blends

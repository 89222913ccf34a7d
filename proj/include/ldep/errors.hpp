#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ldep {

/// Base class for all library errors. Every error carries a stable
/// module-qualified code ("module/condition") alongside the human message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

class OverflowError : public Error {
public:
  explicit OverflowError(const std::string& message)
      : Error("checked_math/overflow", message) {}
};

class ZeroCoefficientError : public Error {
public:
  explicit ZeroCoefficientError(const std::string& message)
      : Error("lde_core/zero_coefficient", message) {}
};

class DegenerateStepError : public Error {
public:
  explicit DegenerateStepError(const std::string& message)
      : Error("partition/degenerate_step", message) {}
};

class NotSeparableError : public Error {
public:
  NotSeparableError(const std::string& message, std::string array, int subscript)
      : Error("nested/not_separable", message),
        array_(std::move(array)),
        subscript_(subscript) {}

  const std::string& array() const noexcept { return array_; }
  /// 1-based subscript position inside the array reference.
  int subscript() const noexcept { return subscript_; }

private:
  std::string array_;
  int subscript_;
};

class LoopUnconstrainedError : public Error {
public:
  explicit LoopUnconstrainedError(const std::string& message)
      : Error("nested/loop_unconstrained", message) {}
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& message, int line, int column)
      : Error("frontend/syntax", message), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

class UnsupportedFeatureError : public Error {
public:
  UnsupportedFeatureError(const std::string& message, int line, int column)
      : Error("frontend/unsupported_feature", message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

}  // namespace ldep

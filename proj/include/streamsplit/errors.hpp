#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace streamsplit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected parameters: epsilon outside (0,1), N = 0, bad ranges, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A loss was requested on an empty stream (m = 0).
class EmptyStreamError : public Error {
 public:
  EmptyStreamError() : Error("loss is undefined on an empty stream (m = 0)") {}
};

/// A stream element violates the LabeledPoint invariants for its mode.
class ValidationError : public Error {
 public:
  enum class Field { feature, label };

  ValidationError(Field field, std::size_t index, std::int64_t value, const std::string& what)
      : Error(what), field_(field), index_(index), value_(value) {}

  Field field() const noexcept { return field_; }
  std::size_t index() const noexcept { return index_; }
  std::int64_t value() const noexcept { return value_; }

 private:
  Field field_;
  std::size_t index_;
  std::int64_t value_;
};

/// Malformed input text or binary record.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error(what), line_(line) {}
  explicit FormatError(const std::string& what) : Error(what), line_(0) {}

  /// 1-based line (CSV) or record (binary) number, 0 when not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace streamsplit

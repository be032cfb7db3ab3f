#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bitext {

// Bad command-line usage or invalid configuration values.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data. `line()` is 1-based, 0 when no line applies.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Unreadable, incompatible or corrupt model artifacts.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bitext

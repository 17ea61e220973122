#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace softmapper {

/// Malformed input file. `line()` is 1-based; 0 means the file as a whole.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-finite loss, gradient or parameter encountered during optimization.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace softmapper

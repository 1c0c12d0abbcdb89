#pragma once

#include <stdexcept>
#include <string>

namespace dht {

// Bad arguments: degenerate segments, dimension mismatches, non-positive sizes.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parametric line that does not cross the image rectangle.
class NoIntersection : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Line parameters outside the quantization range.
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Malformed binary input (tensors, PGM).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system failures: missing files, unwritable paths.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dht

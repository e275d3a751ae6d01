#pragma once

#include <stdexcept>
#include <string>

namespace somnograph {

// Invalid arguments to any public operation.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input data (files, headers). Carries the byte offset where
// parsing failed when that is known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  explicit ParseError(const std::string& what)
      : std::runtime_error(what), byte_offset_(0) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Non-finite values where finite ones are required (losses, gradients).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace somnograph

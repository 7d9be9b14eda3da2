#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hstl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed dimensions, undeclared symbols, conflicting assumptions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Formula text that does not match the grammar. `offset()` is a byte offset
/// into the source text.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : ValidationError(message + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace hstl

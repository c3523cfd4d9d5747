#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jpit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live in different prime fields.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

// Variable counts, point lengths or indices do not line up.
class ArityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// A configured safety limit (sparsity, stream size, exponent) would be
// exceeded. `required` names the size that would have been needed.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what_limit, const std::string& required)
      : Error(what_limit + " exceeds cap (required: " + required + ")"),
        required_(required) {}

  const std::string& required() const { return required_; }

 private:
  std::string required_;
};

}  // namespace jpit

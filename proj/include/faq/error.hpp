#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace faq {

/// Base of all engine errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed query, data outside the carrier, invalid ordering.
/// The CLI maps these to exit status 1.
class UserError : public Error {
 public:
  using Error::Error;
};

/// A broken internal invariant (construction bug). Exit status 2.
class InternalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public UserError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : UserError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace faq

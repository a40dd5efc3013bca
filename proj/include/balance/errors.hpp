#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace balance {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side contract was broken (bad index, invalid pair, wrong subdomain).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured profile cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace balance

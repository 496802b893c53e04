#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dagchrom {

// Malformed graph input: self-loop, anti-parallel pair, duplicate edge, bad endpoint.
class InvalidGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact oracle was asked to work on an instance above its configured size guard.
class LimitExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dagchrom

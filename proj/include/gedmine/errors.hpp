#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gedmine {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (bad row, bad JSON, truncated line). Carries the
// 1-based line number of the offending line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a data invariant: dangling edge endpoint,
// duplicate node id, unknown attribute column, assignment not covering the
// graph, and the like.
class DataError : public Error {
 public:
  using Error::Error;
};

// Bad configuration: out-of-range parameter, unusable option combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gedmine

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epivax {

/// Input outside an operation's mathematical domain (nonpositive rates,
/// eps >= min delta, betas outside their bounds, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An instance that cannot be stabilized even with every node fully
/// vaccinated. The CLI maps this to exit code 2.
class InfeasibleInstance : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Malformed JSON input; `path` names the offending field ("beta[3]").
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace epivax

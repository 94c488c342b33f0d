#pragma once

#include <stdexcept>
#include <string>

namespace meandev {

/// Argument outside the mathematical domain of an operation (u ∉ (0,1), x < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to converge (divergent integral, no bracket, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: JSON specs, CSV files, config files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called on an object outside its supported class
/// (e.g. non-convex g where a convex program is required).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Feature intentionally not provided.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_domain(const std::string& what);

}  // namespace meandev

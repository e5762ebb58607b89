#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace pwcs {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A precondition or dimension contract was violated by the caller.
struct ContractError : Error {
  using Error::Error;
};

/// A column that must be normalizable has zero norm.
struct DegenerateColumnError : Error {
  DegenerateColumnError(const std::string& what, Eigen::Index column)
      : Error(what), column(column) {}
  Eigen::Index column;
};

/// Malformed content in a matrix or config file.
struct ParseError : Error {
  using Error::Error;
};

/// Filesystem-level failure (unreadable / unwritable path).
struct IoError : Error {
  using Error::Error;
};

/// An experiment configuration that cannot be run.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace pwcs

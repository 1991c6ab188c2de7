#pragma once

#include <stdexcept>
#include <string>

namespace cylapprox {

/// Precondition violation: bad sizes, mismatched grids, odd cardinal m, cost guards.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written. The message carries the path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(what + ": " + path), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A rate fit has too few usable points.
class FitUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cylapprox

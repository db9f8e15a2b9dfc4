#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pideg {

// Base class for all pideg errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter or configuration value.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed textual input. `position` is a byte offset for inline specs
// (gate mini-language) and a 1-based line number for file input (CSV).
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at " + std::to_string(position) + ")"), position(position) {}
  std::size_t position = 0;
};

// The follower-curve recursion produced a non-finite value.
struct NumericError : Error {
  NumericError(const std::string& what, std::size_t sample)
      : Error(what), sample(sample) {}
  std::size_t sample = 0;
};

}  // namespace pideg

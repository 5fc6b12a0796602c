#pragma once

#include <stdexcept>
#include <string>

namespace stoda {

// Bad user input: malformed config, invalid source set, out-of-range parameters.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Grid construction cannot satisfy the requested resolution (e.g. two sources
// closer than the minimum patch footprint).
class GridError : public std::runtime_error {
public:
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature value that must be finite and positive came out otherwise
// (degenerate field), or a weight evaluation overflowed its cap.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stoda

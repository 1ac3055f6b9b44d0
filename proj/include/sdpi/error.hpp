#pragma once

#include <stdexcept>
#include <string>

namespace sdpi {

/// Raised for malformed or out-of-domain inputs (bad pmfs, parameters out of
/// range, dimension mismatches, unparsable specs). The CLI maps it to exit 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an operation needs generator data that was never declared,
/// e.g. f'''(1) for the Pinsker-type condition.
class MissingDerivative : public InputError {
 public:
  explicit MissingDerivative(const std::string& what) : InputError(what) {}
};

}  // namespace sdpi

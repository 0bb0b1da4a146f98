#pragma once

#include <stdexcept>
#include <string>

namespace rfidloc {

/// Bad input data: malformed files, invalid scenarios, out-of-range values.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller asked for something the model does not define (e.g. weighted NLF).
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal invariant did not hold. Indicates a bug, not bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rfidloc

#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

/// Input that violates a documented precondition. `field()` names the
/// offending input so front ends can report it.
class InvalidInput : public std::invalid_argument {
 public:
  InvalidInput(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A main-channel gain of zero makes the standard form undefined.
class NonStandardizableChannel : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class UnsupportedUserCount : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class GridTooLarge : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A solver produced a non-finite value or failed to converge.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace secrecy

#pragma once

#include <stdexcept>
#include <string>

namespace pathqv {

/// Bad input: malformed files, out-of-range arguments, broken preconditions.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical identity that must hold on every valid input was violated.
/// Seeing one of these means a bug in the library (or an injected fault).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace pathqv

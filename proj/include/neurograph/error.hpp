#pragma once

#include <stdexcept>
#include <string>

namespace neurograph {

// Bad input: malformed files, out-of-range indices, invalid parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure inside an optimizer or integrator.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OptimizerError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Request exceeds what an operation supports (e.g. exhaustive enumeration on
// too many neurons).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace neurograph

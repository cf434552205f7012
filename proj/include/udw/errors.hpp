#pragma once

#include <stdexcept>
#include <string>

namespace udw {

// Raised when a reflection or exponential factor would leave the double range.
class OverflowRegime : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// A phase frequency that must be strictly positive is not.
class NonPositiveFrequency : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class QuadratureNoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DerivativeUnstable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace udw

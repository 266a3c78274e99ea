#pragma once

#include <stdexcept>
#include <string>

namespace toa {

// Invalid user input (bad config value, malformed file). Maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A mathematical precondition was violated, e.g. p = 0 in a TOA formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Non-convergence, overflow, or a failed runtime invariant. Maps to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace toa

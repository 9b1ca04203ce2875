#pragma once

#include <stdexcept>
#include <string>

namespace sampnum {

// Argument outside the mathematical domain of an operation (e.g. a point
// coordinate outside [0,1)).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Enumeration or allocation would exceed a configured cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A certified enclosure could not be tightened to the requested width.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation requires a full-rank least-squares fit.
class DegenerateFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An invariant that every experiment row re-validates was violated.
class CheckFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sampnum

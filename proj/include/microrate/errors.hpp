#pragma once

#include <stdexcept>
#include <string>

namespace microrate {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A contract or model that violates its construction invariants.
class InvalidContract : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Root solver guards. Unreachable for validated inputs.
class NoRootInUnitInterval : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BracketFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero-variance sample: higher moments are undefined.
class DegenerateSample : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace microrate

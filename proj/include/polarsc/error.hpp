#pragma once

#include <stdexcept>
#include <string>

namespace polarsc {

// Bad sizes, exponents, rates or architecture parameters.
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// Data that does not fit the code it is used with (wrong length, nonzero frozen bit, ...).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Soft value outside the domain of its kernel, e.g. a nonpositive likelihood ratio.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A schedule or datapath invariant broke during simulation. Never expected on shipped configs.
class InternalConsistencyError : public std::logic_error {
public:
    explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

} // namespace polarsc

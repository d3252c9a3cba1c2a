#pragma once

#include <stdexcept>
#include <string>

namespace condsym {

/// Evaluation left the real, smooth domain of an expression
/// (logarithm of a non-positive number, fractional power of a negative base, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DivisionByZero : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 1 - z n eps t^n <= 0: the point is outside the small-parameter branch of X_n.
class BranchError : public DomainError {
public:
    using DomainError::DomainError;
};

class ZeroDynamicalExponent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed text form of a profile, family, group element or grid.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace condsym

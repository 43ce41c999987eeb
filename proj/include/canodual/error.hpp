#pragma once

#include <stdexcept>
#include <string>

namespace canodual {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (non-positive material constant, bad grid, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The requested root or branch does not exist for the stress level at hand.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// A dual stress too close to zero to divide by.
class SingularError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Fields or evaluation points that do not belong to the problem's grid or domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Triality label disagrees with the pointwise second-variation signs.
class ClassificationConflict : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace canodual

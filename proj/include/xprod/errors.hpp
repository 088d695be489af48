#pragma once

#include <stdexcept>
#include <string>

namespace xprod {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape/size mismatch (empty matrix, inconsistent dimensions).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An axiom or closure check failed while constructing a domain object.
/// The message names the offending cell, pair or group element.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Operation invoked on data that does not support it
/// (e.g. involution on a non-involutive system).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold (degenerate representation,
/// missing left identity, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Internal consistency check failed; signals numerical breakdown rather
/// than bad input.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Config text could not be parsed; message carries the field path.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace xprod

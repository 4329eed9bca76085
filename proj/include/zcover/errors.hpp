#pragma once

#include <stdexcept>
#include <string>

namespace zcover {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range or inconsistent numeric parameters (probabilities, sizes, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An operation was called on input that violates its stated precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (graph, complex, embedding, config files).
class FormatError : public Error {
public:
    using Error::Error;
};

/// A face-count, matrix-size or wall-time cap was exceeded.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

}  // namespace zcover

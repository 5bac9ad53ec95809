#ifndef LIMSUP_ERROR_HPP
#define LIMSUP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace limsup {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A ratio whose denominator is zero (e.g. an empty approximation set).
class UndefinedRatioError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A floor or comparison of a real quantity could not be decided at the
/// working precision.
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// A size limit of the exact engine was exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace limsup

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace awf {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dilation power |j| beyond the configured cap was requested.
class TruncationRangeError : public Error {
public:
    using Error::Error;
};

/// A generated object would exceed a configured size limit.
class ResourceError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Query outside the domain of a sampled object.
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

/// A dilated atom is not resolved by the sampling grid.
class ScaleRangeError : public Error {
public:
    using Error::Error;
};

class UnsupportedDilationError : public Error {
public:
    using Error::Error;
};

/// Configuration could not be parsed or validated. `where` names the line or field.
class ConfigError : public Error {
public:
    ConfigError(std::string where, const std::string& what)
        : Error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace awf

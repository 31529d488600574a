#ifndef BANDPICK_ERRORS_HPP_
#define BANDPICK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bandpick {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed file magic, version, or structure.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

/// File shorter than its header claims.
class TruncationError : public Error {
public:
    explicit TruncationError(const std::string& msg) : Error(msg) {}
};

/// Invalid values in otherwise well-formed data (NaN payload, label gaps, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

/// Caller violated an operation precondition.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

/// External classifier backend failed (nonzero exit, missing/short pred file).
class BackendError : public Error {
public:
    explicit BackendError(const std::string& msg) : Error(msg) {}
};

}  // namespace bandpick

#endif  // BANDPICK_ERRORS_HPP_

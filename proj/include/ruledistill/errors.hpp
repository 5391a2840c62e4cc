#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rd {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Rejection sampling of a derivation kept exceeding the depth cap.
class SamplingDiverged : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IncompatibleVersion : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class InferenceDegenerate : public Error {
public:
    using Error::Error;
};

/// Non-finite loss during training or adaptation.
class NumericDivergence : public Error {
public:
    using Error::Error;
};

class UndefinedStatistic : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Stored digest does not match the payload.
class DigestError : public Error {
public:
    using Error::Error;
};

} // namespace rd

#pragma once

#include <stdexcept>
#include <string>

namespace mellin {

/// Base for all library errors; `code()` is a stable machine-readable tag.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error("parameter", what) {}
};

class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error("overflow", what) {}
};

class QuadratureError : public Error {
public:
    explicit QuadratureError(const std::string& what)
        : Error("quadrature-nonconvergence", what) {}
};

/// Rejection sampling gave up; carries the best concentration reached.
class RejectionExhaustedError : public Error {
public:
    RejectionExhaustedError(const std::string& what, double best_delta)
        : Error("rejection-exhausted", what), best_delta_(best_delta) {}
    double best_delta() const noexcept { return best_delta_; }

private:
    double best_delta_;
};

class SerializationError : public Error {
public:
    explicit SerializationError(const std::string& what) : Error("parse", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config-invalid", what) {}
};

}  // namespace mellin

// errors.hpp: Exception types shared by every sps module

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sps {

// Argument outside the mathematical domain of an operation (negative rate, t < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical procedure failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on a state or operator did not hold (e.g. rho is not stationary).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A physical invariant was violated by computed output.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what)
        , line_(line) {}

    // 0 when the error is not tied to a specific line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace sps

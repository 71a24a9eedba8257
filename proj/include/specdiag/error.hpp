#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specdiag {

/// Raised by the OFF/OBJ readers. Carries the 1-based line the problem was found on
/// (0 when the stream ended early).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class GeometryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Eigensolver failed to reach the requested residual.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_residual() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// The operator has more than one numerically-zero eigenvalue.
class DisconnectedError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace specdiag

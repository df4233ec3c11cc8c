#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holebox {

/// Bad user input: malformed files, invalid parameters, unknown names.
class ConfigError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in a key/value file. Carries the 1-based line number.
class ParseError : public ConfigError {
 public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : ConfigError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

 private:
    std::size_t line_;
};

/// A material or geometry record violates a physical invariant.
class InvariantError : public ConfigError {
 public:
    using ConfigError::ConfigError;
};

/// Numerical failure: eigensolver non-convergence, ambiguous level pairing, ...
class SolverError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Perturbation theory requested too close to a level crossing.
class PerturbationError : public SolverError {
 public:
    using SolverError::SolverError;
};

}  // namespace holebox

#pragma once

#include <stdexcept>
#include <string>

namespace spreaddim {

/// Malformed input text (CSV/JSON). Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input that parses but breaks a structural invariant (non-finite coordinate,
/// asymmetric matrix, k > n, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scale or parameter outside the domain of a formula (t < 0, F at t <= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace spreaddim

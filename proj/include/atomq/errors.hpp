#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace atomq {

// Bad input data: non-finite numbers, invalid weights, malformed states.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where an operation is defined (t < 0, zero vector, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operation not defined for this kind of input.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed document. Syntax errors carry the byte offset; schema errors
// name the offending JSON path instead.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at byte " + std::to_string(position) + ")"), position_(position) {}

    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    std::optional<std::size_t> position_;
};

} // namespace atomq

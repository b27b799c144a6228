#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace oneshot {

// Base of everything the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// (I - B) or a resolvent is numerically singular.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

// A constructed object violates one of its invariants (rho(B) >= 1, rank loss, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

// Eigensolver failure, size guard exceeded, non-contractive input to s(T), ...
class NumericalError : public Error {
public:
    using Error::Error;
};

// Missing or unwritable files.
class IoError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace oneshot

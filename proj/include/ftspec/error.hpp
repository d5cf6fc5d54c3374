#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ftspec {

/// Operands of different qubit counts were combined.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A qubit index is out of range or a CNOT has equal endpoints.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A product of rows produced a non-real relative phase.
class PhaseError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Located error from one of the text formats. `line` and `column` are
/// 1-based; zero means "not applicable".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : std::runtime_error(locate(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string locate(const std::string& what, std::size_t line, std::size_t column) {
        std::string prefix;
        if (line != 0) {
            prefix = "line " + std::to_string(line);
            if (column != 0) prefix += ", column " + std::to_string(column);
            prefix += ": ";
        } else if (column != 0) {
            prefix = "column " + std::to_string(column) + ": ";
        }
        return prefix + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// Input violates a structural invariant (ICM form, specification tuple).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense oracle refused an input larger than its size cap.
class SizeCapError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Gate list cannot be lowered to ICM form.
class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ftspec

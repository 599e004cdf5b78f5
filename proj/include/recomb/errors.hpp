#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace recomb {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t column, double pivot)
        : Error("matrix is singular to working precision at column " + std::to_string(column)),
          column_(column), pivot_(pivot) {}

    std::size_t column() const noexcept { return column_; }
    double pivot() const noexcept { return pivot_; }

private:
    std::size_t column_;
    double pivot_;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class ParseErrorKind { header, size, index, duplicate, token, count, missing };

inline const char* to_string(ParseErrorKind kind) noexcept {
    switch (kind) {
    case ParseErrorKind::header: return "malformed header";
    case ParseErrorKind::size: return "bad size line";
    case ParseErrorKind::index: return "index out of range";
    case ParseErrorKind::duplicate: return "duplicate entry";
    case ParseErrorKind::token: return "non-numeric token";
    case ParseErrorKind::count: return "wrong entry count";
    case ParseErrorKind::missing: return "missing data";
    }
    return "parse error";
}

// Malformed input file. line is 1-based; 0 when the problem is not tied to a line.
class ParseError : public IoError {
public:
    ParseError(ParseErrorKind kind, std::string path, std::size_t line, const std::string& detail)
        : IoError(path + ":" + std::to_string(line) + ": " + to_string(kind) + ": " + detail),
          kind_(kind), path_(std::move(path)), line_(line) {}

    ParseErrorKind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::string path_;
    std::size_t line_;
};

} // namespace recomb

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fluidint {

enum class ErrorKind {
    SingularMetric,
    NonFinite,
    NotAntisymmetric,
    DegenerateTimeDirection,
    NullVelocity,
    ZeroDensity,
    ZeroScaleFactor,
    NotTimelike,
    ZeroEnthalpy,
    ParseError,
    UnknownVariable,
    DomainError,
    ValidationError,
    DimensionMismatch,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised by the expression parser. offset is a byte offset into the source text.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& detail);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

// Evaluation failed (ln/sqrt of a negative, division by zero); carries the point.
class DomainError : public Error {
public:
    DomainError(const std::string& detail, std::vector<double> point);

    const std::vector<double>& point() const noexcept { return point_; }

private:
    std::vector<double> point_;
};

}  // namespace fluidint

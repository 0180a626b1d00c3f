#include "fluidint/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace fluidint {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SingularMetric: return "SingularMetric";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
        case ErrorKind::DegenerateTimeDirection: return "DegenerateTimeDirection";
        case ErrorKind::NullVelocity: return "NullVelocity";
        case ErrorKind::ZeroDensity: return "ZeroDensity";
        case ErrorKind::ZeroScaleFactor: return "ZeroScaleFactor";
        case ErrorKind::NotTimelike: return "NotTimelike";
        case ErrorKind::ZeroEnthalpy: return "ZeroEnthalpy";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    }
    return "Unknown";
}

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& detail)
    : Error(ErrorKind::ParseError,
            fmt::format("{} at byte {} (expected one of: {})", detail, offset,
                        fmt::join(expected, ", "))),
      offset_(offset),
      expected_(std::move(expected)) {}

DomainError::DomainError(const std::string& detail, std::vector<double> point)
    : Error(ErrorKind::DomainError,
            fmt::format("{} at point ({})", detail, fmt::join(point, ", "))),
      point_(std::move(point)) {}

}  // namespace fluidint

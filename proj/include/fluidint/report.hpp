#pragma once

#include "fluidint/fields.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fluidint {

inline constexpr int kReportSchemaVersion = 1;

enum class CheckStatus { Pass, Fail, Error };

std::string_view to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    std::string kind;
    CheckStatus status = CheckStatus::Pass;
    double tolerance = 0.0;
    double max_norm = 0.0;
    double mean_norm = 0.0;
    std::optional<Point> worst_point;
    std::size_t samples = 0;
    std::string message;  // error text for errored checks
    // extra named numbers (trajectory drifts, sup-distances, ...)
    std::vector<std::pair<std::string, double>> metrics;
};

struct ResidualReport {
    std::string scenario;
    std::string scenario_digest;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    nlohmann::ordered_json to_json() const;
    // Stable text form with 17-significant-digit floats; digest() hashes it.
    std::string canonical() const;
    std::string digest() const;
    std::string to_csv() const;
};

// Pairwise (cascade) summation, independent of how the inputs were produced.
double pairwise_sum(std::span<const double> values);

// pass iff max <= tolerance; a NaN max fails.
CheckStatus classify(double max_norm, double tolerance);

}  // namespace fluidint

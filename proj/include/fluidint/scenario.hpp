#pragma once

#include "fluidint/constraints.hpp"
#include "fluidint/fluids.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fluidint {

inline constexpr int kScenarioSchemaVersion = 1;

enum class ConstraintChoice { None, Time, Relativistic };

struct SampleSpec {
    Vec lower;
    Vec upper;
    // velocity box for checks sampling tangent-bundle states
    Vec velocity_lower;
    Vec velocity_upper;
    std::size_t count = 1000;
    std::uint64_t seed = 1;
};

struct TrajectorySpec {
    std::string name;
    Point x0;
    Vec xdot0;
    std::optional<std::string> field;  // xdot0 := field(x0) when set
    double t_end = 1.0;
    double dt = 1e-3;
};

struct CheckSpec {
    std::string name;
    std::string kind;
    double tolerance = 1e-10;
    nlohmann::json args;
};

// A parsed and compiled scenario document. See README for the schema.
struct Scenario {
    std::string name;
    int dim = 0;
    bool has_time = false;
    std::vector<std::string> variables;

    MetricField metric;
    // present for product (dt^2 + g^s) and FLRW (dt^2 - a^2 h) metrics
    std::optional<MetricField> spatial_metric;
    std::optional<ScaleFactor> scale_factor;

    ForceForm base_force;
    ConstraintChoice constraint = ConstraintChoice::None;
    ForceForm system_force;
    SecondOrderField system;

    std::map<std::string, VectorField> fields;
    std::map<std::string, ScalarField> scalars;
    std::optional<FluidScenario> fluid;

    SampleSpec sample;
    std::vector<TrajectorySpec> trajectories;
    std::vector<CheckSpec> checks;

    nlohmann::json source;
    // SHA-256 of the canonical serialization of the source document
    std::string digest;

    const VectorField& field(const std::string& name) const;
    const ScalarField& scalar(const std::string& name) const;
    const TrajectorySpec& trajectory(const std::string& name) const;
};

// Throws ValidationError on schema problems, ParseError / UnknownVariable on bad expressions.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

}  // namespace fluidint

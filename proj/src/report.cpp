#include "fluidint/report.hpp"

#include "fluidint/scenario.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fluidint {

namespace {

std::string g17(double v) { return fmt::format("{:.17g}", v); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Error: return "error";
    }
    return "?";
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

CheckStatus classify(double max_norm, double tolerance) {
    return max_norm <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
}

bool ResidualReport::all_passed() const {
    for (const auto& c : checks) {
        if (c.status != CheckStatus::Pass) return false;
    }
    return true;
}

nlohmann::ordered_json ResidualReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["scenario"] = scenario;
    j["scenario_digest"] = scenario_digest;
    j["seed"] = seed;
    j["passed"] = all_passed();
    j["report_digest"] = digest();
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["kind"] = c.kind;
        e["status"] = to_string(c.status);
        e["tolerance"] = c.tolerance;
        // NaN is not representable in JSON; emit the 17-digit text instead
        e["max_norm"] = std::isfinite(c.max_norm) ? nlohmann::ordered_json(c.max_norm)
                                                  : nlohmann::ordered_json(g17(c.max_norm));
        e["mean_norm"] = std::isfinite(c.mean_norm) ? nlohmann::ordered_json(c.mean_norm)
                                                    : nlohmann::ordered_json(g17(c.mean_norm));
        if (c.worst_point) {
            e["worst_point"] = std::vector<double>(c.worst_point->data(),
                                                   c.worst_point->data() + c.worst_point->size());
        } else {
            e["worst_point"] = nullptr;
        }
        e["samples"] = c.samples;
        if (!c.metrics.empty()) {
            nlohmann::ordered_json m;
            for (const auto& [k, v] : c.metrics) m[k] = v;
            e["metrics"] = m;
        }
        if (!c.message.empty()) e["message"] = c.message;
        arr.push_back(e);
    }
    return j;
}

std::string ResidualReport::canonical() const {
    std::string out = fmt::format("report v{}\nscenario {}\ndigest {}\nseed {}\n", kReportSchemaVersion,
                                  scenario, scenario_digest, seed);
    for (const auto& c : checks) {
        out += fmt::format("check {} kind={} status={} tol={} max={} mean={} samples={}", c.name, c.kind,
                           to_string(c.status), g17(c.tolerance), g17(c.max_norm), g17(c.mean_norm),
                           c.samples);
        if (c.worst_point) {
            out += " worst=";
            for (Eigen::Index i = 0; i < c.worst_point->size(); ++i) {
                out += (i ? "," : "") + g17((*c.worst_point)[i]);
            }
        }
        for (const auto& [k, v] : c.metrics) out += fmt::format(" {}={}", k, g17(v));
        if (!c.message.empty()) out += " message=" + c.message;
        out += '\n';
    }
    return out;
}

std::string ResidualReport::digest() const { return sha256_hex(canonical()); }

std::string ResidualReport::to_csv() const {
    std::string out = "check,kind,status,tolerance,max_norm,mean_norm,samples,message\n";
    for (const auto& c : checks) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(c.name), c.kind, to_string(c.status),
                           g17(c.tolerance), g17(c.max_norm), g17(c.mean_norm), c.samples,
                           csv_field(c.message));
    }
    return out;
}

}  // namespace fluidint

#include "fluidint/errors.hpp"
#include "fluidint/report.hpp"
#include "fluidint/runner.hpp"
#include "fluidint/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>

using namespace fluidint;
using nlohmann::json;

namespace {

std::filesystem::path scenario_dir() {
    const char* dir = std::getenv("FLUIDINT_SCENARIO_DIR");
    return dir ? dir : FLUIDINT_SCENARIO_DIR_DEFAULT;
}

json minimal() {
    return json::parse(R"({
      "schema_version": 1,
      "name": "mini",
      "chart": {"dim": 2, "time": false},
      "metric": {"builtin": "euclidean"},
      "force": {"kind": "potential", "potential": "x1"},
      "fields": {"v": ["1", "0"]},
      "sample": {"lower": [-1, -1], "upper": [1, 1], "count": 50},
      "checks": [{"name": "ir", "kind": "intermediate_residual", "field": "v"}]
    })");
}

ErrorKind parse_error_kind(const json& doc) {
    try {
        parse_scenario(doc);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "accepted: " << doc.dump();
    return ErrorKind::NonFinite;
}

const CheckResult& check_named(const ResidualReport& r, std::string_view name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    throw std::runtime_error("no check " + std::string(name));
}

}  // namespace

TEST(Scenarios, BundledScenariosRun) {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(scenario_dir())) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        const Scenario sc = load_scenario(entry.path());
        EXPECT_EQ(sc.name, entry.path().stem().string());
        EXPECT_EQ(sc.digest.size(), 64u);
        const ResidualReport r = run_scenario(sc, RunOptions{.threads = 2});
        EXPECT_EQ(r.all_passed(), sc.name != "zero-density") << r.to_json().dump(2);
    }
    EXPECT_GE(count, 9u);
}

TEST(Scenarios, SteadyRotation) {
    const Scenario sc = load_scenario(scenario_dir() / "steady-rotation.json");
    const ResidualReport r = run_scenario(sc);
    EXPECT_EQ(r.seed, 7u);
    EXPECT_LE(check_named(r, "intermediate").max_norm, 1e-10);
    EXPECT_EQ(check_named(r, "intermediate").samples, 1000u);
    EXPECT_LE(check_named(r, "euler_vs_intermediate").max_norm, 1e-12);
    EXPECT_LT(check_named(r, "flow_lift").max_norm, 1e-6);
}

TEST(Scenarios, ZeroDensityIsReportedAsError) {
    const ResidualReport r = run_scenario(load_scenario(scenario_dir() / "zero-density.json"));
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_EQ(r.checks[0].status, CheckStatus::Error);
    EXPECT_NE(r.checks[0].message.find("ZeroDensity"), std::string::npos) << r.checks[0].message;
    EXPECT_FALSE(r.all_passed());
}

TEST(Scenarios, ToleranceOverride) {
    const Scenario sc = load_scenario(scenario_dir() / "flrw-decay.json");
    const ResidualReport loose = run_scenario(sc);
    ASSERT_TRUE(loose.all_passed());
    // a negative tolerance can only be met by nothing
    const ResidualReport strict = run_scenario(sc, RunOptions{.tolerance = -1.0});
    for (const auto& c : strict.checks) EXPECT_EQ(c.status, CheckStatus::Fail) << c.name;
}

TEST(Scenarios, ReportIsIndependentOfThreadCount) {
    for (const char* name : {"steady-rotation.json", "flrw-decay.json", "boosted-relativistic.json"}) {
        const Scenario sc = load_scenario(scenario_dir() / name);
        const std::string one = run_scenario(sc, RunOptions{.threads = 1}).digest();
        EXPECT_EQ(run_scenario(sc, RunOptions{.threads = 2}).digest(), one) << name;
        EXPECT_EQ(run_scenario(sc, RunOptions{.threads = 4}).digest(), one) << name;
    }
}

TEST(Scenarios, SeedChangesSamplePoints) {
    const Scenario sc = load_scenario(scenario_dir() / "steady-rotation.json");
    const ResidualReport a = run_scenario(sc, RunOptions{.seed = 1});
    const ResidualReport b = run_scenario(sc, RunOptions{.seed = 2});
    EXPECT_NE(a.digest(), b.digest());
    EXPECT_EQ(a.digest(), run_scenario(sc, RunOptions{.seed = 1}).digest());
}

TEST(Scenarios, DigestTracksDocument) {
    const json doc = minimal();
    EXPECT_EQ(parse_scenario(doc).digest, parse_scenario(json::parse(doc.dump())).digest);
    json other = doc;
    other["force"]["potential"] = "x2";
    EXPECT_NE(parse_scenario(doc).digest, parse_scenario(other).digest);
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Validation, RejectsBadDocuments) {
    json d = minimal();
    d["schema_version"] = 2;
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);

    d = minimal();
    d.erase("metric");
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);

    d = minimal();
    d["checks"][0]["kind"] = "nonsense";
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);

    d = minimal();
    d["checks"][0]["field"] = "w";
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);

    d = minimal();
    d["fields"]["v"] = json::array({"1"});
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);

    d = minimal();
    d["checks"].push_back({{"name", "e"}, {"kind", "euler"}});
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);

    d = minimal();
    d["metric"] = {{"builtin", "torus"}};
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);

    d = minimal();
    d["sample"]["lower"] = json::array({-1});
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ValidationError);
}

TEST(Validation, ExpressionErrors) {
    json d = minimal();
    d["force"]["potential"] = "x1 + * 2";
    EXPECT_EQ(parse_error_kind(d), ErrorKind::ParseError);

    d = minimal();
    d["fields"]["v"] = json::array({"t", "0"});
    EXPECT_EQ(parse_error_kind(d), ErrorKind::UnknownVariable);

    EXPECT_THROW(load_scenario(scenario_dir() / "does-not-exist.json"), Error);
}

TEST(Report, JsonAndCsv) {
    const ResidualReport r = run_scenario(parse_scenario(minimal()));
    const auto j = r.to_json();
    EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(j["scenario"], "mini");
    EXPECT_EQ(j["report_digest"], r.digest());
    // potential x1 against the constant field (1, 0) leaves residual (1, 0)
    EXPECT_EQ(j["passed"], false);
    EXPECT_DOUBLE_EQ(j["checks"][0]["max_norm"].get<double>(), 1.0);
    EXPECT_EQ(j["checks"][0]["status"], "fail");

    std::istringstream csv(r.to_csv());
    std::string header;
    std::string row;
    std::getline(csv, header);
    std::getline(csv, row);
    EXPECT_EQ(header.rfind("check,kind,status", 0), 0u) << header;
    EXPECT_EQ(row.rfind("ir,intermediate_residual,fail", 0), 0u) << row;
}

TEST(Report, PairwiseSumAndClassify) {
    std::vector<double> ones(1000, 0.1);
    EXPECT_NEAR(pairwise_sum(ones), 100.0, 1e-12);
    EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
    EXPECT_EQ(classify(1e-11, 1e-10), CheckStatus::Pass);
    EXPECT_EQ(classify(1e-10, 1e-10), CheckStatus::Pass);
    EXPECT_EQ(classify(2e-10, 1e-10), CheckStatus::Fail);
    EXPECT_EQ(classify(std::numeric_limits<double>::quiet_NaN(), 1.0), CheckStatus::Fail);
}

TEST(Trajectories, CsvOutput) {
    const Scenario sc = load_scenario(scenario_dir() / "flrw-decay.json");
    const Trajectory tr = run_trajectory(sc, sc.trajectory("comoving"));
    ASSERT_TRUE(tr.complete());
    EXPECT_EQ(tr.states.size(), 1001u);
    std::ostringstream out;
    write_trajectory_csv(out, sc.metric, tr);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "s,x0,x1,xdot0,xdot1,T,tdot");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 1001u);
}

TEST(Identities, BuiltinSuitesPass) {
    for (const auto& [name, dim] :
         std::vector<std::pair<std::string, int>>{{"polar", 2}, {"warped", 3}, {"flrw-sphere", 3}, {"minkowski", 2}}) {
        const ResidualReport r = run_identities(name, dim, 40, 3, 2);
        EXPECT_TRUE(r.all_passed()) << r.to_json().dump(2);
        EXPECT_EQ(r.digest(), run_identities(name, dim, 40, 3, 1).digest());
    }
}

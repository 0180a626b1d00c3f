#include "fluidint/scenario.hpp"

#include "fluidint/dsl.hpp"
#include "fluidint/errors.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

namespace fluidint {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ValidationError, what); }

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) invalid(fmt::format("{}: missing '{}'", where, key));
    return obj.at(key);
}

Vec to_vec(const json& arr, std::size_t n, const std::string& where) {
    if (!arr.is_array() || arr.size() != n) invalid(fmt::format("{}: expected an array of {} numbers", where, n));
    Vec v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!arr[i].is_number()) invalid(where + ": expected numbers");
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

std::vector<std::vector<std::string>> to_matrix(const json& m, std::size_t n, const std::string& where) {
    if (!m.is_array() || m.size() != n) invalid(fmt::format("{}: expected a {}x{} matrix", where, n, n));
    std::vector<std::vector<std::string>> out;
    for (const auto& row : m) {
        if (!row.is_array() || row.size() != n) invalid(fmt::format("{}: expected a {}x{} matrix", where, n, n));
        auto& r = out.emplace_back();
        for (const auto& c : row) r.push_back(c.is_number() ? fmt::format("{}", c.get<double>()) : c.get<std::string>());
    }
    return out;
}

std::string expr_text(const json& j) {
    if (j.is_number()) return fmt::format("{}", j.get<double>());
    return j.get<std::string>();
}

struct ParsedMetric {
    MetricField metric;
    std::optional<MetricField> spatial;
    std::optional<ScaleFactor> scale;
};

MetricField parse_plain_metric(const json& spec, const std::vector<std::string>& vars, const std::string& where) {
    MetricField g;
    if (spec.contains("builtin")) {
        g = builtin_metric(spec.at("builtin").get<std::string>(), static_cast<int>(vars.size()));
    } else if (spec.contains("components")) {
        g = expression_metric(to_matrix(spec.at("components"), vars.size(), where + ".components"), vars);
    } else {
        invalid(where + ": expected 'builtin' or 'components'");
    }
    if (spec.contains("signature")) {
        g.signature = spec.at("signature").get<std::vector<int>>();
    }
    return g;
}

ParsedMetric parse_metric(const json& spec, const std::vector<std::string>& vars, bool has_time) {
    std::vector<std::string> spatial_vars(vars.begin() + (has_time ? 1 : 0), vars.end());
    if (spec.contains("product")) {
        if (!has_time) invalid("metric.product needs a chart with time");
        MetricField gs = parse_plain_metric(spec.at("product"), spatial_vars, "metric.product");
        return ParsedMetric{product_metric(gs), gs, std::nullopt};
    }
    if (spec.contains("flrw")) {
        if (!has_time) invalid("metric.flrw needs a chart with time");
        const json& f = spec.at("flrw");
        MetricField h = parse_plain_metric(require(f, "h", "metric.flrw"), spatial_vars, "metric.flrw.h");
        ScaleFactor a = ScaleFactor::from_expr(parse_expr(expr_text(require(f, "a", "metric.flrw"))));
        return ParsedMetric{flrw_metric(h, a), h, a};
    }
    return ParsedMetric{parse_plain_metric(spec, vars, "metric"), std::nullopt, std::nullopt};
}

ForceForm parse_force(const json& spec, const std::vector<std::string>& vars, int dim) {
    const std::string kind = spec.value("kind", "none");
    if (kind == "none") return ForceForm::zero(dim);
    if (kind == "potential") {
        return ForceForm::exact(scalar_from_text(expr_text(require(spec, "potential", "force")), vars));
    }
    if (kind == "pressure") {
        return ForceForm::integrable(scalar_from_text(expr_text(require(spec, "pressure", "force")), vars),
                                     scalar_from_text(expr_text(require(spec, "density", "force")), vars));
    }
    if (kind == "lorentz") {
        const auto F = to_matrix(require(spec, "F", "force"), static_cast<std::size_t>(dim), "force.F");
        std::vector<std::vector<ScalarField>> comps;
        for (const auto& row : F) {
            auto& r = comps.emplace_back();
            for (const auto& c : row) r.push_back(scalar_from_text(c, vars));
        }
        return lorentz_force(dim, std::function<Mat(const Point&)>([comps, dim](const Point& x) {
            Mat m(dim, dim);
            for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dim; ++j) m(i, j) = comps[i][j](x);
            }
            return m;
        }));
    }
    if (kind == "components") {
        const json& c = require(spec, "components", "force");
        if (!c.is_array() || c.size() != static_cast<std::size_t>(dim)) invalid("force.components: wrong length");
        std::vector<std::string> texts;
        for (const auto& e : c) texts.push_back(expr_text(e));
        const VectorField f = field_from_text(texts, vars);
        ForceForm out;
        out.dim = dim;
        out.components = [f](const State& s) { return f(s.x); };
        out.label = f.label;
        return out;
    }
    invalid("force.kind '" + kind + "' is not one of none, potential, pressure, lorentz, components");
}

const std::set<std::string>& point_check_kinds() {
    static const std::set<std::string> kinds{
        "intermediate_residual", "prolongation_defect", "vorticity_gap",       "euler",
        "bernoulli",             "bernoulli_from_euler", "euler_vs_intermediate", "time_split",
        "relativistic_orthogonality", "hamilton_jacobi", "lagrangian_defect",   "metric_compatibility"};
    return kinds;
}

const std::set<std::string>& other_check_kinds() {
    static const std::set<std::string> kinds{"relativistic_defect", "energy_drift", "tdot_drift", "flow_lift"};
    return kinds;
}

ScalarField sum_scalars(const ScalarField& a, const ScalarField& b) {
    ScalarField s;
    s.dim = a.dim;
    s.value = [a, b](const Point& x) { return a(x) + b(x); };
    s.gradient = [a, b](const Point& x) { return (a.partials(x) + b.partials(x)).eval(); };
    s.label = a.label + " + " + b.label;
    return s;
}

}  // namespace

const VectorField& Scenario::field(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end()) invalid("unknown field '" + key + "'");
    return it->second;
}

const ScalarField& Scenario::scalar(const std::string& key) const {
    auto it = scalars.find(key);
    if (it == scalars.end()) invalid("unknown scalar '" + key + "'");
    return it->second;
}

const TrajectorySpec& Scenario::trajectory(const std::string& key) const {
    for (const auto& t : trajectories) {
        if (t.name == key) return t;
    }
    invalid("unknown trajectory '" + key + "'");
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

Scenario parse_scenario(const json& doc) {
    try {
        Scenario sc;
        sc.source = doc;
        sc.digest = sha256_hex(doc.dump());

        const int version = require(doc, "schema_version", "scenario").get<int>();
        if (version != kScenarioSchemaVersion) invalid(fmt::format("unsupported schema_version {}", version));
        sc.name = doc.value("name", "unnamed");

        const json& chart = require(doc, "chart", "scenario");
        sc.dim = require(chart, "dim", "chart").get<int>();
        sc.has_time = chart.value("time", false);
        if (sc.dim < 1 || (sc.has_time && sc.dim < 2)) invalid("chart.dim too small");
        sc.variables = chart_variables(sc.dim, sc.has_time);
        const auto n = static_cast<std::size_t>(sc.dim);

        ParsedMetric pm = parse_metric(require(doc, "metric", "scenario"), sc.variables, sc.has_time);
        sc.metric = pm.metric;
        sc.spatial_metric = pm.spatial;
        sc.scale_factor = pm.scale;

        sc.base_force = parse_force(doc.value("force", json::object()), sc.variables, sc.dim);
        const std::string constraint = doc.value("constraint", "none");
        if (constraint == "none") {
            sc.constraint = ConstraintChoice::None;
            sc.system_force = sc.base_force;
            sc.system = newton_field(sc.metric, sc.base_force);
        } else if (constraint == "time") {
            if (!sc.has_time) invalid("constraint 'time' needs a chart with time");
            sc.constraint = ConstraintChoice::Time;
            const ConstrainedSystem cs = time_constrain(sc.metric, sc.base_force, 0);
            sc.system_force = cs.modified_force;
            sc.system = cs.field();
        } else if (constraint == "relativistic") {
            sc.constraint = ConstraintChoice::Relativistic;
            const ConstrainedSystem cs = relativistic_correction(sc.metric, sc.base_force);
            sc.system_force = cs.modified_force;
            sc.system = cs.field();
        } else {
            invalid("constraint must be none, time or relativistic");
        }

        if (doc.contains("fields")) {
            for (const auto& [key, comps] : doc.at("fields").items()) {
                std::vector<std::string> texts;
                for (const auto& c : comps) texts.push_back(expr_text(c));
                // spatial velocities on a time chart have dim - 1 components
                const auto n = static_cast<std::size_t>(sc.dim);
                if (texts.size() != n && !(sc.has_time && texts.size() + 1 == n)) {
                    invalid(fmt::format("field '{}' has {} components on a {}-dimensional chart", key, texts.size(), n));
                }
                VectorField f = field_from_text(texts, sc.variables);
                f.label = key;
                sc.fields.emplace(key, std::move(f));
            }
        }
        if (doc.contains("scalars")) {
            for (const auto& [key, e] : doc.at("scalars").items()) {
                ScalarField s = scalar_from_text(expr_text(e), sc.variables);
                s.label = key;
                sc.scalars.emplace(key, std::move(s));
            }
        }

        if (doc.contains("fluid")) {
            const json& f = doc.at("fluid");
            const std::string regime = require(f, "regime", "fluid").get<std::string>();
            FluidScenario fs;
            fs.velocity = sc.field(require(f, "velocity", "fluid").get<std::string>());
            fs.pressure = sc.scalar(require(f, "pressure", "fluid").get<std::string>());
            if (regime == "steady" || regime == "relativistic") {
                fs.regime = regime == "steady" ? Regime::Steady : Regime::Relativistic;
                fs.metric = sc.metric;
                if (fs.velocity.out_dim != sc.dim) invalid("fluid.velocity must have chart dimension");
            } else if (regime == "unsteady_static" || regime == "flrw") {
                fs.regime = regime == "flrw" ? Regime::Flrw : Regime::UnsteadyStatic;
                if (!sc.spatial_metric) invalid("fluid regime " + regime + " needs a product or FLRW metric");
                if ((fs.regime == Regime::Flrw) != sc.scale_factor.has_value()) {
                    invalid("fluid regime " + regime + " does not match the metric");
                }
                fs.metric = *sc.spatial_metric;
                fs.scale_factor = sc.scale_factor;
                if (fs.velocity.out_dim != sc.dim - 1) invalid("fluid.velocity must have the spatial dimension");
            } else {
                invalid("fluid.regime must be steady, unsteady_static, flrw or relativistic");
            }
            if (fs.regime == Regime::Relativistic) {
                fs.density = sum_scalars(sc.scalar(require(f, "energy_density", "fluid").get<std::string>()),
                                         fs.pressure);
            } else {
                fs.density = sc.scalar(require(f, "density", "fluid").get<std::string>());
            }
            if (f.contains("body_force")) {
                if (fs.regime != Regime::Steady) invalid("fluid.body_force is only supported for steady flows");
                fs.body_force = parse_force(f.at("body_force"), sc.variables, sc.dim);
            }
            sc.fluid = std::move(fs);
        }

        const json& sample = require(doc, "sample", "scenario");
        sc.sample.lower = to_vec(require(sample, "lower", "sample"), n, "sample.lower");
        sc.sample.upper = to_vec(require(sample, "upper", "sample"), n, "sample.upper");
        sc.sample.velocity_lower = sample.contains("velocity_lower")
                                       ? to_vec(sample.at("velocity_lower"), n, "sample.velocity_lower")
                                       : Vec::Constant(sc.dim, -1.0).eval();
        sc.sample.velocity_upper = sample.contains("velocity_upper")
                                       ? to_vec(sample.at("velocity_upper"), n, "sample.velocity_upper")
                                       : Vec::Constant(sc.dim, 1.0).eval();
        sc.sample.count = sample.value("count", std::size_t{1000});
        sc.sample.seed = sample.value("seed", std::uint64_t{1});

        if (doc.contains("trajectories")) {
            for (const auto& t : doc.at("trajectories")) {
                TrajectorySpec ts;
                ts.name = require(t, "name", "trajectory").get<std::string>();
                ts.x0 = to_vec(require(t, "x0", "trajectory " + ts.name), n, "trajectory.x0");
                if (t.contains("field")) {
                    ts.field = t.at("field").get<std::string>();
                    sc.field(*ts.field);
                    ts.xdot0 = sc.field(*ts.field)(ts.x0);
                } else {
                    ts.xdot0 = to_vec(require(t, "xdot0", "trajectory " + ts.name), n, "trajectory.xdot0");
                }
                ts.t_end = t.value("t_end", 1.0);
                ts.dt = t.value("dt", 1e-3);
                sc.trajectories.push_back(std::move(ts));
            }
        }

        std::set<std::string> names;
        for (const auto& c : require(doc, "checks", "scenario")) {
            CheckSpec cs;
            cs.name = require(c, "name", "check").get<std::string>();
            cs.kind = require(c, "kind", "check " + cs.name).get<std::string>();
            cs.tolerance = c.value("tol", 1e-10);
            cs.args = c;
            if (!names.insert(cs.name).second) invalid("duplicate check name '" + cs.name + "'");
            if (!point_check_kinds().contains(cs.kind) && !other_check_kinds().contains(cs.kind)) {
                invalid("check '" + cs.name + "' has unknown kind '" + cs.kind + "'");
            }
            if (c.contains("field")) sc.field(c.at("field").get<std::string>());
            if (c.contains("trajectory")) sc.trajectory(c.at("trajectory").get<std::string>());
            for (const char* key : {"action", "potential"}) {
                if (c.contains(key)) sc.scalar(c.at(key).get<std::string>());
            }
            const bool needs_fluid = cs.kind == "euler" || cs.kind == "bernoulli" ||
                                     cs.kind == "bernoulli_from_euler" || cs.kind == "euler_vs_intermediate" ||
                                     cs.kind == "time_split" || cs.kind == "relativistic_orthogonality";
            if (needs_fluid && !sc.fluid) invalid("check '" + cs.name + "' needs a fluid block");
            sc.checks.push_back(std::move(cs));
        }
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ValidationError, std::string("malformed scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ValidationError, "cannot open scenario " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ValidationError, path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

}  // namespace fluidint

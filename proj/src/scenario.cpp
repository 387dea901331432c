#include "ablab/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ablab/error.hpp"

namespace ablab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ValidationError("scenario " + origin + ": " + what);
}

const json& member(const json& obj, const std::string& origin, const std::string& path,
                   const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(origin, path + " is missing required key '" + key + "'");
    }
    return *it;
}

void expect_object(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_object()) {
        fail(origin, path + " must be an object");
    }
}

// Strictness lives here: every object's keys are checked against the full
// list its section understands.
void check_keys(const json& obj, const std::string& origin, const std::string& path,
                const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            fail(origin, path + " has unknown key '" + item.key() + "'");
        }
    }
}

double as_number(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_number()) {
        fail(origin, where + " must be a number");
    }
    return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        fail(origin, where + " must be a non-negative integer");
    }
    return j.get<std::size_t>();
}

Vec3 as_vec3(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_array() || j.size() != 3) {
        fail(origin, where + " must be an array of three numbers");
    }
    return {as_number(j[0], origin, where), as_number(j[1], origin, where),
            as_number(j[2], origin, where)};
}

double opt_number(const json& obj, const std::string& origin, const std::string& path,
                  const std::string& key, double fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, origin, path + "." + key);
}

std::size_t opt_count(const json& obj, const std::string& origin, const std::string& path,
                      const std::string& key, std::size_t fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_count(*it, origin, path + "." + key);
}

Vec3 opt_vec3(const json& obj, const std::string& origin, const std::string& path,
              const std::string& key, const Vec3& fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_vec3(*it, origin, path + "." + key);
}

Source parse_source(const json& j, const std::string& origin) {
    expect_object(j, origin, "source");
    const json& kind_j = member(j, origin, "source", "kind");
    if (!kind_j.is_string()) {
        fail(origin, "source.kind must be a string");
    }
    const std::string kind = kind_j.get<std::string>();

    if (kind == "loop") {
        check_keys(j, origin, "source",
                   {"kind", "radius", "center", "normal", "charge_density", "speed",
                    "current"});
        const double radius = as_number(member(j, origin, "source", "radius"), origin,
                                        "source.radius");
        const Vec3 center = opt_vec3(j, origin, "source", "center", {0, 0, 0});
        const Vec3 normal = opt_vec3(j, origin, "source", "normal", {0, 0, 1});
        const bool has_split = j.contains("charge_density") || j.contains("speed");
        const bool has_current = j.contains("current");
        if (has_split && has_current) {
            fail(origin, "source specifies both current and charge_density/speed");
        }
        if (has_current) {
            return CurrentLoop::with_current(
                radius, center, normal,
                as_number(j["current"], origin, "source.current"));
        }
        if (!j.contains("charge_density") || !j.contains("speed")) {
            fail(origin, "source needs either current or both charge_density and speed");
        }
        return CurrentLoop(radius, center, normal,
                           as_number(j["charge_density"], origin, "source.charge_density"),
                           as_number(j["speed"], origin, "source.speed"));
    }

    if (kind == "coil") {
        check_keys(j, origin, "source",
                   {"kind", "major_radius", "minor_radius", "loop_count", "center",
                    "axis", "charge_density", "liquid_speed", "ampere_turns"});
        const double major = as_number(member(j, origin, "source", "major_radius"),
                                       origin, "source.major_radius");
        const double minor = as_number(member(j, origin, "source", "minor_radius"),
                                       origin, "source.minor_radius");
        const std::size_t count = as_count(member(j, origin, "source", "loop_count"),
                                           origin, "source.loop_count");
        const Vec3 center = opt_vec3(j, origin, "source", "center", {0, 0, 0});
        const Vec3 axis = opt_vec3(j, origin, "source", "axis", {0, 0, 1});
        const bool has_split = j.contains("charge_density") || j.contains("liquid_speed");
        const bool has_turns = j.contains("ampere_turns");
        if (has_split && has_turns) {
            fail(origin, "source specifies both ampere_turns and charge_density/liquid_speed");
        }
        if (has_turns) {
            return ToroidalCoil::with_ampere_turns(
                major, minor, count,
                as_number(j["ampere_turns"], origin, "source.ampere_turns"), center,
                axis);
        }
        if (!j.contains("charge_density") || !j.contains("liquid_speed")) {
            fail(origin,
                 "source needs either ampere_turns or both charge_density and liquid_speed");
        }
        return ToroidalCoil(
            major, minor, count,
            as_number(j["charge_density"], origin, "source.charge_density"),
            as_number(j["liquid_speed"], origin, "source.liquid_speed"), center, axis);
    }

    if (kind == "inert_ring") {
        check_keys(j, origin, "source",
                   {"kind", "radius", "tube_radius", "total_flux", "center", "axis",
                    "mode", "discrete_loop_count"});
        const double radius = as_number(member(j, origin, "source", "radius"), origin,
                                        "source.radius");
        const double tube = as_number(member(j, origin, "source", "tube_radius"), origin,
                                      "source.tube_radius");
        const double flux = as_number(member(j, origin, "source", "total_flux"), origin,
                                      "source.total_flux");
        const Vec3 center = opt_vec3(j, origin, "source", "center", {0, 0, 0});
        const Vec3 axis = opt_vec3(j, origin, "source", "axis", {0, 0, 1});
        RingMode mode = RingMode::analytic;
        if (j.contains("mode")) {
            if (!j["mode"].is_string()) {
                fail(origin, "source.mode must be a string");
            }
            const std::string m = j["mode"].get<std::string>();
            if (m == "analytic") {
                mode = RingMode::analytic;
            } else if (m == "discrete") {
                mode = RingMode::discrete;
            } else {
                fail(origin, "source.mode must be 'analytic' or 'discrete', got '" + m + "'");
            }
        }
        if (j.contains("discrete_loop_count") && mode == RingMode::analytic) {
            fail(origin, "source.discrete_loop_count only applies to discrete mode");
        }
        const std::size_t count = opt_count(j, origin, "source", "discrete_loop_count", 360);
        return InertFluxRing(radius, tube, flux, center, axis, mode, count);
    }

    fail(origin, "source.kind must be 'loop', 'coil' or 'inert_ring', got '" + kind + "'");
}

std::pair<BeamGeometry, SlitPairing> parse_beam(const json& j, const std::string& origin) {
    expect_object(j, origin, "beam");
    check_keys(j, origin, "beam",
               {"source_point", "screen_center", "screen_x", "slit_center",
                "slit_separation", "phase_gradient", "pairing"});
    SlitPairing pairing = SlitPairing::cross_set;
    if (j.contains("pairing")) {
        if (!j["pairing"].is_string()) {
            fail(origin, "beam.pairing must be a string");
        }
        const std::string p = j["pairing"].get<std::string>();
        if (p == "cross_set") {
            pairing = SlitPairing::cross_set;
        } else if (p == "same_set") {
            pairing = SlitPairing::same_set;
        } else {
            fail(origin, "beam.pairing must be 'cross_set' or 'same_set', got '" + p + "'");
        }
    }
    BeamGeometry geom(
        as_vec3(member(j, origin, "beam", "source_point"), origin, "beam.source_point"),
        as_vec3(member(j, origin, "beam", "screen_center"), origin, "beam.screen_center"),
        as_vec3(member(j, origin, "beam", "screen_x"), origin, "beam.screen_x"),
        as_vec3(member(j, origin, "beam", "slit_center"), origin, "beam.slit_center"),
        as_number(member(j, origin, "beam", "slit_separation"), origin,
                  "beam.slit_separation"),
        as_number(member(j, origin, "beam", "phase_gradient"), origin,
                  "beam.phase_gradient"));
    return {geom, pairing};
}

Numerics parse_numerics(const json& j, const std::string& origin) {
    expect_object(j, origin, "numerics");
    check_keys(j, origin, "numerics",
               {"quadrature_tol", "near_wire_epsilon", "charge", "beam_speed",
                "samples_per_segment", "ensemble_size", "pattern_samples", "time_steps"});
    Numerics n;
    n.quadrature_tol = opt_number(j, origin, "numerics", "quadrature_tol", n.quadrature_tol);
    n.near_wire_epsilon =
        opt_number(j, origin, "numerics", "near_wire_epsilon", n.near_wire_epsilon);
    n.charge = opt_number(j, origin, "numerics", "charge", n.charge);
    n.beam_speed = opt_number(j, origin, "numerics", "beam_speed", n.beam_speed);
    n.samples_per_segment =
        opt_count(j, origin, "numerics", "samples_per_segment", n.samples_per_segment);
    n.ensemble_size = opt_count(j, origin, "numerics", "ensemble_size", n.ensemble_size);
    n.pattern_samples =
        opt_count(j, origin, "numerics", "pattern_samples", n.pattern_samples);
    n.time_steps = opt_count(j, origin, "numerics", "time_steps", n.time_steps);
    if (!(n.quadrature_tol > 0.0)) {
        fail(origin, "numerics.quadrature_tol must be positive");
    }
    if (!(n.near_wire_epsilon > 0.0)) {
        fail(origin, "numerics.near_wire_epsilon must be positive");
    }
    if (n.samples_per_segment < 2) {
        fail(origin, "numerics.samples_per_segment must be at least 2");
    }
    if (n.ensemble_size < 1) {
        fail(origin, "numerics.ensemble_size must be at least 1");
    }
    if (n.time_steps < 3) {
        fail(origin, "numerics.time_steps must be at least 3");
    }
    return n;
}

GridSpec parse_grid(const json& j, const std::string& origin) {
    expect_object(j, origin, "grid");
    check_keys(j, origin, "grid", {"min", "max", "counts"});
    GridSpec g{as_vec3(member(j, origin, "grid", "min"), origin, "grid.min"),
               as_vec3(member(j, origin, "grid", "max"), origin, "grid.max"),
               {0, 0, 0}};
    const json& counts = member(j, origin, "grid", "counts");
    if (!counts.is_array() || counts.size() != 3) {
        fail(origin, "grid.counts must be an array of three positive integers");
    }
    for (int i = 0; i < 3; ++i) {
        g.counts[i] = as_count(counts[i], origin, "grid.counts");
        if (g.counts[i] < 1) {
            fail(origin, "grid.counts entries must be at least 1");
        }
    }
    const double mins[3] = {g.minimum.x, g.minimum.y, g.minimum.z};
    const double maxs[3] = {g.maximum.x, g.maximum.y, g.maximum.z};
    for (int i = 0; i < 3; ++i) {
        if (!(mins[i] <= maxs[i])) {
            fail(origin, "grid.min must not exceed grid.max");
        }
    }
    return g;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json source_to_json(const Source& source) {
    json j;
    if (const auto* loop = std::get_if<CurrentLoop>(&source)) {
        j["kind"] = "loop";
        j["radius"] = loop->radius;
        j["center"] = vec3_to_json(loop->center);
        j["normal"] = vec3_to_json(loop->normal);
        j["charge_density"] = loop->charge_density;
        j["speed"] = loop->speed;
    } else if (const auto* coil = std::get_if<ToroidalCoil>(&source)) {
        j["kind"] = "coil";
        j["major_radius"] = coil->major_radius;
        j["minor_radius"] = coil->minor_radius;
        j["loop_count"] = coil->loop_count;
        j["center"] = vec3_to_json(coil->center);
        j["axis"] = vec3_to_json(coil->axis);
        j["charge_density"] = coil->charge_density;
        j["liquid_speed"] = coil->liquid_speed;
    } else {
        const auto& ring = std::get<InertFluxRing>(source);
        j["kind"] = "inert_ring";
        j["radius"] = ring.radius;
        j["tube_radius"] = ring.tube_radius;
        j["total_flux"] = ring.total_flux;
        j["center"] = vec3_to_json(ring.center);
        j["axis"] = vec3_to_json(ring.axis);
        j["mode"] = ring.mode == RingMode::analytic ? "analytic" : "discrete";
        if (ring.mode == RingMode::discrete) {
            j["discrete_loop_count"] = ring.discrete_coil().loop_count;
        }
    }
    return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("invalid JSON: ") + e.what());
    }
    expect_object(root, origin, "document");
    check_keys(root, origin, "document", {"name", "source", "beam", "numerics", "grid"});

    std::string name;
    if (root.contains("name")) {
        if (!root["name"].is_string()) {
            fail(origin, "name must be a string");
        }
        name = root["name"].get<std::string>();
    }

    Source source = parse_source(member(root, origin, "document", "source"), origin);

    std::optional<BeamGeometry> beam;
    SlitPairing pairing = SlitPairing::cross_set;
    if (root.contains("beam")) {
        auto [geom, p] = parse_beam(root["beam"], origin);
        beam = geom;
        pairing = p;
    }

    Numerics numerics;
    if (root.contains("numerics")) {
        numerics = parse_numerics(root["numerics"], origin);
    }

    std::optional<GridSpec> grid;
    if (root.contains("grid")) {
        grid = parse_grid(root["grid"], origin);
    }

    return Scenario{std::move(name), std::move(source), std::move(beam), pairing,
                    numerics, std::move(grid)};
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("scenario " + path.string() + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string scenario_to_json(const Scenario& scenario) {
    json root;
    if (!scenario.name.empty()) {
        root["name"] = scenario.name;
    }
    root["source"] = source_to_json(scenario.source);
    if (scenario.beam) {
        json b;
        b["source_point"] = vec3_to_json(scenario.beam->source_point);
        b["screen_center"] = vec3_to_json(scenario.beam->screen_center);
        b["screen_x"] = vec3_to_json(scenario.beam->screen_x);
        b["slit_center"] = vec3_to_json(scenario.beam->slit_center);
        b["slit_separation"] = scenario.beam->slit_separation;
        b["phase_gradient"] = scenario.beam->phase_gradient;
        b["pairing"] =
            scenario.pairing == SlitPairing::cross_set ? "cross_set" : "same_set";
        root["beam"] = b;
    }
    json n;
    n["quadrature_tol"] = scenario.numerics.quadrature_tol;
    n["near_wire_epsilon"] = scenario.numerics.near_wire_epsilon;
    n["charge"] = scenario.numerics.charge;
    n["beam_speed"] = scenario.numerics.beam_speed;
    n["samples_per_segment"] = scenario.numerics.samples_per_segment;
    n["ensemble_size"] = scenario.numerics.ensemble_size;
    n["pattern_samples"] = scenario.numerics.pattern_samples;
    n["time_steps"] = scenario.numerics.time_steps;
    root["numerics"] = n;
    if (scenario.grid) {
        json g;
        g["min"] = vec3_to_json(scenario.grid->minimum);
        g["max"] = vec3_to_json(scenario.grid->maximum);
        g["counts"] = json::array({scenario.grid->counts[0], scenario.grid->counts[1],
                                   scenario.grid->counts[2]});
        root["grid"] = g;
    }
    return root.dump(2) + "\n";
}

ExperimentOptions experiment_options(const Scenario& scenario) {
    ExperimentOptions o;
    o.pairing = scenario.pairing;
    o.beam_speed = scenario.numerics.beam_speed;
    o.samples_per_segment = scenario.numerics.samples_per_segment;
    o.ensemble_size = scenario.numerics.ensemble_size;
    o.pattern_samples = scenario.numerics.pattern_samples;
    o.charge = scenario.numerics.charge;
    o.tol = scenario.numerics.quadrature_tol;
    o.near_wire_epsilon = scenario.numerics.near_wire_epsilon;
    return o;
}

}  // namespace ablab

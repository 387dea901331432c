#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "ablab/interference.hpp"
#include "ablab/sources.hpp"

namespace ablab {

// Regular evaluation lattice for field maps. A count of 1 collapses that
// axis to its minimum coordinate.
struct GridSpec {
    Vec3 minimum;
    Vec3 maximum;
    std::array<std::size_t, 3> counts;
};

// Numerical knobs, all optional in the file with these defaults.
struct Numerics {
    double quadrature_tol = 1e-10;
    double near_wire_epsilon = kNearWireEpsilon;
    double charge = -1.0;
    double beam_speed = 0.01;
    std::size_t samples_per_segment = 17;
    std::size_t ensemble_size = 1;
    std::size_t pattern_samples = 768;
    std::size_t time_steps = 10000;
};

struct Scenario {
    std::string name;
    Source source;
    std::optional<BeamGeometry> beam;
    SlitPairing pairing;
    Numerics numerics;
    std::optional<GridSpec> grid;
};

// Parse a scenario from JSON text. The schema is strict: unknown keys,
// missing required keys, and type mismatches all throw ValidationError
// naming the offending location. origin appears in error messages.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<memory>");

Scenario load_scenario(const std::filesystem::path& path);

// Serialize back to JSON. parse_scenario(scenario_to_json(s)) reproduces s
// exactly (numbers are emitted with round-trip precision).
std::string scenario_to_json(const Scenario& scenario);

// Bundle the scenario's numerics into options for simulate_experiment.
ExperimentOptions experiment_options(const Scenario& scenario);

}  // namespace ablab

#pragma once

#include <cstddef>
#include <vector>

#include "ablab/phase.hpp"
#include "ablab/sources.hpp"

namespace ablab {

// Which pair of slit waypoints the two-path experiment uses. cross_set sends
// one path through the source's hole and one outside (the pair links the
// ring once); same_set sends both outside (no linking, the control arm).
enum class SlitPairing { cross_set, same_set };

// Two-path beam layout. Both paths start at source_point, end at
// screen_center, and pass through one slit waypoint each; the slits sit on
// the line through slit_center along screen_x, spaced by slit_separation.
// phase_gradient is the geometric phase ramp across the screen in radians
// per unit length, so the fringe period is 2 pi / phase_gradient.
struct BeamGeometry {
    Vec3 source_point;
    Vec3 screen_center;
    Vec3 screen_x;  // unit, fringe axis
    Vec3 slit_center;
    double slit_separation;
    double phase_gradient;

    BeamGeometry(const Vec3& source_point_, const Vec3& screen_center_,
                 const Vec3& screen_x_, const Vec3& slit_center_,
                 double slit_separation_, double phase_gradient_);
};

struct BeamPair {
    Trajectory a;  // through the hole for cross_set
    Trajectory b;
};

// Piecewise-straight trajectories for the chosen pairing:
//   cross_set: a through slit_center, b displaced by one slit separation;
//   same_set:  a displaced by one separation, b by one and a half.
BeamPair build_beam_pair(const BeamGeometry& geom, SlitPairing pairing,
                         double beam_speed = 0.01,
                         std::size_t samples_per_segment = 17);

// Intensity profile on the screen. Positions span a whole number of fringe
// periods centered on zero so that the profile is exactly periodic across
// its ends (which the shift measurement below relies on).
struct InterferencePattern {
    std::vector<double> positions;
    std::vector<double> intensities;
    double fringe_period;
};

// Two-beam pattern 2 (1 + contrast cos(g x + delta_phi)) for unit-amplitude
// beams. Rejects sampling below 16 points per period.
InterferencePattern two_beam_pattern(double delta_phi, double fringe_period,
                                     std::size_t n_samples = 768,
                                     int span_periods = 6, double contrast = 1.0);

// Fringe displacement as a fraction of a period, reduced to (-0.5, 0.5].
double fringe_shift_fraction(double delta_phi);

// Recover the fringe displacement between two patterns on identical grids by
// circular cross-correlation with three-point peak interpolation, returned as
// a fraction of a period in (-0.5, 0.5]. This is a measurement on intensity
// data only; it knows nothing about how the patterns were produced.
double measure_fringe_shift(const InterferencePattern& reference,
                            const InterferencePattern& shifted);

struct ExperimentOptions {
    SlitPairing pairing = SlitPairing::cross_set;
    double beam_speed = 0.01;
    std::size_t samples_per_segment = 17;
    std::size_t ensemble_size = 1;
    std::size_t pattern_samples = 768;
    double charge = -1.0;
    double tol = 1e-10;
    double near_wire_epsilon = kNearWireEpsilon;
};

// Phase stage of the experiment on its own: build the pairing's beam pair,
// validate its topology against the source core, and accumulate the phase
// difference (including the liquid's backreaction when the source is a
// coil). The topological flux route is attached when the source has one.
PhaseResult beam_pair_phase(const Source& source, const BeamGeometry& geom,
                            const ExperimentOptions& options = {});

struct ExperimentResult {
    PhaseResult pair_phase;      // base (central) trajectory pair
    double delta_phi_effective;  // ensemble-resultant phase on the screen
    double contrast;             // ensemble-resultant fringe visibility
    double expected_shift;       // fringe_shift_fraction(delta_phi_effective)
    double measured_shift;       // recovered from the synthetic patterns
    InterferencePattern reference;
    InterferencePattern shifted;
};

// Full synthetic run: build the beam pair, verify its topology matches the
// requested pairing (cross_set must link the source core exactly once,
// same_set not at all), accumulate the phase difference (including the
// liquid's backreaction when the source is a coil), form reference and
// shifted patterns, and measure the shift back from the patterns.
//
// ensemble_size > 1 averages over electrons entering at slightly different
// transverse offsets (a deterministic ladder spanning +-5% of the slit
// separation); the patterns then carry the resultant phase and a reduced
// contrast.
ExperimentResult simulate_experiment(const Source& source, const BeamGeometry& geom,
                                     const ExperimentOptions& options = {});

}  // namespace ablab

#pragma once

#include <optional>

#include "ablab/sources.hpp"

namespace ablab {

// Point particle state for interaction and phase computations. Charge defaults
// to the electron's, -1 in units of |e|. Speeds are fractions of c; the
// treatment here is non-relativistic, so construction rejects |v| >= 1 and
// warns above 0.1.
struct ElectronState {
    Vec3 position;
    Vec3 velocity;
    double charge = -1.0;

    ElectronState(const Vec3& position_, const Vec3& velocity_, double charge_ = -1.0);
};

// Accumulated quantum phase, split into the pieces that make it up. The
// interaction term is the phase a charge picks up from the source's vector
// potential; the backreaction term is the phase contributed by the source's
// own response (zero for inert sources by definition). flux_term carries the
// topological prediction (linking number times per-ring flux) when the source
// has a well-defined one, as an independent route to the same number.
struct PhaseResult {
    double total = 0.0;
    double interaction_term = 0.0;
    double backreaction_term = 0.0;
    std::optional<double> flux_term;
    double error_estimate = 0.0;
};

struct PathPhaseResult {
    double value;
    double error_estimate;
};

// Phase contribution of one trajectory: -charge * int A . dx along the
// piecewise-straight path, by adaptive quadrature on each chord. The velocity
// samples never enter; v dt is exactly dx along the path. tol is the absolute
// error budget for the whole path, split across chords by length.
//
// Not available for the analytic-mode inert ring (no pointwise A); use
// phase_difference, which falls back to the topological route.
PathPhaseResult path_phase(const Trajectory& traj, const Source& source,
                           double charge = -1.0, double tol = 1e-10,
                           double near_wire_epsilon = kNearWireEpsilon);

// Closed contour formed by walking l1 forward and l2 backward. Sample times
// are synthetic (the contour is pure geometry). Requires the two paths to
// share endpoints within 1e-9.
Trajectory pair_contour(const Trajectory& l1, const Trajectory& l2);

// Phase difference between two trajectories with shared endpoints,
// path_phase(l1) - path_phase(l2). With the default electron charge and a
// pair whose closed contour links an inert ring once along its axis, the
// total is +|charge| * flux.
//
// For field-evaluable sources the difference is computed by path integration
// and, when the source has a core circle and finite per-ring flux, the
// topological flux_term is attached as a cross-check. For the analytic-mode
// inert ring the topological route *is* the result (exact, zero quadrature
// error).
PhaseResult phase_difference(const Trajectory& l1, const Trajectory& l2,
                             const Source& source, double charge = -1.0,
                             double tol = 1e-10,
                             double near_wire_epsilon = kNearWireEpsilon);

// Circulation of A around the rim of the disk versus the flux of B through
// it. The two should agree by Stokes' theorem; the residual is the absolute
// difference, which quantifies the joint consistency of the closed-form
// fields and both quadratures.
struct StokesCheck {
    double circulation;
    double flux;
    double flux_error;
    double residual;
};

StokesCheck stokes_residual(const Source& source, const Disk& disk,
                            double tol = 1e-8,
                            double near_wire_epsilon = kNearWireEpsilon);

}  // namespace ablab

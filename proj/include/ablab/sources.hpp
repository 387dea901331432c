#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "ablab/geometry.hpp"
#include "ablab/quadrature.hpp"
#include "ablab/vec3.hpp"

namespace ablab {

// Default exclusion distance around wires, as a fraction of the wire loop
// radius. Field requests closer than this throw NearWireError.
inline constexpr double kNearWireEpsilon = 1e-6;

struct PotentialField {
    Vec3 A;
    Vec3 B;
};

struct FieldSample {
    Vec3 position;
    Vec3 A;
    Vec3 B;
};

// Circular filamentary loop carrying the current of a charged liquid of linear
// charge density rho moving at speed v, so I = rho * v. Current circulates
// counterclockwise around the unit normal (right-hand sense). An orthonormal
// in-plane frame is fixed at construction so every evaluation and quadrature
// parameterizes the wire identically.
struct CurrentLoop {
    double radius;
    Vec3 center;
    Vec3 normal;          // unit
    double charge_density;
    double speed;
    Vec3 e1, e2;          // in-plane frame, e1 x e2 = normal

    CurrentLoop(double radius_, const Vec3& center_, const Vec3& normal_,
                double charge_density_, double speed_);

    // Plain current loop when the liquid split does not matter.
    static CurrentLoop with_current(double radius, const Vec3& center,
                                    const Vec3& normal, double current);

    double current() const { return charge_density * speed; }
    Vec3 wire_point(double angle) const;
    Vec3 wire_tangent(double angle) const;  // unit, direction of current flow
    double wire_distance(const Vec3& p) const;
};

// Closed-form loop fields via complete elliptic integrals, with a power-series
// branch near the axis where the elliptic combinations lose digits to
// cancellation. Relative accuracy ~1e-12 away from the wire.
Vec3 loop_vector_potential(const CurrentLoop& loop, const Vec3& p,
                           double near_wire_epsilon = kNearWireEpsilon);
Vec3 loop_magnetic_field(const CurrentLoop& loop, const Vec3& p,
                         double near_wire_epsilon = kNearWireEpsilon);

// Brute-force check values: adaptive quadrature of the line-integral
// definitions A = I oint dl / r and B = I oint dl x (p - l) / |p - l|^3.
// Slow and simple on purpose; this is the reference the closed forms are
// validated against.
PotentialField biot_savart_reference(const CurrentLoop& loop, const Vec3& p,
                                     double tol = 1e-12,
                                     double near_wire_epsilon = kNearWireEpsilon);

// Toroidal assembly of loop_count identical loops: loop k is a circle of
// radius minor_radius in the meridional half-plane at azimuth 2 pi k / N,
// centered major_radius away from the axis, its normal pointing along the
// azimuthal direction. The superposition confines the field to the torus tube
// (up to winding-discreteness leakage that dies off rapidly with N).
struct ToroidalCoil {
    double major_radius;
    double minor_radius;
    std::size_t loop_count;
    double charge_density;
    double liquid_speed;
    Vec3 center;
    Vec3 axis;  // unit

    ToroidalCoil(double major_radius_, double minor_radius_, std::size_t loop_count_,
                 double charge_density_, double liquid_speed_,
                 const Vec3& center_ = {}, const Vec3& axis_ = {0, 0, 1});

    // Same geometry but with the per-loop current chosen so that
    // loop_count * I equals ampere_turns, for like-for-like comparisons
    // across different winding counts.
    static ToroidalCoil with_ampere_turns(double major_radius, double minor_radius,
                                          std::size_t loop_count, double ampere_turns,
                                          const Vec3& center = {},
                                          const Vec3& axis = {0, 0, 1});

    double loop_current() const { return charge_density * liquid_speed; }
    const std::vector<CurrentLoop>& loops() const { return loops_; }
    CircleSpec centerline() const { return {center, axis, major_radius}; }

private:
    std::vector<CurrentLoop> loops_;
};

Vec3 coil_vector_potential(const ToroidalCoil& coil, const Vec3& p,
                           double near_wire_epsilon = kNearWireEpsilon);
Vec3 coil_magnetic_field(const ToroidalCoil& coil, const Vec3& p,
                         double near_wire_epsilon = kNearWireEpsilon);

// Flux of the coil's field through a meridional disk placed around the tube
// between two windings, by 1-d circulation of A around the disk rim (equal by
// Stokes, and much cheaper than the area integral). Used for calibration.
double coil_ring_flux(const ToroidalCoil& coil, double probe_radius_factor = 3.0,
                      double tol = 1e-9);

// Idealized flux ring: a torus-shaped inert source characterized only by the
// total flux threading its tube. In analytic mode phases come from topology
// alone (linking number times flux) and no field evaluation is offered. In
// discrete mode the ring delegates to an internal 360-loop ToroidalCoil whose
// current is calibrated so its tube flux reproduces total_flux.
enum class RingMode { analytic, discrete };

struct InertFluxRing {
    double radius;       // centerline radius
    double tube_radius;  // minor radius of the idealized tube
    double total_flux;
    Vec3 center;
    Vec3 axis;  // unit
    RingMode mode;

    InertFluxRing(double radius_, double tube_radius_, double total_flux_,
                  const Vec3& center_ = {}, const Vec3& axis_ = {0, 0, 1},
                  RingMode mode_ = RingMode::analytic,
                  std::size_t discrete_loop_count = 360);

    CircleSpec centerline() const { return {center, axis, radius}; }
    const ToroidalCoil& discrete_coil() const;

private:
    std::optional<ToroidalCoil> coil_;
};

// Exact phase-determining flux for a closed path around an inert ring:
// linking number times the ring's total flux. No quadrature involved.
double ring_phase_flux(const InertFluxRing& ring, const Trajectory& closed_path);

// Flux of the source's field through a flat disk by 2-d adaptive quadrature
// in polar coordinates on the disk. Returns the value and the quadrature's
// own error estimate.
struct FluxResult {
    double value;
    double error_estimate;
};

// Any of the three source kinds, for code that does not care which one it is
// pointing a beam at.
using Source = std::variant<CurrentLoop, ToroidalCoil, InertFluxRing>;

FluxResult flux_through_disk(const Source& source, const Disk& disk,
                             double tol = 1e-9,
                             double near_wire_epsilon = kNearWireEpsilon);

// True when A and B can be evaluated pointwise (everything except the
// analytic-mode inert ring).
bool field_evaluable(const Source& source);

Vec3 vector_potential(const Source& source, const Vec3& p,
                      double near_wire_epsilon = kNearWireEpsilon);
Vec3 magnetic_field(const Source& source, const Vec3& p,
                    double near_wire_epsilon = kNearWireEpsilon);

// The circle a trajectory pair can link: the source's centerline. Empty for a
// bare loop (its "per-ring flux" diverges logarithmically at the wire, so no
// finite flux-per-linking exists).
std::optional<CircleSpec> core_circle(const Source& source);

// Flux intercepted per unit linking number, when finite: the inert ring's
// total_flux, or a coil's tube flux from coil_ring_flux.
std::optional<double> ring_flux(const Source& source);

namespace detail {

// Internal cylindrical-component evaluation of a unit loop at a point (s, z)
// in the loop frame, exposed so tests can pin the series/elliptic crossover.
struct LoopComponents {
    double A_phi;
    double B_s;
    double B_z;
};

enum class LoopRoute { automatic, series, elliptic };

LoopComponents loop_components(double radius, double current, double s, double z,
                               LoopRoute route = LoopRoute::automatic);

}  // namespace detail

}  // namespace ablab

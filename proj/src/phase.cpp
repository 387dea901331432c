#include "ablab/phase.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <utility>
#include <vector>

#include "ablab/error.hpp"
#include "ablab/linking.hpp"
#include "ablab/quadrature.hpp"

namespace ablab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEndpointTolerance = 1e-9;

// int A . dx along one straight chord, as a 1-d quadrature in the chord
// parameter. d is the full chord vector, so the dx Jacobian is just d.
double chord_phase_integral(const Source& source, const Vec3& p0, const Vec3& d,
                            double abs_tol, double eps, double* error_acc) {
    const QuadratureResult q = integrate_1d(
        [&](double s) {
            const Vec3 a = vector_potential(source, p0 + d * s, eps);
            return dot(a, d);
        },
        0.0, 1.0, abs_tol);
    *error_acc += q.error_estimate;
    return q.value;
}

}  // namespace

ElectronState::ElectronState(const Vec3& position_, const Vec3& velocity_, double charge_)
    : position(position_), velocity(velocity_), charge(charge_) {
    if (!std::isfinite(charge)) {
        throw ValidationError("ElectronState: charge must be finite");
    }
    const double speed = norm(velocity);
    if (speed >= 1.0) {
        throw ValidationError("ElectronState: speed must be below 1 (units of c), got " +
                              std::to_string(speed));
    }
    if (speed > 0.1) {
        std::cerr << "ElectronState: speed " << speed
                  << " strains the non-relativistic treatment\n";
    }
}

PathPhaseResult path_phase(const Trajectory& traj, const Source& source, double charge,
                           double tol, double near_wire_epsilon) {
    if (!std::isfinite(charge)) {
        throw ValidationError("path_phase: charge must be finite");
    }
    if (!(tol > 0.0)) {
        throw ValidationError("path_phase: tolerance must be positive");
    }
    if (!field_evaluable(source)) {
        throw ValidationError(
            "path_phase: source has no pointwise fields; use phase_difference, which "
            "falls back to the linking-number route");
    }
    if (charge == 0.0) {
        return {0.0, 0.0};
    }

    const auto& samples = traj.samples();
    double total_length = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        total_length += norm(samples[i + 1].position - samples[i].position);
    }
    if (total_length == 0.0) {
        return {0.0, 0.0};
    }

    const double charge_mag = std::abs(charge);
    double integral = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const Vec3 p0 = samples[i].position;
        const Vec3 d = samples[i + 1].position - p0;
        const double len = norm(d);
        if (len == 0.0) {
            continue;
        }
        const double chord_tol = tol * (len / total_length) / charge_mag;
        integral += chord_phase_integral(source, p0, d, chord_tol, near_wire_epsilon, &error);
    }
    return {-charge * integral, charge_mag * error};
}

Trajectory pair_contour(const Trajectory& l1, const Trajectory& l2) {
    const double start_gap = norm(l1.start() - l2.start());
    const double end_gap = norm(l1.end() - l2.end());
    if (start_gap > kEndpointTolerance || end_gap > kEndpointTolerance) {
        throw ValidationError("pair_contour: trajectories must share endpoints (gaps " +
                              std::to_string(start_gap) + ", " + std::to_string(end_gap) +
                              ")");
    }

    std::vector<Vec3> points;
    points.reserve(l1.size() + l2.size() + 1);
    for (const auto& s : l1.samples()) {
        points.push_back(s.position);
    }
    const auto& back = l2.samples();
    for (auto it = back.rbegin(); it != back.rend(); ++it) {
        points.push_back(it->position);
    }
    // Snap shut: the endpoint tolerance above is looser than the closed-path
    // tolerance, so finish exactly where we started.
    points.push_back(points.front());

    // Times are synthetic; the contour is pure geometry. Velocities are set to
    // the outgoing chord slope so the consistency check stays quiet.
    std::vector<TrajectorySample> samples;
    samples.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t j = (i + 1 < points.size()) ? i + 1 : i;
        const Vec3 v = (j == i) ? samples.back().velocity : points[j] - points[i];
        samples.push_back({static_cast<double>(i), points[i], v});
    }
    return Trajectory(std::move(samples), /*closed=*/true);
}

PhaseResult phase_difference(const Trajectory& l1, const Trajectory& l2,
                             const Source& source, double charge, double tol,
                             double near_wire_epsilon) {
    PhaseResult result;

    const std::optional<CircleSpec> core = core_circle(source);
    const std::optional<double> per_ring = ring_flux(source);

    if (!field_evaluable(source)) {
        // Analytic-mode inert ring: the phase difference is purely
        // topological, -charge * (linking number) * flux, with no quadrature.
        if (!core || !per_ring) {
            throw ValidationError("phase_difference: source supports neither path "
                                  "integration nor the topological route");
        }
        const Trajectory contour = pair_contour(l1, l2);
        const int link = linking_number(contour, *core);
        result.total = -charge * static_cast<double>(link) * (*per_ring);
        result.interaction_term = result.total;
        result.backreaction_term = 0.0;
        result.flux_term = result.total;
        result.error_estimate = 0.0;
        return result;
    }

    const PathPhaseResult p1 = path_phase(l1, source, charge, tol * 0.5, near_wire_epsilon);
    const PathPhaseResult p2 = path_phase(l2, source, charge, tol * 0.5, near_wire_epsilon);
    result.total = p1.value - p2.value;
    result.interaction_term = result.total;
    result.backreaction_term = 0.0;
    result.error_estimate = p1.error_estimate + p2.error_estimate;

    if (core && per_ring) {
        const Trajectory contour = pair_contour(l1, l2);
        const int link = linking_number(contour, *core);
        result.flux_term = -charge * static_cast<double>(link) * (*per_ring);
    }
    return result;
}

StokesCheck stokes_residual(const Source& source, const Disk& disk, double tol,
                            double near_wire_epsilon) {
    if (!(tol > 0.0)) {
        throw ValidationError("stokes_residual: tolerance must be positive");
    }
    const OrthoBasis basis = orthonormal_basis(disk.unit_normal);
    const auto rim_point = [&](double alpha) {
        return disk.center +
               (basis.e1 * std::cos(alpha) + basis.e2 * std::sin(alpha)) * disk.radius;
    };
    const auto rim_tangent = [&](double alpha) {
        return basis.e2 * std::cos(alpha) - basis.e1 * std::sin(alpha);
    };

    // Coarse probe fixes the absolute tolerance for the circulation.
    double probe = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double alpha = 2.0 * kPi * (k + 0.5) / 16.0;
        const Vec3 a = vector_potential(source, rim_point(alpha), near_wire_epsilon);
        probe = std::max(probe, std::abs(dot(a, rim_tangent(alpha))));
    }
    const double circ_scale = std::max(probe * disk.radius * 2.0 * kPi, 1e-30);

    const QuadratureResult circ = integrate_1d(
        [&](double alpha) {
            const Vec3 a = vector_potential(source, rim_point(alpha), near_wire_epsilon);
            return dot(a, rim_tangent(alpha)) * disk.radius;
        },
        0.0, 2.0 * kPi, 0.5 * tol * circ_scale);

    const FluxResult flux = flux_through_disk(source, disk, 0.5 * tol, near_wire_epsilon);
    return {circ.value, flux.value, flux.error_estimate,
            std::abs(circ.value - flux.value)};
}

}  // namespace ablab

#include "ablab/backreaction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ablab/error.hpp"
#include "ablab/quadrature.hpp"

namespace ablab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_electron_clearance(const CurrentLoop& loop, const ElectronState& e) {
    const double dist = loop.wire_distance(e.position);
    if (dist < kNearWireEpsilon * loop.radius) {
        throw NearWireError("electron at distance " + std::to_string(dist) +
                                " is inside the wire exclusion zone",
                            dist);
    }
}

// Derivative at t of the quadratic through three samples. Reduces to the
// familiar central / one-sided three-point stencils on a uniform grid.
double quadratic_derivative(double ta, double fa, double tb, double fb, double tc,
                            double fc, double t) {
    return fa * (2.0 * t - tb - tc) / ((ta - tb) * (ta - tc)) +
           fb * (2.0 * t - ta - tc) / ((tb - ta) * (tb - tc)) +
           fc * (2.0 * t - ta - tb) / ((tc - ta) * (tc - tb));
}

}  // namespace

Vec3 electron_vector_potential(const ElectronState& electron, const Vec3& point) {
    const double r = norm(point - electron.position);
    if (r == 0.0) {
        throw DomainError("electron_vector_potential: field point coincides with the charge");
    }
    return electron.velocity * (electron.charge / r);
}

double electron_circulation(const CurrentLoop& loop, const ElectronState& electron,
                            double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError("electron_circulation: tolerance must be positive");
    }
    check_electron_clearance(loop, electron);

    const auto integrand = [&](double phi) {
        const Vec3 a = electron_vector_potential(electron, loop.wire_point(phi));
        return dot(a, loop.wire_tangent(phi)) * loop.radius;
    };

    // Trapezoid sums over a period converge spectrally for analytic periodic
    // integrands; double the sample count until two consecutive levels agree.
    constexpr int kStart = 32;
    constexpr int kMax = 1 << 16;
    double sum = 0.0;
    double peak = 0.0;
    for (int k = 0; k < kStart; ++k) {
        const double f = integrand(2.0 * kPi * k / kStart);
        sum += f;
        peak = std::max(peak, std::abs(f));
    }
    if (peak == 0.0) {
        return 0.0;
    }
    double value = sum * 2.0 * kPi / kStart;
    for (int n = kStart; n <= kMax; n *= 2) {
        // Refine by adding the midpoints of the current grid.
        for (int k = 0; k < n; ++k) {
            const double f = integrand(2.0 * kPi * (k + 0.5) / n);
            sum += f;
            peak = std::max(peak, std::abs(f));
        }
        const double refined = sum * kPi / n;
        const double change = std::abs(refined - value);
        value = refined;
        if (change <= tol * peak * 2.0 * kPi) {
            return value;
        }
    }
    throw ConvergenceError("electron_circulation: trapezoid refinement stalled", value,
                           tol * peak * 2.0 * kPi);
}

double interaction_lagrangian(const CurrentLoop& loop, const ElectronState& electron,
                              double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError("interaction_lagrangian: tolerance must be positive");
    }
    check_electron_clearance(loop, electron);

    // charge * v_e . A_loop(x_e) with A_loop written out as the wire integral
    // I * a * int t / r dphi, so the whole thing is one quadrature.
    const auto integrand = [&](double phi) {
        const double r = norm(electron.position - loop.wire_point(phi));
        return dot(electron.velocity, loop.wire_tangent(phi)) / r;
    };

    double peak = 0.0;
    for (int k = 0; k < 32; ++k) {
        peak = std::max(peak, std::abs(integrand(2.0 * kPi * (k + 0.5) / 32.0)));
    }
    const double prefactor = electron.charge * loop.current() * loop.radius;
    if (peak == 0.0 || prefactor == 0.0) {
        return 0.0;
    }
    return prefactor *
           integrate_1d(integrand, 0.0, 2.0 * kPi, tol * peak * 2.0 * kPi).value;
}

double interaction_lagrangian_reciprocal(const CurrentLoop& loop,
                                         const ElectronState& electron,
                                         double near_wire_epsilon) {
    const Vec3 a = loop_vector_potential(loop, electron.position, near_wire_epsilon);
    return electron.charge * dot(electron.velocity, a);
}

double liquid_kinetic_energy_change(const CurrentLoop& loop,
                                    const ElectronState& electron, double tol) {
    // The liquid's momentum shifts by its charge density times the electron's
    // vector potential at the wire; to first order in the perturbation the
    // kinetic energy change is -rho v oint A_e . dl.
    return -loop.current() * electron_circulation(loop, electron, tol);
}

EmfChainResult emf_time_chain(const CurrentLoop& loop, const Trajectory& electron_path,
                              double charge, double tol) {
    const auto& samples = electron_path.samples();
    const std::size_t n = samples.size();
    if (n < 3) {
        throw ValidationError("emf_time_chain: need at least three samples");
    }

    std::vector<double> t(n);
    std::vector<double> flux(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = samples[i].t;
        const ElectronState e(samples[i].position, samples[i].velocity, charge);
        flux[i] = electron_circulation(loop, e, tol);
    }

    const double rho_v = loop.current();
    std::vector<double> emf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = (i == 0) ? 0 : (i == n - 1) ? n - 3 : i - 1;
        emf[i] = -quadratic_derivative(t[a], flux[a], t[a + 1], flux[a + 1], t[a + 2],
                                       flux[a + 2], t[i]);
    }

    EmfChainResult result;
    result.times = t;
    result.integrated.resize(n);
    result.closed_form.resize(n);
    result.integrated[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        result.integrated[i] =
            result.integrated[i - 1] +
            0.5 * (t[i] - t[i - 1]) * rho_v * (emf[i] + emf[i - 1]);
    }
    const double dt0 = -rho_v * flux[0];
    for (std::size_t i = 0; i < n; ++i) {
        result.closed_form[i] = -rho_v * flux[i] - dt0;
    }
    result.boundary_defect = std::abs(dt0);
    return result;
}

double coil_interaction_sum(const ToroidalCoil& coil, const ElectronState& electron,
                            double near_wire_epsilon) {
    const Vec3 a = coil_vector_potential(coil, electron.position, near_wire_epsilon);
    return electron.charge * dot(electron.velocity, a);
}

double coil_kinetic_sum(const ToroidalCoil& coil, const ElectronState& electron,
                        double tol) {
    double sum = 0.0;
    const auto& loops = coil.loops();
    for (std::size_t k = 0; k < loops.size(); ++k) {
        try {
            sum += -loops[k].current() * electron_circulation(loops[k], electron, tol);
        } catch (const NearWireError& err) {
            throw NearWireError(std::string(err.what()) + " (coil loop " +
                                    std::to_string(k) + ")",
                                err.distance, k);
        }
    }
    return sum;
}

PhaseResult coil_total_phase(const ToroidalCoil& coil, const Trajectory& electron_path,
                             double charge, double tol, double near_wire_epsilon) {
    if (!(tol > 0.0)) {
        throw ValidationError("coil_total_phase: tolerance must be positive");
    }
    const auto& samples = electron_path.samples();
    if (samples.size() < 2) {
        throw ValidationError("coil_total_phase: need at least two samples");
    }
    const double total_time = samples.back().t - samples.front().t;

    // Per-chord quadratures in the chord parameter; abs tolerance split so
    // each of the two phase integrals lands within tol overall.
    const double chord_tol = 0.5 * tol / total_time;

    PhaseResult result;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double dt = samples[i + 1].t - samples[i].t;
        const Vec3 p0 = samples[i].position;
        const Vec3 d = samples[i + 1].position - p0;
        const Vec3 vel = d / dt;

        // Inner tolerance for the per-loop circulations: comfortably below
        // the pointwise scale so the outer quadrature sees smooth values.
        const double inner_tol = 1e-15;

        const QuadratureResult qi = integrate_1d(
            [&](double s) {
                const ElectronState e(p0 + d * s, vel, charge);
                return -coil_interaction_sum(coil, e, near_wire_epsilon);
            },
            0.0, 1.0, chord_tol);
        const QuadratureResult qb = integrate_1d(
            [&](double s) {
                const ElectronState e(p0 + d * s, vel, charge);
                return -coil_kinetic_sum(coil, e, inner_tol);
            },
            0.0, 1.0, chord_tol);

        result.interaction_term += dt * qi.value;
        result.backreaction_term += dt * qb.value;
        result.error_estimate += dt * (qi.error_estimate + qb.error_estimate);
    }
    result.total = result.interaction_term + result.backreaction_term;
    return result;
}

}  // namespace ablab

#include "ablab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <variant>

#include "ablab/backreaction.hpp"
#include "ablab/csv.hpp"
#include "ablab/error.hpp"
#include "ablab/phase.hpp"

namespace ablab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) { return format_double(v); }

// A single loop standing in for the scenario's source, scaled like it: the
// loop itself, the first winding of a coil, or a unit-current circle on an
// analytic ring's centerline.
CurrentLoop representative_loop(const Source& source) {
    if (const auto* loop = std::get_if<CurrentLoop>(&source)) {
        return *loop;
    }
    if (const auto* coil = std::get_if<ToroidalCoil>(&source)) {
        return coil->loops().front();
    }
    const auto& ring = std::get<InertFluxRing>(source);
    if (ring.mode == RingMode::discrete) {
        return ring.discrete_coil().loops().front();
    }
    return CurrentLoop::with_current(ring.radius, ring.center, ring.axis, 1.0);
}

CheckResult skipped(const std::string& name, const std::string& why) {
    return {name, true, "skipped: " + why};
}

void stokes_check(std::vector<CheckResult>& out, const Source& source,
                  const std::string& name, const Disk& disk, double flux_floor) {
    const StokesCheck c = stokes_residual(source, disk, 1e-8);
    const double scale = std::max({std::abs(c.circulation), std::abs(c.flux), flux_floor});
    const bool ok = c.residual <= 1e-6 * scale;
    out.push_back({name, ok,
                   "circulation=" + num(c.circulation) + " flux=" + num(c.flux) +
                       " residual=" + num(c.residual) + " allowed=" + num(1e-6 * scale)});
}

std::vector<CheckResult> stokes_suite(const Source& source) {
    std::vector<CheckResult> out;
    if (!field_evaluable(source)) {
        out.push_back(skipped("stokes/fields",
                              "analytic-mode ring exposes no pointwise field"));
        return out;
    }

    if (const auto* loop = std::get_if<CurrentLoop>(&source)) {
        const double a = loop->radius;
        const double floor = 1e-9 * std::max(std::abs(loop->current()) * a, 1e-30);
        const OrthoBasis basis = orthonormal_basis(loop->normal);
        stokes_check(out, source, "stokes/coaxial_small",
                     Disk{loop->center + loop->normal * (0.3 * a), loop->normal, 0.5 * a},
                     floor);
        stokes_check(out, source, "stokes/coaxial_wide",
                     Disk{loop->center + loop->normal * (0.5 * a), loop->normal, 2.0 * a},
                     floor);
        stokes_check(out, source, "stokes/tilted",
                     Disk{loop->center + basis.e1 * (0.4 * a) + loop->normal * (0.6 * a),
                          normalized(loop->normal + basis.e1 * 0.6), 0.8 * a},
                     floor);
        return out;
    }

    const ToroidalCoil& coil = std::holds_alternative<ToroidalCoil>(source)
                                   ? std::get<ToroidalCoil>(source)
                                   : std::get<InertFluxRing>(source).discrete_coil();
    const double R = coil.major_radius;
    const double a = coil.minor_radius;
    const double n_loops = static_cast<double>(coil.loop_count);
    const double floor =
        1e-9 * std::max(std::abs(coil.loop_count * coil.loop_current()) * a, 1e-30);
    const OrthoBasis basis = orthonormal_basis(coil.axis);
    const double phi = kPi / n_loops;
    const Vec3 radial = basis.e1 * std::cos(phi) + basis.e2 * std::sin(phi);
    const Vec3 azimuthal = basis.e2 * std::cos(phi) - basis.e1 * std::sin(phi);
    // Keep the meridional disk clear of the neighboring windings, which pass
    // the mid-azimuth plane about R sin(pi/N) away.
    const double interior_radius = std::min(0.5 * a, 0.6 * R * std::sin(phi));
    stokes_check(out, source, "stokes/tube_interior",
                 Disk{coil.center + radial * R, azimuthal, interior_radius}, floor);
    stokes_check(out, source, "stokes/exterior",
                 Disk{coil.center - coil.axis * R, coil.axis, 2.0 * R}, floor);
    return out;
}

std::vector<CheckResult> cancellation_suite(const Source& source) {
    const CurrentLoop loop = representative_loop(source);
    const double a = loop.radius;

    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto random_direction = [&]() {
        // Marsaglia's method, rejection inside the unit disk.
        for (;;) {
            const double u = 2.0 * unit(rng) - 1.0;
            const double v = 2.0 * unit(rng) - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                const double f = 2.0 * std::sqrt(1.0 - s);
                return Vec3{u * f, v * f, 1.0 - 2.0 * s};
            }
        }
    };

    double worst_cancel = 0.0;
    double worst_routes = 0.0;
    for (int k = 0; k < 20; ++k) {
        Vec3 pos = loop.center;
        for (;;) {
            const double r = a * (1.6 + 2.4 * unit(rng));
            pos = loop.center + random_direction() * r;
            if (loop.wire_distance(pos) > 0.4 * a) {
                break;
            }
        }
        const Vec3 vel = random_direction() * (0.01 + 0.04 * unit(rng));
        const ElectronState e(pos, vel);

        const double l_direct = interaction_lagrangian(loop, e);
        const double l_recip = interaction_lagrangian_reciprocal(loop, e);
        const double dt = liquid_kinetic_energy_change(loop, e);
        worst_cancel =
            std::max(worst_cancel, std::abs(l_direct + dt) / std::max(std::abs(l_direct), 1e-30));
        worst_routes = std::max(worst_routes, std::abs(l_direct - l_recip) /
                                                  std::max(std::abs(l_recip), 1e-30));
    }

    std::vector<CheckResult> out;
    out.push_back({"cancellation/pointwise", worst_cancel <= 1e-12,
                   "worst |L_int + dT| / |L_int| = " + num(worst_cancel) +
                       " over 20 random electron states (allowed 1e-12)"});
    out.push_back({"cancellation/routes", worst_routes <= 1e-9,
                   "worst wire-quadrature vs closed-form L_int mismatch = " +
                       num(worst_routes) + " relative (allowed 1e-9)"});
    return out;
}

std::vector<CheckResult> confinement_suite(const Source& source) {
    double R = 0.0, a = 0.0, ampere_turns = 0.0;
    Vec3 center{0, 0, 0}, axis{0, 0, 1};
    std::size_t n_base = 0;
    if (const auto* coil = std::get_if<ToroidalCoil>(&source)) {
        R = coil->major_radius;
        a = coil->minor_radius;
        ampere_turns = static_cast<double>(coil->loop_count) * coil->loop_current();
        center = coil->center;
        axis = coil->axis;
        n_base = coil->loop_count;
    } else if (const auto* ring = std::get_if<InertFluxRing>(&source);
               ring != nullptr && ring->mode == RingMode::discrete) {
        const ToroidalCoil& c = ring->discrete_coil();
        R = c.major_radius;
        a = c.minor_radius;
        ampere_turns = static_cast<double>(c.loop_count) * c.loop_current();
        center = c.center;
        axis = c.axis;
        n_base = c.loop_count;
    } else {
        return {skipped("confinement/leakage", "source has no winding to refine")};
    }

    n_base = std::min<std::size_t>(n_base, 180);
    const std::size_t n_fine = 4 * n_base;
    const ToroidalCoil coarse =
        ToroidalCoil::with_ampere_turns(R, a, n_base, ampere_turns, center, axis);
    const ToroidalCoil fine =
        ToroidalCoil::with_ampere_turns(R, a, n_fine, ampere_turns, center, axis);

    const OrthoBasis basis = orthonormal_basis(axis);
    std::vector<Vec3> exterior;
    for (int k = 0; k < 8; ++k) {
        const double phi = 2.0 * kPi * (k + 0.37) / 8.0;
        exterior.push_back(center + (basis.e1 * std::cos(phi) + basis.e2 * std::sin(phi)) *
                                        (R + 2.5 * a));
    }
    exterior.push_back(center + axis * (0.5 * R));
    exterior.push_back(center - axis * (0.5 * R));

    double leak_coarse = 0.0;
    double leak_fine = 0.0;
    for (const Vec3& p : exterior) {
        leak_coarse = std::max(leak_coarse, norm(coil_magnetic_field(coarse, p)));
        leak_fine = std::max(leak_fine, norm(coil_magnetic_field(fine, p)));
    }

    const double phi_mid = kPi / static_cast<double>(n_fine);
    const Vec3 tube_center =
        center + (basis.e1 * std::cos(phi_mid) + basis.e2 * std::sin(phi_mid)) * R;
    const double interior = norm(coil_magnetic_field(fine, tube_center));

    std::vector<CheckResult> out;
    const double drop = leak_coarse / std::max(leak_fine, 1e-300);
    out.push_back({"confinement/leakage_drop", drop >= 10.0,
                   "worst exterior |B| " + num(leak_coarse) + " with " +
                       std::to_string(n_base) + " windings vs " + num(leak_fine) + " with " +
                       std::to_string(n_fine) + " (drop x" + num(drop) +
                       ", need >= x10)"});
    out.push_back({"confinement/exterior_small", leak_fine <= 1e-3 * interior,
                   "exterior |B| " + num(leak_fine) + " vs interior " + num(interior) +
                       " at " + std::to_string(n_fine) + " windings (allowed 1e-3 ratio)"});
    return out;
}

std::vector<CheckResult> chain_suite(const Source& source, std::size_t time_steps) {
    const CurrentLoop loop = representative_loop(source);
    const double a = loop.radius;
    const OrthoBasis basis = orthonormal_basis(loop.normal);
    const std::size_t steps = std::clamp<std::size_t>(time_steps, 1000, 10000);
    // Offset the flyby off the travel/normal plane: a path in that symmetry
    // plane sees an identically zero circulation, which would make every
    // ratio below meaningless.
    const Vec3 offset = basis.e2 * (0.8 * a) + loop.normal * (1.5 * a);
    const Trajectory flyby = Trajectory::straight(
        loop.center - basis.e1 * (30.0 * a) + offset,
        loop.center + basis.e1 * (30.0 * a) + offset, 0.02, steps);

    const EmfChainResult chain = emf_time_chain(loop, flyby);
    double peak = 0.0;
    for (const double v : chain.closed_form) {
        peak = std::max(peak, std::abs(v));
    }
    const double final_gap =
        std::abs(chain.integrated.back() - chain.closed_form.back());

    std::vector<CheckResult> out;
    out.push_back({"chain/integral_matches", final_gap <= 1e-6 * peak,
                   "integrated EMF vs closed-form kinetic change: gap " + num(final_gap) +
                       " against peak " + num(peak) + " over " + std::to_string(steps) +
                       " steps (allowed 1e-6 of peak)"});
    out.push_back({"chain/boundary_defect", chain.boundary_defect <= 6e-3 * peak,
                   "start-of-path kinetic offset " + num(chain.boundary_defect) +
                       " vs peak " + num(peak) + " (allowed 6e-3 of peak at 30 radii)"});
    return out;
}

}  // namespace

VerifySuite parse_suite(const std::string& name) {
    if (name == "stokes") {
        return VerifySuite::stokes;
    }
    if (name == "cancellation") {
        return VerifySuite::cancellation;
    }
    if (name == "confinement") {
        return VerifySuite::confinement;
    }
    if (name == "chain") {
        return VerifySuite::chain;
    }
    if (name == "all") {
        return VerifySuite::all;
    }
    throw ValidationError("unknown verification suite '" + name +
                          "' (expected stokes, cancellation, confinement, chain or all)");
}

std::vector<CheckResult> run_verification(const Scenario& scenario, VerifySuite suite) {
    std::vector<CheckResult> out;
    const auto append = [&](std::vector<CheckResult> v) {
        out.insert(out.end(), v.begin(), v.end());
    };
    if (suite == VerifySuite::stokes || suite == VerifySuite::all) {
        append(stokes_suite(scenario.source));
    }
    if (suite == VerifySuite::cancellation || suite == VerifySuite::all) {
        append(cancellation_suite(scenario.source));
    }
    if (suite == VerifySuite::confinement || suite == VerifySuite::all) {
        append(confinement_suite(scenario.source));
    }
    if (suite == VerifySuite::chain || suite == VerifySuite::all) {
        append(chain_suite(scenario.source, scenario.numerics.time_steps));
    }
    return out;
}

}  // namespace ablab

#include <cmath>
#include <vector>

#include <doctest.h>

#include "ablab/error.hpp"
#include "ablab/geometry.hpp"
#include "ablab/linking.hpp"
#include "ablab/phase.hpp"
#include "ablab/sources.hpp"
#include "ablab/vec3.hpp"

using namespace ablab;

namespace {

// Independent check value: midpoint-rule Riemann sum of -charge * A . dx
// along straight segments. Deliberately the dumbest possible integrator.
double midpoint_phase(const Source& src, const std::vector<Vec3>& waypoints,
                      double charge, int steps_per_segment) {
    double acc = 0.0;
    for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
        const Vec3 d = (waypoints[seg + 1] - waypoints[seg]) / double(steps_per_segment);
        for (int i = 0; i < steps_per_segment; ++i) {
            const Vec3 mid = waypoints[seg] + d * (i + 0.5);
            acc += dot(vector_potential(src, mid), d);
        }
    }
    return -charge * acc;
}

// The standard two-route pair used throughout: l1 straight down the ring
// axis, l2 the long way around at x = 2.5, sharing endpoints.
Trajectory route_through() {
    return Trajectory::straight({0, 0, -2}, {0, 0, 2}, 0.02, 16);
}

Trajectory route_around(double side = 2.5) {
    // 17 samples per segment: an odd count keeps every sample off the ring
    // plane z = 0, where crossing-counting would be ambiguous.
    return Trajectory::polyline(
        {{0, 0, -2}, {side, 0, -2}, {side, 0, 2}, {0, 0, 2}}, 0.02, 17);
}

}  // namespace

TEST_CASE("electron state validates its speed") {
    const ElectronState e({1, 2, 3}, {0.02, 0, 0});
    CHECK(e.charge == -1.0);
    CHECK(e.velocity.x == 0.02);
    CHECK_THROWS_AS(ElectronState({0, 0, 0}, {1.2, 0, 0}), ValidationError);
    CHECK_THROWS_AS(ElectronState({0, 0, 0}, {0.8, 0.8, 0}), ValidationError);
}

TEST_CASE("path phase matches a brute-force Riemann sum") {
    const Source loop{CurrentLoop::with_current(1.0, {}, {0, 0, 1}, 2.5)};
    const Vec3 a{-3, 0.8, 0.5}, b{3, 0.8, 0.5};
    const Trajectory path = Trajectory::straight(a, b, 0.02, 2);

    const PathPhaseResult got = path_phase(path, loop);
    const double oracle = midpoint_phase(loop, {a, b}, -1.0, 200000);

    REQUIRE(std::fabs(oracle) > 0.01);
    CHECK(std::fabs(got.value - oracle) / std::fabs(oracle) < 1e-6);
    CHECK(got.error_estimate < 1e-9);
    CHECK(got.error_estimate >= 0.0);
}

TEST_CASE("path phase is antisymmetric under reversal and linear in charge") {
    const Source loop{CurrentLoop::with_current(1.0, {}, {0, 0, 1}, 2.5)};
    const Trajectory path =
        Trajectory::polyline({{-2, 0.9, 0.3}, {0.5, 1.2, -0.4}, {2, 0.7, 0.8}}, 0.02, 9);

    const double phi = path_phase(path, loop).value;
    REQUIRE(std::fabs(phi) > 1e-3);

    const double rev = path_phase(path.reversed(), loop).value;
    CHECK(std::fabs(rev + phi) < 1e-12 * std::fabs(phi));

    // Flipping the charge's sign flips the phase exactly; scaling it scales
    // the phase (to within the two runs' quadrature budgets).
    CHECK(path_phase(path, loop, 1.0).value == -phi);
    const double tripled = path_phase(path, loop, -3.0).value;
    CHECK(std::fabs(tripled - 3.0 * phi) < 2e-9);
}

TEST_CASE("path phase is additive over concatenation") {
    const Source loop{CurrentLoop::with_current(1.0, {}, {0, 0, 1}, 2.5)};
    const Vec3 a{-2, 0.9, 0.3}, b{0.5, 1.2, -0.4}, c{2, 0.7, 0.8};

    const double whole =
        path_phase(Trajectory::polyline({a, b, c}, 0.02, 9), loop).value;
    const double first = path_phase(Trajectory::straight(a, b, 0.02, 9), loop).value;
    const double second = path_phase(Trajectory::straight(b, c, 0.02, 9), loop).value;
    CHECK(std::fabs(whole - (first + second)) < 1e-9);
}

TEST_CASE("analytic flux ring: the phase difference is the linked flux, exactly") {
    const double flux = 2.2;
    const Source ring{InertFluxRing(1.0, 0.1, flux)};
    const Trajectory l1 = route_through();
    const Trajectory l2 = route_around();

    // No pointwise fields exist, so single-path phases are refused...
    CHECK_THROWS_AS(path_phase(l1, ring), ValidationError);

    // ...but the two-path difference is pure topology. An electron (charge
    // -1) whose through-route links the ring once gains +|e| * flux relative
    // to the around-route.
    const PhaseResult res = phase_difference(l1, l2, ring);
    CHECK(res.total == flux);
    CHECK(res.interaction_term == flux);
    CHECK(res.backreaction_term == 0.0);
    REQUIRE(res.flux_term.has_value());
    CHECK(*res.flux_term == res.total);
    CHECK(res.error_estimate == 0.0);

    // Swapping the routes flips the linking; charge scales linearly.
    CHECK(phase_difference(l2, l1, ring).total == -flux);
    CHECK(phase_difference(l1, l2, ring, 2.0).total == -2.0 * flux);
}

TEST_CASE("discrete flux ring: the path-integral route recovers the linked flux") {
    const double flux = 2.2;
    const Source ring{
        InertFluxRing(1.0, 0.08, flux, {}, {0, 0, 1}, RingMode::discrete, 120)};
    const PhaseResult res = phase_difference(route_through(), route_around(), ring);

    // flux_term is the exact topological value; total came from two path
    // integrals over the calibrated winding's A. Their gap is bounded by the
    // calibration's and the paths' quadrature budgets.
    REQUIRE(res.flux_term.has_value());
    CHECK(*res.flux_term == flux);
    CHECK(std::fabs(res.total - *res.flux_term) < 5e-8);
    CHECK(res.backreaction_term == 0.0);
    CHECK(res.error_estimate < 1e-9);
}

TEST_CASE("discrete flux ring: phases only see topology, not the route taken") {
    const Source ring{
        InertFluxRing(1.0, 0.08, 2.2, {}, {0, 0, 1}, RingMode::discrete, 120)};
    // Two around-routes passing on opposite sides of the ring: same
    // endpoints, same (zero) linking, so the phase difference must vanish
    // even though each path has its own nonzero accumulated phase.
    const PhaseResult res =
        phase_difference(route_around(2.5), route_around(-2.5), ring);
    REQUIRE(res.flux_term.has_value());
    CHECK(*res.flux_term == 0.0);
    CHECK(std::fabs(res.total) < 1e-8);
}

TEST_CASE("bare loop source: no flux-per-linking, phases from the fields alone") {
    const Source loop{CurrentLoop::with_current(1.0, {}, {0, 0, 1}, 2.5)};
    const Trajectory l1 = route_through();
    const Trajectory l2 = route_around();

    const PhaseResult res = phase_difference(l1, l2, loop);
    CHECK(!res.flux_term.has_value());
    CHECK(res.interaction_term == res.total);
    CHECK(res.backreaction_term == 0.0);

    const double oracle =
        midpoint_phase(loop, {{0, 0, -2}, {0, 0, 2}}, -1.0, 50000) -
        midpoint_phase(loop, {{0, 0, -2}, {2.5, 0, -2}, {2.5, 0, 2}, {0, 0, 2}}, -1.0,
                       50000);
    CHECK(std::fabs(res.total - oracle) < 1e-6 * std::max(std::fabs(oracle), 0.01));
}

TEST_CASE("pair contour closes the two routes into one loop") {
    const Trajectory l1 = route_through();
    const Trajectory l2 = route_around();
    const Trajectory contour = pair_contour(l1, l2);

    CHECK(contour.closed());
    CHECK(norm(contour.start() - l1.start()) == 0.0);
    CHECK(norm(contour.end() - l1.start()) < 1e-12);
    CHECK(linking_number(contour, CircleSpec({0, 0, 0}, {0, 0, 1}, 1.0)) == 1);

    const Trajectory mismatched = Trajectory::straight({0, 0, -2}, {0.1, 0, 2}, 0.02, 8);
    CHECK_THROWS_AS(pair_contour(l1, mismatched), ValidationError);
    CHECK_THROWS_AS(
        phase_difference(l1, mismatched, Source{InertFluxRing(1.0, 0.1, 1.0)}),
        ValidationError);
}

TEST_CASE("circulation around a rim equals the flux through its disk") {
    const Source loop{CurrentLoop::with_current(1.0, {}, {0, 0, 1}, 1.7)};
    const StokesCheck check =
        stokes_residual(loop, Disk({0, 0, 0.3}, {0, 0, 1}, 0.5));

    CHECK(check.circulation > 0.0);
    CHECK(check.flux > 0.0);
    const double scale = std::max(std::fabs(check.circulation), std::fabs(check.flux));
    CHECK(check.residual < 1e-6 * scale);
    CHECK(check.residual == std::fabs(check.circulation - check.flux));
}

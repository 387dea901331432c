#include <cmath>
#include <numbers>

#include <doctest.h>

#include "ablab/error.hpp"
#include "ablab/quadrature.hpp"

using namespace ablab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("1-d quadrature integrates polynomials to machine precision") {
    // Gauss panels of degree 15 are exact for these; only roundoff remains.
    const auto cubic = [](double x) { return 3.0 * x * x * x - 2.0 * x + 1.0; };
    const QuadratureResult q = integrate_1d(cubic, 0.0, 2.0, 1e-12);
    // Antiderivative (3/4)x^4 - x^2 + x evaluated at 2: 12 - 4 + 2.
    CHECK(q.value == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(q.error_estimate <= 1e-12);
}

TEST_CASE("1-d quadrature handles oscillatory transcendental integrands") {
    // int_0^pi e^x sin(3x) dx = (3 e^pi + 3) / 10 by the standard
    // antiderivative e^x (sin bx - b cos bx) / (1 + b^2).
    const double exact = 0.3 * (std::exp(kPi) + 1.0);
    const QuadratureResult q = integrate_1d(
        [](double x) { return std::exp(x) * std::sin(3.0 * x); }, 0.0, kPi, 1e-12);
    CHECK(std::abs(q.value - exact) <= 1e-12);
    CHECK(std::abs(q.value - exact) <= 10.0 * std::max(q.error_estimate, 1e-16));
}

TEST_CASE("1-d quadrature resolves a narrow peak") {
    // Gaussian of width 0.02 centered off-middle; tails beyond [0, 1] are
    // below 1e-200, so the integral is sigma sqrt(2 pi).
    const double sigma = 0.02;
    const double exact = sigma * std::sqrt(2.0 * kPi);
    const QuadratureResult q = integrate_1d(
        [&](double x) {
            const double u = (x - 0.3) / sigma;
            return std::exp(-0.5 * u * u);
        },
        0.0, 1.0, 1e-12);
    CHECK(std::abs(q.value - exact) <= 1e-10 * exact);
    CHECK(q.panels > 1);
}

TEST_CASE("1-d quadrature rejects non-finite integrand values") {
    CHECK_THROWS_AS(
        integrate_1d([](double x) { return std::sqrt(x - 0.5); }, 0.0, 1.0, 1e-10),
        DomainError);
}

TEST_CASE("1-d quadrature reports convergence failure with its best estimate") {
    // |x - c|^-0.9 is integrable but too hard for bisection at this
    // tolerance; the thrown error must still carry a usable value. The
    // estimate undershoots (panels near the singularity never resolve their
    // mass) but must stay finite, positive and below the true integral.
    const double c = 1.0 / kPi;
    const double exact = (std::pow(c, 0.1) + std::pow(1.0 - c, 0.1)) / 0.1;
    try {
        integrate_1d([&](double x) { return std::pow(std::abs(x - c), -0.9); }, 0.0, 1.0,
                     1e-12);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.best_estimate > 0.0);
        CHECK(e.best_estimate < exact);
        CHECK(e.error_estimate > 0.0);
    }
}

TEST_CASE("1-d quadrature validates its tolerance") {
    CHECK_THROWS_AS(integrate_1d([](double x) { return x; }, 0.0, 1.0, 0.0),
                    ValidationError);
    CHECK_THROWS_AS(integrate_1d([](double x) { return x; }, 0.0, 1.0, -1e-9),
                    ValidationError);
}

TEST_CASE("1-d quadrature is deterministic") {
    const auto f = [](double x) { return std::cos(7.0 * x) / (1.1 + std::sin(x)); };
    const QuadratureResult a = integrate_1d(f, 0.0, 5.0, 1e-11);
    const QuadratureResult b = integrate_1d(f, 0.0, 5.0, 1e-11);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    CHECK(a.panels == b.panels);
}

TEST_CASE("2-d quadrature integrates separable polynomials") {
    const QuadratureResult q = integrate_2d(
        [](double x, double y) { return x * x * y * y * y; }, 0.0, 1.0, 0.0, 2.0, 1e-12);
    CHECK(q.value == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("2-d quadrature matches a closed-form trigonometric integral") {
    // int_0^{pi/2} int_0^{pi/2} sin(x + y) dx dy = 2.
    const QuadratureResult q = integrate_2d(
        [](double x, double y) { return std::sin(x + y); }, 0.0, 0.5 * kPi, 0.0,
        0.5 * kPi, 1e-11);
    CHECK(std::abs(q.value - 2.0) <= 1e-10);
}

TEST_CASE("2-d quadrature refines where the integrand is sharp") {
    // Lorentzian spike at an interior point; compare against a very tight
    // run of the same scheme only through the reported error estimate.
    const auto f = [](double x, double y) {
        const double dx = x - 0.3;
        const double dy = y - 0.7;
        return 1.0 / (dx * dx + dy * dy + 1e-3);
    };
    const QuadratureResult q = integrate_2d(f, 0.0, 1.0, 0.0, 1.0, 1e-9);
    const QuadratureResult tight = integrate_2d(f, 0.0, 1.0, 0.0, 1.0, 1e-12);
    CHECK(std::abs(q.value - tight.value) <= 1e-8);
    CHECK(q.panels > 16);
}

TEST_CASE("2-d quadrature throws when the panel budget runs out") {
    try {
        integrate_2d([](double x, double y) { return std::cos(40.0 * x * y); }, 0.0, 4.0,
                     0.0, 4.0, 1e-13, 8);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.error_estimate > 1e-13);
    }
}

#pragma once

#include <array>
#include <functional>

#include "ablab/error.hpp"

namespace ablab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;  // accepted panels (1-d) or processed panels (2-d)
};

// Adaptive bisection with 15-point Gauss-Legendre panels. A panel is accepted
// when the whole-panel value agrees with the sum of its two halves within the
// panel's share of the tolerance; the halves' sum is kept as the better
// estimate. Throws ConvergenceError (carrying the best value so far) if the
// recursion depth cap is reached anywhere, and DomainError if the integrand
// produces a non-finite value.
QuadratureResult integrate_1d(const std::function<double(double)>& f,
                              double lo, double hi, double tol,
                              int max_depth = 40);

// Globally adaptive tensor-product quadrature on the rectangle
// [u_lo,u_hi] x [v_lo,v_hi]. Panels are evaluated with a 7x7 Gauss rule and an
// embedded 4x4 rule for the error estimate; the panel with the largest
// estimated error is split four ways until the summed estimate meets tol or
// the panel budget runs out (ConvergenceError).
QuadratureResult integrate_2d(const std::function<double(double, double)>& f,
                              double u_lo, double u_hi, double v_lo, double v_hi,
                              double tol, int max_panels = 20000);

// Gauss-Legendre nodes (ascending, on [-1,1]) and weights, computed once by
// Newton iteration on the Legendre polynomial. Exposed for reuse in fixed-order
// integration loops elsewhere.
template <int N>
struct GaussRule {
    std::array<double, N> nodes;
    std::array<double, N> weights;
};

const GaussRule<15>& gauss15();
const GaussRule<7>& gauss7();
const GaussRule<4>& gauss4();

}  // namespace ablab

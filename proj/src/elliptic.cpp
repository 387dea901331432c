#include "ablab/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ablab/error.hpp"

namespace ablab {

// AGM iteration: a_{n+1} = (a_n + b_n)/2, b_{n+1} = sqrt(a_n b_n), starting
// from a_0 = 1, b_0 = sqrt(1 - m). Then
//   K(m) = pi / (2 * AGM(1, sqrt(1 - m)))
//   E(m) = K(m) * (1 - sum_{n>=0} 2^{n-1} c_n^2),  c_0 = sqrt(m),
//                                                  c_n = (a_{n-1} - b_{n-1})/2.
// Convergence is quadratic; a dozen iterations is far more than double
// precision ever needs.
EllipticPair complete_elliptic(double m) {
    if (!(m >= 0.0) || m >= 1.0)
        throw DomainError("complete_elliptic: parameter m = " + std::to_string(m) +
                          " outside [0, 1)");
    if (1.0 - m < 1e-12)
        throw DomainError("complete_elliptic: m within 1e-12 of the singular value 1");

    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    double c2_sum = 0.5 * m;  // the n = 0 term, 2^{-1} c_0^2
    double pow2 = 1.0;
    for (int n = 0; n < 64 && std::fabs(a - b) > 4e-16 * a; ++n) {
        const double c = 0.5 * (a - b);
        c2_sum += pow2 * c * c;
        pow2 *= 2.0;
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    const double K = std::numbers::pi / (2.0 * a);
    return {K, K * (1.0 - c2_sum)};
}

}  // namespace ablab

#pragma once

namespace ablab {

// Complete elliptic integrals in the parameter convention:
//   K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t)
//   E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt
// (m is the squared modulus: m = k^2).
struct EllipticPair {
    double K;
    double E;
};

// Arithmetic-geometric mean evaluation, accurate to ~1e-14 absolute over
// m in [0, 1). Throws DomainError for m outside [0, 1) and for m within 1e-12
// of the logarithmic singularity at m = 1.
EllipticPair complete_elliptic(double m);

}  // namespace ablab

#pragma once

#include <cmath>
#include <string>

#include "ablab/error.hpp"

namespace ablab {

// Cartesian 3-vector. Components are validated on construction so NaN/Inf
// cannot propagate silently through field sums and quadratures; any overflow
// surfaces at the point it happens instead of three modules later.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;

    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
        if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(z)))
            throw ValidationError("Vec3: non-finite component (" +
                                  std::to_string(x_) + ", " + std::to_string(y_) +
                                  ", " + std::to_string(z_) + ")");
    }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { return *this = *this + o; }
    Vec3& operator-=(const Vec3& o) { return *this = *this - o; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw ValidationError("normalized: zero vector");
    return v / n;
}

// Right-handed orthonormal pair (e1, e2) completing a unit vector n to a
// frame: e1 x e2 = n. Deterministic choice so that loop parameterizations and
// disk samplings are reproducible run to run.
struct OrthoBasis {
    Vec3 e1;
    Vec3 e2;
};

inline OrthoBasis orthonormal_basis(const Vec3& n) {
    // Pick the world axis least aligned with n as the seed.
    const double ax = std::fabs(n.x), ay = std::fabs(n.y), az = std::fabs(n.z);
    Vec3 seed = (ax <= ay && ax <= az) ? Vec3{1, 0, 0}
              : (ay <= az)             ? Vec3{0, 1, 0}
                                       : Vec3{0, 0, 1};
    const Vec3 e1 = normalized(cross(n, seed));
    const Vec3 e2 = cross(n, e1);
    return {e1, e2 / norm(e2)};
}

}  // namespace ablab

#include "ablab/linking.hpp"

#include <cmath>
#include <string>

#include "ablab/error.hpp"

namespace ablab {

int linking_number(const Trajectory& path, const CircleSpec& ring) {
    if (!path.closed())
        throw ValidationError("linking_number: path must be closed");

    const auto& s = path.samples();
    const double scale = ring.radius;

    // Guard the topology before counting anything: a path that touches the
    // ring makes the answer meaningless however the crossings land.
    for (const auto& sample : s) {
        const double d = point_circle_distance(sample.position, ring);
        if (d < 1e-9)
            throw AmbiguousTopologyError(
                "linking_number: path within " + std::to_string(d) +
                " of the ring circle");
    }

    int crossings = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const Vec3& p0 = s[i].position;
        const Vec3& p1 = s[i + 1].position;
        const double h0 = dot(p0 - ring.center, ring.unit_normal);
        const double h1 = dot(p1 - ring.center, ring.unit_normal);
        if (std::fabs(h0) < 1e-12 * scale || std::fabs(h1) < 1e-12 * scale)
            throw AmbiguousTopologyError(
                "linking_number: path sample " + std::to_string(i) +
                " lies in the spanning-disk plane within tolerance");
        if ((h0 > 0.0) == (h1 > 0.0)) continue;

        const double f = h0 / (h0 - h1);
        const Vec3 hit = p0 + (p1 - p0) * f;
        const double rho = norm(hit - ring.center -
                                ring.unit_normal * dot(hit - ring.center, ring.unit_normal));
        if (std::fabs(rho - ring.radius) < 1e-9)
            throw AmbiguousTopologyError(
                "linking_number: crossing within 1e-9 of the spanning-disk rim");
        if (rho < ring.radius) crossings += (h1 > h0) ? 1 : -1;
    }
    return crossings;
}

}  // namespace ablab

#pragma once

#include <cstddef>
#include <vector>

#include "ablab/vec3.hpp"

namespace ablab {

struct TrajectorySample {
    double t = 0.0;
    Vec3 position;
    Vec3 velocity;
};

// Time-ordered polyline path of a particle. Between samples the path is the
// straight chord; sampling density is therefore the caller's statement of how
// accurately the geometry matters. Construction enforces strictly increasing
// times and, for closed paths, coincident endpoints; velocities that disagree
// with the finite-difference slope of the positions by more than 5% earn a
// warning on stderr but are kept. Each chord is compared against the stored
// velocity at either of its endpoints, so the corners of a clean polyline do
// not false-alarm.
class Trajectory {
public:
    Trajectory(std::vector<TrajectorySample> samples, bool closed);

    // Uniformly sampled straight chord from a to b traversed at constant
    // speed, n_samples >= 2.
    static Trajectory straight(const Vec3& a, const Vec3& b, double speed,
                               std::size_t n_samples);

    // Constant-speed polyline through the given waypoints.
    static Trajectory polyline(const std::vector<Vec3>& waypoints, double speed,
                               std::size_t samples_per_segment);

    const std::vector<TrajectorySample>& samples() const { return samples_; }
    bool closed() const { return closed_; }
    std::size_t size() const { return samples_.size(); }
    const Vec3& start() const { return samples_.front().position; }
    const Vec3& end() const { return samples_.back().position; }

    // Same geometry walked backwards in space, with time re-ascending.
    Trajectory reversed() const;

private:
    std::vector<TrajectorySample> samples_;
    bool closed_;
};

// Oriented flat disk; the surface used for flux integrals and crossing counts.
struct Disk {
    Vec3 center;
    Vec3 unit_normal;
    double radius;

    Disk(const Vec3& center_, const Vec3& normal_, double radius_);
};

// A geometric circle (no orientation of travel implied beyond the normal's
// right-hand sense). Used to describe flux-ring centerlines.
struct CircleSpec {
    Vec3 center;
    Vec3 unit_normal;
    double radius;

    CircleSpec(const Vec3& center_, const Vec3& normal_, double radius_);

    Disk spanning_disk() const { return {center, unit_normal, radius}; }
    Vec3 point_at(double angle) const;
};

// Exact distance from a point to a circle in 3-d.
double point_circle_distance(const Vec3& p, const CircleSpec& c);

}  // namespace ablab

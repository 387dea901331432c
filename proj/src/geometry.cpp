#include "ablab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "ablab/error.hpp"

namespace ablab {

namespace {

// Warn (once per trajectory) when stored velocities stray more than 5% from
// the chord slope. A chord is fine if it matches the stored velocity at either
// of its endpoints, so polyline corners do not false-alarm.
void check_velocity_consistency(const std::vector<TrajectorySample>& s) {
    double worst = 0.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double dt = s[i + 1].t - s[i].t;
        const Vec3 chord = (s[i + 1].position - s[i].position) / dt;
        const double scale = std::max(norm(chord), 1e-300);
        // The chord should match either endpoint's stored velocity.
        const double dev = std::min(norm(chord - s[i].velocity),
                                    norm(chord - s[i + 1].velocity)) / scale;
        if (dev > worst) {
            worst = dev;
            worst_i = i;
        }
    }
    if (worst > 0.05)
        std::cerr << "warning: trajectory velocities deviate from position slopes by "
                  << worst * 100.0 << "% (worst near sample " << worst_i << ")\n";
}

}  // namespace

Trajectory::Trajectory(std::vector<TrajectorySample> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
    if (samples_.size() < 2)
        throw ValidationError("Trajectory: need at least 2 samples, got " +
                              std::to_string(samples_.size()));
    for (std::size_t i = 0; i + 1 < samples_.size(); ++i)
        if (!(samples_[i + 1].t > samples_[i].t))
            throw ValidationError("Trajectory: sample times must be strictly increasing "
                                  "(violated at index " + std::to_string(i + 1) + ")");
    if (closed_) {
        const double gap = norm(samples_.front().position - samples_.back().position);
        if (gap > 1e-12)
            throw ValidationError("Trajectory: closed path endpoints differ by " +
                                  std::to_string(gap));
    }
    check_velocity_consistency(samples_);
}

Trajectory Trajectory::straight(const Vec3& a, const Vec3& b, double speed,
                                std::size_t n_samples) {
    return polyline({a, b}, speed, n_samples < 2 ? 2 : n_samples - 1);
}

Trajectory Trajectory::polyline(const std::vector<Vec3>& waypoints, double speed,
                                std::size_t samples_per_segment) {
    if (waypoints.size() < 2)
        throw ValidationError("Trajectory::polyline: need at least 2 waypoints");
    if (!(speed > 0.0))
        throw ValidationError("Trajectory::polyline: speed must be positive");
    if (samples_per_segment < 1)
        throw ValidationError("Trajectory::polyline: need at least 1 sample per segment");

    std::vector<TrajectorySample> samples;
    double t = 0.0;
    for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
        const Vec3 d = waypoints[seg + 1] - waypoints[seg];
        const double len = norm(d);
        if (len == 0.0)
            throw ValidationError("Trajectory::polyline: zero-length segment at index " +
                                  std::to_string(seg));
        const Vec3 v = d * (speed / len);
        const double seg_time = len / speed;
        for (std::size_t i = 0; i < samples_per_segment; ++i) {
            const double f = double(i) / double(samples_per_segment);
            samples.push_back({t + f * seg_time,
                               waypoints[seg] + d * f, v});
        }
        t += seg_time;
    }
    const Vec3 d_last = waypoints.back() - waypoints[waypoints.size() - 2];
    samples.push_back({t, waypoints.back(), d_last * (speed / norm(d_last))});

    const bool closed = norm(waypoints.front() - waypoints.back()) <= 1e-12;
    return Trajectory(std::move(samples), closed);
}

Trajectory Trajectory::reversed() const {
    std::vector<TrajectorySample> rev(samples_.size());
    const double t0 = samples_.front().t, t1 = samples_.back().t;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const TrajectorySample& s = samples_[samples_.size() - 1 - i];
        rev[i] = {t0 + (t1 - s.t), s.position, -s.velocity};
    }
    return Trajectory(std::move(rev), closed_);
}

Disk::Disk(const Vec3& center_, const Vec3& normal_, double radius_)
    : center(center_), unit_normal(normalized(normal_)), radius(radius_) {
    if (!(radius > 0.0))
        throw ValidationError("Disk: radius must be positive, got " +
                              std::to_string(radius_));
}

CircleSpec::CircleSpec(const Vec3& center_, const Vec3& normal_, double radius_)
    : center(center_), unit_normal(normalized(normal_)), radius(radius_) {
    if (!(radius > 0.0))
        throw ValidationError("CircleSpec: radius must be positive, got " +
                              std::to_string(radius_));
}

Vec3 CircleSpec::point_at(double angle) const {
    const OrthoBasis basis = orthonormal_basis(unit_normal);
    return center + (basis.e1 * std::cos(angle) + basis.e2 * std::sin(angle)) * radius;
}

double point_circle_distance(const Vec3& p, const CircleSpec& c) {
    const Vec3 v = p - c.center;
    const double h = dot(v, c.unit_normal);
    const Vec3 in_plane = v - c.unit_normal * h;
    const double rho = norm(in_plane);
    return std::sqrt((rho - c.radius) * (rho - c.radius) + h * h);
}

}  // namespace ablab

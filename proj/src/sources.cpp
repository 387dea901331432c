#include "ablab/sources.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "ablab/elliptic.hpp"
#include "ablab/error.hpp"
#include "ablab/linking.hpp"

namespace ablab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x))
        throw ValidationError(std::string(what) + ": non-finite value " +
                              std::to_string(x));
}

}  // namespace

CurrentLoop::CurrentLoop(double radius_, const Vec3& center_, const Vec3& normal_,
                         double charge_density_, double speed_)
    : radius(radius_),
      center(center_),
      normal(normalized(normal_)),
      charge_density(charge_density_),
      speed(speed_) {
    if (!(radius > 0.0))
        throw ValidationError("CurrentLoop: radius must be positive, got " +
                              std::to_string(radius_));
    require_finite(charge_density, "CurrentLoop charge_density");
    require_finite(speed, "CurrentLoop speed");
    const OrthoBasis basis = orthonormal_basis(normal);
    e1 = basis.e1;
    e2 = basis.e2;
}

CurrentLoop CurrentLoop::with_current(double radius, const Vec3& center,
                                      const Vec3& normal, double current) {
    return CurrentLoop(radius, center, normal, current, 1.0);
}

Vec3 CurrentLoop::wire_point(double angle) const {
    return center + (e1 * std::cos(angle) + e2 * std::sin(angle)) * radius;
}

Vec3 CurrentLoop::wire_tangent(double angle) const {
    return e2 * std::cos(angle) - e1 * std::sin(angle);
}

double CurrentLoop::wire_distance(const Vec3& p) const {
    const Vec3 v = p - center;
    const double h = dot(v, normal);
    const double rho = norm(v - normal * h);
    return std::sqrt((rho - radius) * (rho - radius) + h * h);
}

namespace detail {

namespace {

// Binomial-series coefficients c_k = (2k-1)!!/(2k)!! of (1-x)^{-1/2} and
// d_k = (2k+1)!!/(2k)!! of (1-x)^{-3/2}.
constexpr int kSeriesTerms = 90;

struct SeriesTables {
    std::array<double, kSeriesTerms> c{};
    std::array<double, kSeriesTerms> d{};
    SeriesTables() {
        c[0] = d[0] = 1.0;
        for (int k = 1; k < kSeriesTerms; ++k) {
            c[k] = c[k - 1] * (2.0 * k - 1.0) / (2.0 * k);
            d[k] = d[k - 1] * (2.0 * k + 1.0) / (2.0 * k);
        }
    }
};

const SeriesTables& tables() {
    static const SeriesTables t;
    return t;
}

// Everything below works in the loop's cylindrical frame: s is the distance
// from the symmetry axis, z the height above the loop plane, a the loop
// radius, and the loop carries current I counterclockwise. Units absorb the
// Biot-Savart prefactor, i.e. A = I oint dl / r.
//
// Expansion variable u = 2 a s / (a^2 + s^2 + z^2), in [0, 1), small both near
// the axis and far away. Expanding 1/r and 1/r^3 of the defining integrals in
// powers of u cos(phi) and integrating term by term gives series with all
// terms positive:
//   A_phi = (2 pi I a / sqrt(D))  sum_{j>=1} c_{2j-1} c_j u^{2j-1}
//   B_s   = (2 pi I a z / D^{3/2}) sum_{j>=1} d_{2j-1} c_j u^{2j-1}
//   B_z   = (2 pi I a / D^{3/2}) [ a sum_{j>=0} d_{2j} c_j u^{2j}
//                                  - s sum_{j>=1} d_{2j-1} c_j u^{2j-1} ]
// with D = a^2 + s^2 + z^2. (The c_j factor is cos^{2j} averaged over the
// circle.) This branch is what keeps the fields accurate to ~1e-12 relative
// near the axis, where the closed forms below cancel catastrophically.
LoopComponents series_components(double a, double I, double s, double z) {
    const double D = a * a + s * s + z * z;
    const double u = 2.0 * a * s / D;
    const auto& tab = tables();

    double SA = 0.0, Ss = 0.0, Sz0 = tab.d[0] * tab.c[0];
    double u_odd = u;  // u^{2j-1}
    for (int j = 1; j < kSeriesTerms / 2; ++j) {
        const double cj = tab.c[j];
        const double tA = tab.c[2 * j - 1] * cj * u_odd;
        const double ts = tab.d[2 * j - 1] * cj * u_odd;
        const double tz = tab.d[2 * j] * cj * u_odd * u;
        SA += tA;
        Ss += ts;
        Sz0 += tz;
        if (ts + tz < 1e-17 * (Sz0 + Ss)) break;
        u_odd *= u * u;
    }

    const double sqrtD = std::sqrt(D);
    const double pre = 2.0 * kPi * I * a;
    return {pre / sqrtD * SA,
            pre * z / (D * sqrtD) * Ss,
            pre / (D * sqrtD) * (a * Sz0 - s * Ss)};
}

// Standard closed forms in terms of K(m), E(m) with
// m = 4 a s / ((a+s)^2 + z^2); prefactors carry our A = I oint dl / r
// normalization (so e.g. the field at the center of a unit loop is 2 pi I).
LoopComponents elliptic_components(double a, double I, double s, double z) {
    const double dp = (a + s) * (a + s) + z * z;
    const double dm = (a - s) * (a - s) + z * z;
    const double m = 4.0 * a * s / dp;
    // 1 - m = dm / dp; report proximity in wire-distance terms rather than
    // letting the elliptic domain guard produce a cryptic message.
    if (dm < 1.1e-12 * dp)
        throw NearWireError(
            "loop field: point within " + std::to_string(std::sqrt(dm)) +
                " of the wire, elliptic parameter too close to 1",
            std::sqrt(dm));
    const auto [K, E] = complete_elliptic(m);
    const double sqrt_dp = std::sqrt(dp);

    const double A_phi = 4.0 * I / std::sqrt(m) * std::sqrt(a / s) *
                         ((1.0 - 0.5 * m) * K - E);
    const double B_s = 2.0 * I * z / (s * sqrt_dp) *
                       ((a * a + s * s + z * z) / dm * E - K);
    const double B_z = 2.0 * I / sqrt_dp * ((a * a - s * s - z * z) / dm * E + K);
    return {A_phi, B_s, B_z};
}

}  // namespace

LoopComponents loop_components(double radius, double current, double s, double z,
                               LoopRoute route) {
    const double u = 2.0 * radius * s / (radius * radius + s * s + z * z);
    if (route == LoopRoute::automatic)
        route = (u < 0.5) ? LoopRoute::series : LoopRoute::elliptic;
    return route == LoopRoute::series
               ? series_components(radius, current, s, z)
               : elliptic_components(radius, current, s, z);
}

}  // namespace detail

namespace {

struct LoopFrame {
    double s, z;
    Vec3 s_hat, phi_hat;  // meaningless when s == 0
};

LoopFrame to_loop_frame(const CurrentLoop& loop, const Vec3& p) {
    const Vec3 v = p - loop.center;
    const double z = dot(v, loop.normal);
    const Vec3 in_plane = v - loop.normal * z;
    const double s = norm(in_plane);
    if (s == 0.0) return {0.0, z, {}, {}};
    const Vec3 s_hat = in_plane / s;
    return {s, z, s_hat, cross(loop.normal, s_hat)};
}

void check_wire_distance(const CurrentLoop& loop, const Vec3& p, double eps,
                         std::optional<std::size_t> index = std::nullopt) {
    const double d = loop.wire_distance(p);
    if (d < eps * loop.radius)
        throw NearWireError("field point within " + std::to_string(d) +
                                " of wire (exclusion " +
                                std::to_string(eps * loop.radius) + ")",
                            d, index);
}

}  // namespace

Vec3 loop_vector_potential(const CurrentLoop& loop, const Vec3& p,
                           double near_wire_epsilon) {
    check_wire_distance(loop, p, near_wire_epsilon);
    const LoopFrame f = to_loop_frame(loop, p);
    if (f.s == 0.0) return {};
    const auto comp = detail::loop_components(loop.radius, loop.current(), f.s, f.z);
    return f.phi_hat * comp.A_phi;
}

Vec3 loop_magnetic_field(const CurrentLoop& loop, const Vec3& p,
                         double near_wire_epsilon) {
    check_wire_distance(loop, p, near_wire_epsilon);
    const LoopFrame f = to_loop_frame(loop, p);
    const auto comp = detail::loop_components(loop.radius, loop.current(), f.s, f.z);
    if (f.s == 0.0) return loop.normal * comp.B_z;
    return f.s_hat * comp.B_s + loop.normal * comp.B_z;
}

PotentialField biot_savart_reference(const CurrentLoop& loop, const Vec3& p,
                                     double tol, double near_wire_epsilon) {
    check_wire_distance(loop, p, near_wire_epsilon);
    const double a = loop.radius;
    const double I = loop.current();

    const auto wire = [&](double phi) { return loop.wire_point(phi); };
    const auto tangent = [&](double phi) { return loop.wire_tangent(phi); };

    // The adaptive quadrature takes an absolute tolerance; survey the
    // integrand magnitude so the requested precision is relative to the
    // field's own scale. Otherwise a strongly peaked near-wire integrand
    // (or a component whose integral cancels to zero) stalls at roundoff.
    double max_inv_r = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double phi = 2.0 * kPi * (k + 0.5) / 64.0;
        max_inv_r = std::max(max_inv_r, 1.0 / norm(p - wire(phi)));
    }
    const double tol_a = tol * 2.0 * kPi * std::max(max_inv_r, 1.0);
    const double tol_b = tol * 2.0 * kPi * std::max(max_inv_r * max_inv_r, 1.0);

    Vec3 A, B;
    for (int axis = 0; axis < 3; ++axis) {
        const auto pick = [axis](const Vec3& v) {
            return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
        };
        const double Ac = integrate_1d(
                              [&](double phi) {
                                  const Vec3 r = p - wire(phi);
                                  return pick(tangent(phi)) / norm(r);
                              },
                              0.0, 2.0 * kPi, tol_a)
                              .value;
        const double Bc = integrate_1d(
                              [&](double phi) {
                                  const Vec3 r = p - wire(phi);
                                  const double rn = norm(r);
                                  return pick(cross(tangent(phi), r)) / (rn * rn * rn);
                              },
                              0.0, 2.0 * kPi, tol_b)
                              .value;
        (axis == 0 ? A.x : axis == 1 ? A.y : A.z) = I * a * Ac;
        (axis == 0 ? B.x : axis == 1 ? B.y : B.z) = I * a * Bc;
    }
    return {A, B};
}

ToroidalCoil::ToroidalCoil(double major_radius_, double minor_radius_,
                           std::size_t loop_count_, double charge_density_,
                           double liquid_speed_, const Vec3& center_, const Vec3& axis_)
    : major_radius(major_radius_),
      minor_radius(minor_radius_),
      loop_count(loop_count_),
      charge_density(charge_density_),
      liquid_speed(liquid_speed_),
      center(center_),
      axis(normalized(axis_)) {
    if (!(major_radius > 0.0))
        throw ValidationError("ToroidalCoil: major_radius must be positive");
    if (!(minor_radius > 0.0))
        throw ValidationError("ToroidalCoil: minor_radius must be positive");
    if (minor_radius >= major_radius)
        throw ValidationError("ToroidalCoil: minor_radius (" +
                              std::to_string(minor_radius) +
                              ") must be smaller than major_radius (" +
                              std::to_string(major_radius) + ")");
    if (loop_count < 3)
        throw ValidationError("ToroidalCoil: need at least 3 loops, got " +
                              std::to_string(loop_count));
    require_finite(charge_density, "ToroidalCoil charge_density");
    require_finite(liquid_speed, "ToroidalCoil liquid_speed");
    if (minor_radius / major_radius > 0.1)
        std::cerr << "warning: coil aspect ratio a/R = "
                  << minor_radius / major_radius
                  << " exceeds 0.1; thin-tube approximations degrade\n";

    const OrthoBasis basis = orthonormal_basis(axis);
    loops_.reserve(loop_count);
    for (std::size_t k = 0; k < loop_count; ++k) {
        const double phi = 2.0 * kPi * double(k) / double(loop_count);
        const Vec3 radial = basis.e1 * std::cos(phi) + basis.e2 * std::sin(phi);
        const Vec3 azimuthal = basis.e2 * std::cos(phi) - basis.e1 * std::sin(phi);
        loops_.emplace_back(minor_radius, center + radial * major_radius, azimuthal,
                            charge_density, liquid_speed);
    }
}

ToroidalCoil ToroidalCoil::with_ampere_turns(double major_radius, double minor_radius,
                                             std::size_t loop_count, double ampere_turns,
                                             const Vec3& center, const Vec3& axis) {
    return ToroidalCoil(major_radius, minor_radius, loop_count,
                        ampere_turns / double(loop_count), 1.0, center, axis);
}

Vec3 coil_vector_potential(const ToroidalCoil& coil, const Vec3& p,
                           double near_wire_epsilon) {
    Vec3 acc;
    const auto& loops = coil.loops();
    for (std::size_t k = 0; k < loops.size(); ++k) {
        try {
            acc += loop_vector_potential(loops[k], p, near_wire_epsilon);
        } catch (const NearWireError& e) {
            throw NearWireError(std::string(e.what()) + " (coil loop " +
                                    std::to_string(k) + ")",
                                e.distance, k);
        }
    }
    return acc;
}

Vec3 coil_magnetic_field(const ToroidalCoil& coil, const Vec3& p,
                         double near_wire_epsilon) {
    Vec3 acc;
    const auto& loops = coil.loops();
    for (std::size_t k = 0; k < loops.size(); ++k) {
        try {
            acc += loop_magnetic_field(loops[k], p, near_wire_epsilon);
        } catch (const NearWireError& e) {
            throw NearWireError(std::string(e.what()) + " (coil loop " +
                                    std::to_string(k) + ")",
                                e.distance, k);
        }
    }
    return acc;
}

double coil_ring_flux(const ToroidalCoil& coil, double probe_radius_factor,
                      double tol) {
    const double a = coil.minor_radius;
    const double R = coil.major_radius;
    const double r_probe = probe_radius_factor * a;
    if (r_probe >= R)
        throw ValidationError("coil_ring_flux: probe circle radius " +
                              std::to_string(r_probe) +
                              " reaches the coil axis; reduce probe_radius_factor");

    // Rim of a meridional disk at the azimuth halfway between windings 0
    // and 1; at this azimuth the probe stays as far from the wires as the
    // winding spacing allows.
    const OrthoBasis basis = orthonormal_basis(coil.axis);
    const double phi = kPi / double(coil.loop_count);
    const Vec3 radial = basis.e1 * std::cos(phi) + basis.e2 * std::sin(phi);
    const Vec3 tube_center = coil.center + radial * R;

    // Poloidal rim in the (axis, radial) plane, circulating right-handed
    // about the azimuthal direction (axis x radial = azimuthal), so a
    // positive winding current yields a positive flux.
    const double NI = double(coil.loop_count) * coil.loop_current();
    const double ideal = 4.0 * kPi * NI * (R - std::sqrt(R * R - a * a));
    const double scale = std::max(std::fabs(ideal), 1e-30);

    const double circ =
        integrate_1d(
            [&](double alpha) {
                const Vec3 pt = tube_center +
                                (coil.axis * std::cos(alpha) + radial * std::sin(alpha)) * r_probe;
                const Vec3 t = radial * std::cos(alpha) - coil.axis * std::sin(alpha);
                return dot(coil_vector_potential(coil, pt), t) * r_probe;
            },
            0.0, 2.0 * kPi, tol * scale)
            .value;
    return circ;
}

InertFluxRing::InertFluxRing(double radius_, double tube_radius_, double total_flux_,
                             const Vec3& center_, const Vec3& axis_, RingMode mode_,
                             std::size_t discrete_loop_count)
    : radius(radius_),
      tube_radius(tube_radius_),
      total_flux(total_flux_),
      center(center_),
      axis(normalized(axis_)),
      mode(mode_) {
    if (!(radius > 0.0))
        throw ValidationError("InertFluxRing: radius must be positive");
    if (!(tube_radius > 0.0) || tube_radius >= radius)
        throw ValidationError("InertFluxRing: tube_radius must be in (0, radius)");
    require_finite(total_flux, "InertFluxRing total_flux");

    if (mode == RingMode::discrete) {
        // Calibrate the internal winding current against the measured tube
        // flux of a unit-current coil; flux is linear in the current, so one
        // probe fixes it exactly.
        ToroidalCoil probe(radius, tube_radius, discrete_loop_count, 1.0, 1.0,
                           center, axis);
        const double unit_flux = coil_ring_flux(probe, 3.0, 1e-9);
        if (unit_flux == 0.0)
            throw ConvergenceError("InertFluxRing: probe flux of unit coil vanished",
                                   0.0, 0.0);
        coil_.emplace(radius, tube_radius, discrete_loop_count,
                      total_flux / unit_flux, 1.0, center, axis);
    }
}

const ToroidalCoil& InertFluxRing::discrete_coil() const {
    if (!coil_)
        throw ValidationError("InertFluxRing: no discrete coil in analytic mode");
    return *coil_;
}

double ring_phase_flux(const InertFluxRing& ring, const Trajectory& closed_path) {
    return double(linking_number(closed_path, ring.centerline())) * ring.total_flux;
}

namespace {

std::vector<const CurrentLoop*> source_wires(const Source& source) {
    std::vector<const CurrentLoop*> out;
    if (const auto* loop = std::get_if<CurrentLoop>(&source)) {
        out.push_back(loop);
    } else if (const auto* coil = std::get_if<ToroidalCoil>(&source)) {
        for (const auto& l : coil->loops()) out.push_back(&l);
    } else if (const auto& ring = std::get<InertFluxRing>(source);
               ring.mode == RingMode::discrete) {
        for (const auto& l : ring.discrete_coil().loops()) out.push_back(&l);
    }
    return out;
}

double point_disk_distance(const Vec3& p, const Disk& disk) {
    const Vec3 v = p - disk.center;
    const double h = dot(v, disk.unit_normal);
    const double rho = norm(v - disk.unit_normal * h);
    if (rho <= disk.radius) return std::fabs(h);
    return std::sqrt(h * h + (rho - disk.radius) * (rho - disk.radius));
}

}  // namespace

bool field_evaluable(const Source& source) {
    if (const auto* ring = std::get_if<InertFluxRing>(&source))
        return ring->mode == RingMode::discrete;
    return true;
}

Vec3 vector_potential(const Source& source, const Vec3& p, double near_wire_epsilon) {
    return std::visit(
        [&](const auto& s) -> Vec3 {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CurrentLoop>)
                return loop_vector_potential(s, p, near_wire_epsilon);
            else if constexpr (std::is_same_v<T, ToroidalCoil>)
                return coil_vector_potential(s, p, near_wire_epsilon);
            else
                return coil_vector_potential(s.discrete_coil(), p, near_wire_epsilon);
        },
        source);
}

Vec3 magnetic_field(const Source& source, const Vec3& p, double near_wire_epsilon) {
    return std::visit(
        [&](const auto& s) -> Vec3 {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CurrentLoop>)
                return loop_magnetic_field(s, p, near_wire_epsilon);
            else if constexpr (std::is_same_v<T, ToroidalCoil>)
                return coil_magnetic_field(s, p, near_wire_epsilon);
            else
                return coil_magnetic_field(s.discrete_coil(), p, near_wire_epsilon);
        },
        source);
}

FluxResult flux_through_disk(const Source& source, const Disk& disk, double tol,
                             double near_wire_epsilon) {
    if (!field_evaluable(source))
        throw ValidationError(
            "flux_through_disk: analytic-mode inert ring has no field "
            "representation; use discrete mode");

    // Keep the whole disk clear of every wire before spending any quadrature
    // effort. Wires are sampled finely; the clearance scales involved are far
    // coarser than the sampling error.
    const std::vector<const CurrentLoop*> wires = source_wires(source);
    for (std::size_t k = 0; k < wires.size(); ++k) {
        const CurrentLoop& w = *wires[k];
        for (int i = 0; i < 720; ++i) {
            const double d =
                point_disk_distance(w.wire_point(2.0 * kPi * i / 720.0), disk);
            if (d < near_wire_epsilon * w.radius)
                throw NearWireError(
                    "flux_through_disk: disk passes within " + std::to_string(d) +
                        " of a wire",
                    d,
                    wires.size() > 1 ? std::optional<std::size_t>(k) : std::nullopt);
        }
    }

    const OrthoBasis basis = orthonormal_basis(disk.unit_normal);
    const auto integrand = [&](double r, double theta) {
        const Vec3 p = disk.center +
                       (basis.e1 * std::cos(theta) + basis.e2 * std::sin(theta)) * r;
        return dot(magnetic_field(source, p, near_wire_epsilon), disk.unit_normal) * r;
    };

    // Relative tolerance against a coarse magnitude probe of the integrand.
    double probe = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j)
            probe = std::max(probe, std::fabs(integrand((0.125 + 0.25 * i) * disk.radius,
                                                        2.0 * kPi * j / 8.0)));
    const double abs_tol =
        tol * std::max(probe * disk.radius * 2.0 * kPi, 1e-30);

    const QuadratureResult q =
        integrate_2d(integrand, 0.0, disk.radius, 0.0, 2.0 * kPi, abs_tol);
    return {q.value, q.error_estimate};
}

std::optional<CircleSpec> core_circle(const Source& source) {
    if (const auto* coil = std::get_if<ToroidalCoil>(&source)) return coil->centerline();
    if (const auto* ring = std::get_if<InertFluxRing>(&source)) return ring->centerline();
    return std::nullopt;
}

std::optional<double> ring_flux(const Source& source) {
    if (const auto* coil = std::get_if<ToroidalCoil>(&source))
        return coil_ring_flux(*coil);
    if (const auto* ring = std::get_if<InertFluxRing>(&source)) return ring->total_flux;
    return std::nullopt;
}

}  // namespace ablab

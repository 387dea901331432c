#include "ablab/interference.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "ablab/backreaction.hpp"
#include "ablab/error.hpp"
#include "ablab/linking.hpp"

namespace ablab {

namespace {

constexpr double kPi = std::numbers::pi;

double reduce_fraction(double f) {
    double r = std::remainder(f, 1.0);
    if (r <= -0.5) {
        r += 1.0;
    }
    return r;
}

// The circle the beam pair can wrap around: the wire itself for a bare loop,
// the tube centerline for coils and rings.
CircleSpec topology_circle(const Source& source) {
    if (const auto* loop = std::get_if<CurrentLoop>(&source)) {
        return {loop->center, loop->normal, loop->radius};
    }
    if (const auto* coil = std::get_if<ToroidalCoil>(&source)) {
        return coil->centerline();
    }
    return std::get<InertFluxRing>(source).centerline();
}

PhaseResult pair_phase_for(const Source& source, const BeamPair& beams,
                           const ExperimentOptions& o) {
    if (const auto* coil = std::get_if<ToroidalCoil>(&source)) {
        // The coil responds dynamically, so each path carries both the
        // interaction phase and the liquid's kinetic backreaction.
        const PhaseResult pa =
            coil_total_phase(*coil, beams.a, o.charge, o.tol, o.near_wire_epsilon);
        const PhaseResult pb =
            coil_total_phase(*coil, beams.b, o.charge, o.tol, o.near_wire_epsilon);
        PhaseResult r;
        r.interaction_term = pa.interaction_term - pb.interaction_term;
        r.backreaction_term = pa.backreaction_term - pb.backreaction_term;
        r.total = r.interaction_term + r.backreaction_term;
        r.error_estimate = pa.error_estimate + pb.error_estimate;
        return r;
    }
    return phase_difference(beams.a, beams.b, source, o.charge, o.tol,
                            o.near_wire_epsilon);
}

int checked_linking(const BeamPair& beams, const Source& source, SlitPairing pairing) {
    const CircleSpec circle = topology_circle(source);
    const int link = linking_number(pair_contour(beams.a, beams.b), circle);
    if (pairing == SlitPairing::cross_set && std::abs(link) != 1) {
        throw ValidationError("beam pair built for cross_set links the source core " +
                              std::to_string(link) +
                              " times instead of once; adjust the beam geometry");
    }
    if (pairing == SlitPairing::same_set && link != 0) {
        throw ValidationError("beam pair built for same_set links the source core " +
                              std::to_string(link) + " times; both paths must stay outside");
    }
    return link;
}

}  // namespace

BeamGeometry::BeamGeometry(const Vec3& source_point_, const Vec3& screen_center_,
                           const Vec3& screen_x_, const Vec3& slit_center_,
                           double slit_separation_, double phase_gradient_)
    : source_point(source_point_),
      screen_center(screen_center_),
      screen_x(screen_x_),
      slit_center(slit_center_),
      slit_separation(slit_separation_),
      phase_gradient(phase_gradient_) {
    const double nx = norm(screen_x);
    if (nx == 0.0) {
        throw ValidationError("BeamGeometry: screen_x must be a nonzero direction");
    }
    screen_x = screen_x / nx;
    if (!(slit_separation > 0.0) || !std::isfinite(slit_separation)) {
        throw ValidationError("BeamGeometry: slit_separation must be positive");
    }
    if (!(phase_gradient > 0.0) || !std::isfinite(phase_gradient)) {
        throw ValidationError("BeamGeometry: phase_gradient must be positive");
    }
    if (norm(screen_center - source_point) == 0.0) {
        throw ValidationError("BeamGeometry: source and screen coincide");
    }
}

BeamPair build_beam_pair(const BeamGeometry& geom, SlitPairing pairing,
                         double beam_speed, std::size_t samples_per_segment) {
    const Vec3 step = geom.screen_x * geom.slit_separation;
    Vec3 wa = geom.slit_center;
    Vec3 wb = geom.slit_center + step;
    if (pairing == SlitPairing::same_set) {
        wa = geom.slit_center + step;
        wb = geom.slit_center + step * 1.5;
    }
    return {Trajectory::polyline({geom.source_point, wa, geom.screen_center}, beam_speed,
                                 samples_per_segment),
            Trajectory::polyline({geom.source_point, wb, geom.screen_center}, beam_speed,
                                 samples_per_segment)};
}

InterferencePattern two_beam_pattern(double delta_phi, double fringe_period,
                                     std::size_t n_samples, int span_periods,
                                     double contrast) {
    if (!std::isfinite(delta_phi)) {
        throw ValidationError("two_beam_pattern: delta_phi must be finite");
    }
    if (!(fringe_period > 0.0) || !std::isfinite(fringe_period)) {
        throw ValidationError("two_beam_pattern: fringe_period must be positive");
    }
    if (span_periods < 1) {
        throw ValidationError("two_beam_pattern: need at least one fringe period");
    }
    if (n_samples < 16 * static_cast<std::size_t>(span_periods)) {
        throw ValidationError("two_beam_pattern: fewer than 16 samples per period");
    }
    if (!(contrast >= 0.0 && contrast <= 1.0)) {
        throw ValidationError("two_beam_pattern: contrast must lie in [0, 1]");
    }

    InterferencePattern p;
    p.fringe_period = fringe_period;
    p.positions.resize(n_samples);
    p.intensities.resize(n_samples);
    const double span = span_periods * fringe_period;
    const double dx = span / static_cast<double>(n_samples);
    const double g = 2.0 * kPi / fringe_period;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double x = dx * static_cast<double>(i) - 0.5 * span;
        p.positions[i] = x;
        p.intensities[i] = 2.0 * (1.0 + contrast * std::cos(g * x + delta_phi));
    }
    return p;
}

double fringe_shift_fraction(double delta_phi) {
    if (!std::isfinite(delta_phi)) {
        throw ValidationError("fringe_shift_fraction: delta_phi must be finite");
    }
    return reduce_fraction(delta_phi / (2.0 * kPi));
}

double measure_fringe_shift(const InterferencePattern& reference,
                            const InterferencePattern& shifted) {
    const std::size_t n = reference.positions.size();
    if (n < 8 || reference.intensities.size() != n) {
        throw ValidationError("measure_fringe_shift: reference pattern is malformed");
    }
    if (shifted.positions.size() != n || shifted.intensities.size() != n) {
        throw ValidationError("measure_fringe_shift: patterns have different grids");
    }
    const double period = reference.fringe_period;
    if (std::abs(shifted.fringe_period - period) > 1e-12 * period) {
        throw ValidationError("measure_fringe_shift: fringe periods differ");
    }
    const double span = reference.positions.back() - reference.positions.front();
    const double dx = reference.positions[1] - reference.positions[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(shifted.positions[i] - reference.positions[i]) > 1e-9 * span) {
            throw ValidationError("measure_fringe_shift: patterns have different grids");
        }
        if (i + 1 < n && std::abs((reference.positions[i + 1] - reference.positions[i]) -
                                  dx) > 1e-9 * std::abs(dx)) {
            throw ValidationError("measure_fringe_shift: grid spacing is not uniform");
        }
    }

    // Circular cross-correlation; the patterns span whole periods, so lags
    // wrap cleanly. shifted(x) = reference(x + f * period) peaks the
    // correlation at lag f * period / dx samples.
    std::vector<double> corr(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = i + k;
            if (j >= n) {
                j -= n;
            }
            c += shifted.intensities[i] * reference.intensities[j];
        }
        corr[k] = c;
    }

    std::size_t best = 0;
    double best_value = corr[0];
    double peak_abs = std::abs(corr[0]);
    for (std::size_t k = 1; k < n; ++k) {
        peak_abs = std::max(peak_abs, std::abs(corr[k]));
        if (corr[k] > best_value) {
            best_value = corr[k];
            best = k;
        }
    }

    const double y1 = corr[(best + n - 1) % n];
    const double y2 = corr[best];
    const double y3 = corr[(best + 1) % n];
    const double curvature = y1 - 2.0 * y2 + y3;
    if (std::abs(curvature) <= 1e-12 * std::max(peak_abs, 1e-300)) {
        throw ValidationError("measure_fringe_shift: patterns carry no fringe structure");
    }
    const double offset = 0.5 * (y1 - y3) / curvature;
    const double lag = static_cast<double>(best) + offset;
    return reduce_fraction(lag * dx / period);
}

PhaseResult beam_pair_phase(const Source& source, const BeamGeometry& geom,
                            const ExperimentOptions& options) {
    const BeamPair base = build_beam_pair(geom, options.pairing, options.beam_speed,
                                          options.samples_per_segment);
    const int link = checked_linking(base, source, options.pairing);
    PhaseResult pair = pair_phase_for(source, base, options);
    if (!pair.flux_term) {
        if (const std::optional<double> per_ring = ring_flux(source)) {
            pair.flux_term = -options.charge * static_cast<double>(link) * (*per_ring);
        }
    }
    return pair;
}

ExperimentResult simulate_experiment(const Source& source, const BeamGeometry& geom,
                                     const ExperimentOptions& options) {
    if (options.ensemble_size < 1) {
        throw ValidationError("simulate_experiment: ensemble_size must be at least 1");
    }

    PhaseResult pair = beam_pair_phase(source, geom, options);

    std::vector<double> member_phases;
    if (options.ensemble_size == 1) {
        member_phases.push_back(pair.total);
    } else {
        const double spread = 0.05 * geom.slit_separation;
        for (std::size_t j = 0; j < options.ensemble_size; ++j) {
            const double frac =
                2.0 * static_cast<double>(j) / static_cast<double>(options.ensemble_size - 1) -
                1.0;
            BeamGeometry jittered = geom;
            jittered.slit_center = geom.slit_center + geom.screen_x * (spread * frac);
            const BeamPair beams = build_beam_pair(jittered, options.pairing,
                                                   options.beam_speed,
                                                   options.samples_per_segment);
            checked_linking(beams, source, options.pairing);
            member_phases.push_back(pair_phase_for(source, beams, options).total);
        }
    }

    std::complex<double> resultant{0.0, 0.0};
    for (const double phi : member_phases) {
        resultant += std::complex<double>(std::cos(phi), std::sin(phi));
    }
    resultant /= static_cast<double>(member_phases.size());
    const double contrast = std::abs(resultant);
    if (contrast < 1e-12) {
        throw ValidationError("simulate_experiment: ensemble dephases completely, no "
                              "fringe to measure");
    }
    const double delta_eff = std::arg(resultant);

    ExperimentResult result{pair,
                            delta_eff,
                            contrast,
                            fringe_shift_fraction(delta_eff),
                            0.0,
                            two_beam_pattern(0.0, 2.0 * kPi / geom.phase_gradient,
                                             options.pattern_samples),
                            two_beam_pattern(delta_eff, 2.0 * kPi / geom.phase_gradient,
                                             options.pattern_samples, 6, contrast)};
    result.measured_shift = measure_fringe_shift(result.reference, result.shifted);
    return result;
}

}  // namespace ablab

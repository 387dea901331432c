#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "ablab/csv.hpp"
#include "ablab/error.hpp"
#include "ablab/interference.hpp"
#include "ablab/scenario.hpp"
#include "ablab/sources.hpp"
#include "ablab/verify.hpp"

namespace {

using namespace ablab;

// Worker count for field maps: ABLAB_THREADS caps it, 0/unset means one
// worker per hardware thread. Output is identical regardless of the count.
unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) {
        n = 1;
    }
    if (const char* env = std::getenv("ABLAB_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed > 0) {
            n = std::min<unsigned long>(parsed, n);
        }
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

GridSpec default_grid(const Source& source) {
    double lateral = 1.0;
    double vertical = 1.0;
    Vec3 center{0, 0, 0};
    if (const auto* loop = std::get_if<CurrentLoop>(&source)) {
        lateral = 2.0 * loop->radius;
        vertical = loop->radius;
        center = loop->center;
    } else if (const auto* coil = std::get_if<ToroidalCoil>(&source)) {
        lateral = coil->major_radius + 2.0 * coil->minor_radius;
        vertical = coil->major_radius;
        center = coil->center;
    } else {
        const auto& ring = std::get<InertFluxRing>(source);
        lateral = ring.radius + 2.0 * ring.tube_radius;
        vertical = ring.radius;
        center = ring.center;
    }
    // Even lateral counts stagger the lattice off the source's symmetry
    // axes; an odd count would park a sample exactly on the conductor of a
    // unit-radius loop and make the whole map fail its wire-exclusion check.
    return {center - Vec3{lateral, lateral, vertical},
            center + Vec3{lateral, lateral, vertical},
            {16, 16, 9}};
}

double grid_coordinate(double lo, double hi, std::size_t count, std::size_t i) {
    if (count == 1) {
        return lo;
    }
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void run_fields(const Scenario& scenario, const std::string& out_path) {
    if (!field_evaluable(scenario.source)) {
        throw ValidationError(
            "fields: the analytic-mode ring exposes no pointwise field; switch the "
            "scenario source to discrete mode");
    }
    const GridSpec grid = scenario.grid ? *scenario.grid : default_grid(scenario.source);

    std::vector<Vec3> points;
    points.reserve(grid.counts[0] * grid.counts[1] * grid.counts[2]);
    for (std::size_t iz = 0; iz < grid.counts[2]; ++iz) {
        for (std::size_t iy = 0; iy < grid.counts[1]; ++iy) {
            for (std::size_t ix = 0; ix < grid.counts[0]; ++ix) {
                points.push_back(
                    {grid_coordinate(grid.minimum.x, grid.maximum.x, grid.counts[0], ix),
                     grid_coordinate(grid.minimum.y, grid.maximum.y, grid.counts[1], iy),
                     grid_coordinate(grid.minimum.z, grid.maximum.z, grid.counts[2], iz)});
            }
        }
    }

    std::vector<FieldSample> samples(points.size());
    const double eps = scenario.numerics.near_wire_epsilon;
    const unsigned workers = worker_count(points.size());
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const auto work = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t i = begin; i < end; ++i) {
                samples[i] = {points[i], vector_potential(scenario.source, points[i], eps),
                              magnetic_field(scenario.source, points[i], eps)};
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
                first_error = std::current_exception();
            }
        }
    };
    const std::size_t chunk = (points.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(points.size(), begin + chunk);
        if (begin < end) {
            pool.emplace_back(work, begin, end);
        }
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    if (out_path.empty()) {
        write_field_csv(std::cout, samples);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw ValidationError("fields: cannot open output file " + out_path);
        }
        write_field_csv(out, samples);
        std::cout << "fields.samples=" << samples.size() << "\n"
                  << "fields.out=" << out_path << "\n";
    }
}

void run_flux(const Scenario& scenario) {
    const double tol = scenario.numerics.quadrature_tol;
    if (const auto* loop = std::get_if<CurrentLoop>(&scenario.source)) {
        // Flux through a coaxial disk at 0.8 radius: finite, well clear of
        // the wire, and checkable against the rim circulation.
        const Disk disk{loop->center, loop->normal, 0.8 * loop->radius};
        const StokesCheck c = stokes_residual(scenario.source, disk, tol);
        std::cout << "flux.disk_radius=" << format_double(disk.radius) << "\n"
                  << "flux.area_route=" << format_double(c.flux) << "\n"
                  << "flux.rim_route=" << format_double(c.circulation) << "\n"
                  << "flux.residual=" << format_double(c.residual) << "\n";
        return;
    }
    if (const auto* coil = std::get_if<ToroidalCoil>(&scenario.source)) {
        const double measured = coil_ring_flux(*coil);
        const double NI =
            static_cast<double>(coil->loop_count) * coil->loop_current();
        const double R = coil->major_radius;
        const double a = coil->minor_radius;
        const double ideal = 4.0 * std::numbers::pi * NI * (R - std::sqrt(R * R - a * a));
        std::cout << "flux.tube=" << format_double(measured) << "\n"
                  << "flux.ideal_tube=" << format_double(ideal) << "\n"
                  << "flux.relative_gap="
                  << format_double(std::abs(measured - ideal) / std::abs(ideal)) << "\n";
        return;
    }
    const auto& ring = std::get<InertFluxRing>(scenario.source);
    std::cout << "flux.total=" << format_double(ring.total_flux) << "\n";
    if (ring.mode == RingMode::discrete) {
        const double measured = coil_ring_flux(ring.discrete_coil());
        std::cout << "flux.discrete_tube=" << format_double(measured) << "\n"
                  << "flux.calibration_gap="
                  << format_double(std::abs(measured - ring.total_flux) /
                                   std::abs(ring.total_flux))
                  << "\n";
    } else {
        std::cout << "flux.mode=analytic\n";
    }
}

const BeamGeometry& require_beam(const Scenario& scenario) {
    if (!scenario.beam) {
        throw ValidationError("scenario has no beam section, required by this command");
    }
    return *scenario.beam;
}

void run_phase(const Scenario& scenario) {
    const PhaseResult p = beam_pair_phase(scenario.source, require_beam(scenario),
                                          experiment_options(scenario));
    std::cout << "phase.total=" << format_double(p.total) << "\n"
              << "phase.interaction=" << format_double(p.interaction_term) << "\n"
              << "phase.backreaction=" << format_double(p.backreaction_term) << "\n";
    if (p.flux_term) {
        std::cout << "phase.flux_route=" << format_double(*p.flux_term) << "\n";
    }
    std::cout << "phase.error_estimate=" << format_double(p.error_estimate) << "\n";
}

void run_fringes(const Scenario& scenario, const std::string& out_path) {
    const ExperimentResult r = simulate_experiment(
        scenario.source, require_beam(scenario), experiment_options(scenario));
    if (out_path.empty()) {
        write_fringe_csv(std::cout, r.reference, r.shifted, r.measured_shift);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw ValidationError("fringes: cannot open output file " + out_path);
    }
    write_fringe_csv(out, r.reference, r.shifted, r.measured_shift);
    std::cout << "fringes.delta_phi=" << format_double(r.delta_phi_effective) << "\n"
              << "fringes.expected_shift=" << format_double(r.expected_shift) << "\n"
              << "fringes.measured_shift=" << format_double(r.measured_shift) << "\n"
              << "fringes.contrast=" << format_double(r.contrast) << "\n"
              << "fringes.out=" << out_path << "\n";
}

int run_verify(const Scenario& scenario, const std::string& suite_name) {
    const std::vector<CheckResult> checks =
        run_verification(scenario, parse_suite(suite_name));
    bool all_passed = true;
    for (const CheckResult& c : checks) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
                  << "\n";
        all_passed = all_passed && c.passed;
    }
    std::cout << (all_passed ? "verify: all checks passed\n"
                             : "verify: at least one check failed\n");
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-path electron phase laboratory for ring-shaped current sources"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string suite_name = "all";

    CLI::App* fields = app.add_subcommand(
        "fields", "Evaluate A and B on the scenario grid and write CSV");
    fields->add_option("scenario", scenario_path, "scenario JSON file")->required();
    fields->add_option("--out", out_path, "output CSV path (default: stdout)");

    CLI::App* flux = app.add_subcommand(
        "flux", "Report the source's flux through its natural diagnostic surface");
    flux->add_option("scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* phase = app.add_subcommand(
        "phase", "Phase difference carried by the scenario's beam pair");
    phase->add_option("scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* fringes = app.add_subcommand(
        "fringes", "Simulate the two-path experiment and write fringe profiles");
    fringes->add_option("scenario", scenario_path, "scenario JSON file")->required();
    fringes->add_option("--out", out_path, "output CSV path (default: stdout)");

    CLI::App* verify = app.add_subcommand(
        "verify", "Run built-in consistency checks against the scenario source");
    verify->add_option("scenario", scenario_path, "scenario JSON file")->required();
    verify->add_option("--suite", suite_name,
                       "stokes, cancellation, confinement, chain or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const Scenario scenario = load_scenario(scenario_path);
        if (fields->parsed()) {
            run_fields(scenario, out_path);
        } else if (flux->parsed()) {
            run_flux(scenario);
        } else if (phase->parsed()) {
            run_phase(scenario);
        } else if (fringes->parsed()) {
            run_fringes(scenario, out_path);
        } else if (verify->parsed()) {
            return run_verify(scenario, suite_name);
        }
        return 0;
    } catch (const ConvergenceError& e) {
        std::cerr << "error (convergence): " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

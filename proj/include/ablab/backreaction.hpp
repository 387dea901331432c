#pragma once

#include <vector>

#include "ablab/phase.hpp"
#include "ablab/sources.hpp"

namespace ablab {

// Vector potential of a moving point charge at a field point, charge * v / r
// in the quasi-static regime. Throws DomainError if the field point coincides
// with the charge.
Vec3 electron_vector_potential(const ElectronState& electron, const Vec3& point);

// Circulation of the electron's vector potential around the loop wire,
// closed-line integral of A_e . dl, by trapezoid doubling in the wire angle
// (spectrally convergent for smooth periodic integrands). tol is relative to
// the integrand's own scale. Throws NearWireError if the electron sits within
// near_wire_epsilon * radius of the wire.
double electron_circulation(const CurrentLoop& loop, const ElectronState& electron,
                            double tol = 1e-14);

// Interaction Lagrangian between the electron and the full current
// distribution of the loop, charge * v_e . A_loop(x_e), evaluated by adaptive
// Gauss quadrature over the wire: charge * I * a * closed-int (v_e . t) / r
// dphi. Deliberately a different integration scheme from the trapezoid route
// above, so the pointwise cancellation against the liquid's kinetic response
// is a comparison of independent numbers.
double interaction_lagrangian(const CurrentLoop& loop, const ElectronState& electron,
                              double tol = 1e-14);

// Same quantity through the closed-form loop potential, charge * v_e . A(x_e).
// Genuinely independent evaluation route for cross-checks.
double interaction_lagrangian_reciprocal(const CurrentLoop& loop,
                                         const ElectronState& electron,
                                         double near_wire_epsilon = kNearWireEpsilon);

// Kinetic energy change of the circulating charged liquid caused by the
// electron, to first order: the liquid rides the electron's vector potential,
// dT = -rho * v * closed-int A_e . dl. Pointwise this is the exact negative
// of the interaction Lagrangian, which is the cancellation that makes the
// liquid coil shift no fringes.
double liquid_kinetic_energy_change(const CurrentLoop& loop,
                                    const ElectronState& electron,
                                    double tol = 1e-14);

// Faraday consistency chain along an electron trajectory past a single loop.
// At each sample the flux-like circulation F(t) = closed-int A_e . dl is
// evaluated; the induced EMF follows as -dF/dt by three-point finite
// differences (one-sided at the ends), and rho * v * EMF is accumulated in
// time by the trapezoid rule. The closed-form column is dT(t) - dT(start),
// referenced to the start because the chain can only recover changes;
// boundary_defect = |dT(start)| records how far from "liquid at rest" the
// trajectory begins, the irreducible offset of any finite flyby.
struct EmfChainResult {
    std::vector<double> times;
    std::vector<double> integrated;
    std::vector<double> closed_form;
    double boundary_defect;
};

EmfChainResult emf_time_chain(const CurrentLoop& loop, const Trajectory& electron_path,
                              double charge = -1.0, double tol = 1e-12);

// Summed interaction Lagrangian of the electron with every loop of the coil,
// via the closed-form coil potential (reciprocity route).
double coil_interaction_sum(const ToroidalCoil& coil, const ElectronState& electron,
                            double near_wire_epsilon = kNearWireEpsilon);

// Summed kinetic response of the coil's liquid, loop by loop through the
// electron-potential circulation route.
double coil_kinetic_sum(const ToroidalCoil& coil, const ElectronState& electron,
                        double tol = 1e-14);

// Total phase the coil imprints on an electron along a trajectory:
// interaction_term = -int sum_k L_int dt (reciprocity route) and
// backreaction_term = -int sum_k dT dt (circulation route), integrated
// adaptively chord by chord with tol as the absolute phase budget. The two
// routes are independent, and their sum, stored in total, is the physical
// phase: zero up to quadrature error.
PhaseResult coil_total_phase(const ToroidalCoil& coil, const Trajectory& electron_path,
                             double charge = -1.0, double tol = 1e-10,
                             double near_wire_epsilon = kNearWireEpsilon);

}  // namespace ablab

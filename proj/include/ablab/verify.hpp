#pragma once

#include <string>
#include <vector>

#include "ablab/scenario.hpp"

namespace ablab {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

// Built-in consistency sweeps runnable against any scenario's source:
//   stokes       rim circulation of A versus flux of B through disks
//   cancellation interaction Lagrangian against the liquid's kinetic response
//   confinement  field leakage outside the tube versus winding count
//   chain        induced-EMF time integral against the closed-form response
enum class VerifySuite { stokes, cancellation, confinement, chain, all };

// Accepts the suite names above (or "all"); throws ValidationError otherwise.
VerifySuite parse_suite(const std::string& name);

std::vector<CheckResult> run_verification(const Scenario& scenario, VerifySuite suite);

}  // namespace ablab

// optimize.hpp — Euler-Lagrange optimization of the boundary modulation
// against a non-Markovian bath, by fixed-point iteration with
// under-relaxation and a monotone-acceptance safeguard on zeta.

#pragma once

#include "chainctl/bathspec.hpp"
#include "chainctl/control.hpp"

namespace chainctl::control {

struct EulerLagrangeResult {
    ModulationShape pulse;
    bool converged{false};
    int iterations{0};
    double residual{0.0};  // relative sup change of phi at the last step
    double zeta{0.0};      // zeta of the returned pulse (solver grid)

    // Non-convergence is reported, never silent: the best iterate found and
    // its residual are always populated.
};

// Solves the stationarity condition for phi(t) with boundary conditions
// phi(0) = 0, phi(T) = pi/sqrt(2): the source term Q is evaluated on the
// grid by nested quadrature, integrated twice and rescaled to meet the
// endpoint, starting from the p = 1 profile. The iteration never accepts a
// step that increases zeta.
EulerLagrangeResult solve_euler_lagrange(const bathspec::BathCorrelation& plus,
                                         const bathspec::BathCorrelation& minus,
                                         const OptimizerConfig& config, double T, double jz);

} // namespace chainctl::control

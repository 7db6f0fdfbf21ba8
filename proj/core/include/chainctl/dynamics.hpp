// dynamics.hpp — exact reference dynamics of the (N+2)-site single-excitation
// system under time-dependent boundary modulation and coupling noise, plus
// the closed-form reduced 3-mode propagator.

#pragma once

#include "chainctl/chain.hpp"
#include "chainctl/control.hpp"
#include "chainctl/noise.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace chainctl::dynamics {

struct TransferOutcome {
    double amplitude_modulus{0.0};  // f = |<N+1| U(T,0) |0>|
    double averaged_fidelity{0.5};  // F = f^2/6 + f/3 + 1/2
    double transfer_time{0.0};
    std::optional<double> zeta_prediction;
    double unitarity_defect{0.0};
    std::optional<std::uint64_t> seed;
};

struct PropagateOptions {
    double dt{0.01};
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> f;
};

// Time-ordered propagation with midpoint-sampled alpha and Delta: each step
// applies the exact exponential of the frozen midpoint Hamiltonian, so the
// evolution is unitary by construction and second-order accurate in dt.
// Constant-Hamiltonian stretches (static control between noise redraws) are
// integrated in a single exact step. For t beyond the pulse duration the
// control holds its final value; the initial state is the excitation on
// site 0. Passing a Trajectory records f(t) on [record_from, record_to].
TransferOutcome propagate_exact(const chain::ChainSpec& spec, const control::ModulationShape& mod,
                                const noise::Realization* realization, double T,
                                const PropagateOptions& options = {},
                                Trajectory* trajectory = nullptr,
                                double record_from = 0.0, double record_to = -1.0);

// Closed-form reduced propagator on (source, zero mode, target); the
// source->target element has modulus 1 at phi = pi/sqrt(2).
Eigen::Matrix3cd propagate_three_mode(const control::ModulationShape& mod, double jz, double t);

struct WindowScan {
    std::vector<double> t;
    std::vector<double> f;
    double peak_time{0.0};
    double peak_f{0.0};
    double peak_fidelity{0.0};
    double width{0.0};  // extent of the region with F >= F_peak - 0.01
};

// Samples f(t) on [t_center - window/2, t_center + window/2] and reports the
// realized peak and the high-fidelity time window around it.
WindowScan scan_transfer_window(const chain::ChainSpec& spec, const control::ModulationShape& mod,
                                const noise::Realization* realization, double t_center,
                                double window, const PropagateOptions& options = {});

} // namespace chainctl::dynamics

// control.hpp — boundary-control waveforms alpha(t): the sin^p family,
// tabulated pulses, accumulated phase, pulse energy and the Markovian-bath
// optimal modulation.

#pragma once

#include <optional>
#include <vector>

namespace chainctl::control {

enum class PulseKind { power_sine, tabulated, markov_optimal, phenomenological };

// A boundary-control waveform on [0, T]. power_sine pulses are evaluated in
// closed form; every other kind is a piecewise-linear interpolant of
// `samples` on a uniform grid including both endpoints.
struct ModulationShape {
    PulseKind kind{PulseKind::power_sine};
    double alpha_max{0.0};  // max alpha(t)
    double duration{0.0};   // T, in units of 1/J
    int power{0};           // p, power_sine only
    std::vector<double> samples;
    double phen_a{0.0}, phen_b{0.0}, phen_q{0.0};  // phenomenological parameters

    double value(double t) const;
    bool is_constant() const { return kind == PulseKind::power_sine && power == 0; }
    double grid_step() const;
};

// Accumulated phase phi(t) = J~_z int_0^t alpha dt'. Closed form for the
// power_sine family; exact piecewise-linear integral for tabulated pulses.
// Built once, O(1) per query.
class PhaseProfile {
public:
    PhaseProfile(const ModulationShape& mod, double jz);
    double operator()(double t) const;
    double total() const { return total_; }

private:
    const ModulationShape* mod_;
    double jz_{0.0};
    double total_{0.0};
    std::vector<double> node_phase_;  // tabulated kinds only
};

// c_p = sqrt(pi) Gamma(p/2+1) / Gamma((p+1)/2); c_0 = 1, c_1 = pi/2, c_2 = 2.
double c_coefficient(int p);

// Transfer-ready sin^p pulse: alpha_M = c_p pi / (sqrt(2) J~_z T), so that
// phi(T) = pi/sqrt(2). p is restricted to {0,1,2}; larger p splits the
// filter's central peak.
ModulationShape make_power_sine(int p, double T, double jz);

// sin^p pulse with an explicitly chosen amplitude. No phase normalization is
// applied; phi(T) generally misses pi/sqrt(2) unless T is matched.
ModulationShape make_power_sine_with_amplitude(int p, double T, double alpha_m);

// Transfer time implied by the phase condition for a sin^p pulse at a given
// amplitude: T = c_p pi / (sqrt(2) J~_z alpha_M).
double transfer_time_for_amplitude(int p, double alpha_m, double jz);

// Tabulated pulse from uniform samples on [0, T]. When normalize is set the
// samples are rescaled so the piecewise-linear phase integral hits
// pi/sqrt(2) exactly.
ModulationShape make_tabulated(std::vector<double> samples, double T, double jz,
                               bool normalize = true);

// Pedestal-plus-bump form alpha(t) = alpha_M (a + b sin^q(pi t/T)), amplitude
// chosen so phi(T) = pi/sqrt(2).
ModulationShape make_phenomenological(double a, double b, double q, double T, double jz);

double accumulated_phase(const ModulationShape& mod, double jz, double t);

// E = J~_z^2 int_0^T |alpha|^2 dt. Exact for both pulse representations.
double pulse_energy(const ModulationShape& mod, double jz);

struct OptimizerConfig {
    std::optional<double> energy_budget;  // E constraint; unset means lambda drives
    double lambda{0.0};
    int max_iterations{200};
    double convergence_tol{1e-8};
    int grid_points{512};
    double relaxation{0.5};

    void validate() const;
};

// Optimal modulation for a delta-correlated bath, from the transcendental
// relation t(phi) = T int_0^phi g / int_0^{pi/sqrt2} g with
// g = sqrt(2 (Phi+ cos^2(sqrt2 phi) + Phi- - lambda J~_z^2)). The monotone
// map is inverted with monotone-cubic interpolation.
ModulationShape solve_markov_optimal(double phi_plus0, double phi_minus0, double lambda,
                                     double T, double jz, int grid = 1024);

// zeta(T) = int_0^T alpha^2 (Phi+(0) cos^2(sqrt2 phi) + Phi-(0)) dt,
// the delta-correlated limit of the transfer infidelity.
double zeta_markovian(const ModulationShape& mod, double phi_plus0, double phi_minus0,
                      double jz);

// Least-squares fit of a pulse to alpha_M (a + b sin^q(pi t/T)) with alpha_M
// the static-pulse amplitude pi/(sqrt2 J~_z T). residual is relative L2.
struct PhenomenologicalFit {
    double a{0.0}, b{0.0}, q{0.0};
    double residual{0.0};
};
PhenomenologicalFit fit_phenomenological(const ModulationShape& mod, double jz);

} // namespace chainctl::control

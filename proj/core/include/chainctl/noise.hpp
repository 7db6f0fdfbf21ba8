// noise.hpp — off-diagonal coupling noise: seeded realizations (static and
// piecewise-fluctuating), Monte-Carlo ensembles and the tau_c scaling collapse.

#pragma once

#include "chainctl/chain.hpp"
#include "chainctl/control.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace chainctl::noise {

enum class Kind { statik, piecewise };
enum class TargetLinks { internal_only, internal_plus_boundary };

// J_i -> J_i (1 + Delta_i(t)) with Delta uniform in [-eps_J, eps_J].
// static noise freezes one draw per link; piecewise noise redraws
// independently on every interval [n tau_c, (n+1) tau_c). With `symmetric`
// set, mirror links share a draw (Delta_i = Delta_{N-i}).
struct NoiseProcess {
    Kind kind{Kind::statik};
    double strength{0.0};  // eps_J
    double tau_c{std::numeric_limits<double>::infinity()};
    TargetLinks target{TargetLinks::internal_only};
    bool symmetric{false};
    std::uint64_t seed{0};

    void validate() const;
};

// A concrete realization: Delta_i(t) is a pure function of
// (seed, link, interval index), so evaluation is lazy, deterministic and
// identical across thread counts.
class Realization {
public:
    Realization() = default;
    Realization(NoiseProcess process, int n_channel);

    // Delta for coupling index i in 0..N (0 and N are the boundary links).
    double delta(int coupling_index, double t) const;

    // All couplings at once, ready for the Hamiltonian builder.
    std::vector<double> deltas_at(double t) const;

    // Interior redraw times in (t0, t1), ascending.
    std::vector<double> redraw_times(double t0, double t1) const;

    bool time_dependent() const;
    const NoiseProcess& process() const { return process_; }
    int n_channel() const { return n_channel_; }

private:
    NoiseProcess process_{};
    int n_channel_{0};
};

Realization sample_realization(const NoiseProcess& process, int n_channel);

// Same process with the seed replaced; used by ensembles for per-realization
// sub-seeding.
Realization sample_realization(const NoiseProcess& process, int n_channel,
                               std::uint64_t seed_override);

// Sub-seed for realization r: mix64(master_seed, r).
std::uint64_t realization_seed(std::uint64_t master_seed, int realization_index);

struct EnsembleRunOptions {
    double dt{0.01};
    double eval_time{-1.0};  // < 0: evaluate at the pulse duration T
    int threads{1};
};

struct EnsembleResult {
    double mean_infidelity{0.0};
    double std_error{0.0};
    int n_realizations{0};
    std::vector<double> infidelities;     // per realization, by index
    std::vector<std::uint64_t> seeds;     // per realization sub-seeds

    // config echo
    chain::ChainSpec spec;
    control::ModulationShape pulse;
    NoiseProcess process;
    double dt{0.0};
    double eval_time{0.0};
    std::uint64_t master_seed{0};
};

// n_av independent exact propagations; mean and standard error of 1 - F.
// A failing realization aborts with its sub-seed identified.
EnsembleResult run_ensemble(const chain::ChainSpec& spec, const control::ModulationShape& mod,
                            const NoiseProcess& process, int n_av,
                            const EnsembleRunOptions& options = {});

// -------------------------- scaling collapse --------------------------------

struct NoiseCurvePoint {
    double eps{0.0};
    double mean_infidelity{0.0};
    double std_error{0.0};
};

struct NoiseCurve {
    double tau_c{0.0};
    std::vector<NoiseCurvePoint> points;  // ascending eps
};

struct CollapseReport {
    struct Pair {
        double tau_a{0.0}, tau_b{0.0};
        double rms{0.0};
    };
    std::vector<Pair> pairwise;
    double max_rms{0.0};
    double range{0.0};           // combined infidelity range on common support
    double relative_deviation{0.0};  // max_rms / range
    double support_lo{0.0}, support_hi{0.0};  // in eps*sqrt(2 tau_c)
};

// Rescales each curve's abscissa to eps * sqrt(2 tau_c) and reports pairwise
// RMS deviations on the common support. Requires >= 3 curves with >= 4
// points each; throws when the rescaled supports do not intersect.
CollapseReport collapse_scaling(const std::vector<NoiseCurve>& curves);

} // namespace chainctl::noise

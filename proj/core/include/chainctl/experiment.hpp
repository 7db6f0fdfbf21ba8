// experiment.hpp — batch experiment front end: JSON configs, figure presets,
// sweeps, CSV/JSON emission and run provenance.

#pragma once

#include "chainctl/chain.hpp"
#include "chainctl/noise.hpp"
#include "chainctl/serialize.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chainctl::experiment {

struct SweepAxis {
    std::string variable;        // "T", "alpha_M" or "eps_J"
    std::vector<double> values;  // resolved grid, ascending
};

SweepAxis log_axis(const std::string& variable, double lo, double hi, int points);
SweepAxis linear_axis(const std::string& variable, double lo, double hi, int points);

struct ExperimentConfig {
    std::string experiment;
    chain::ChainSpec spec = chain::ChainSpec::uniform(29, 1.0);
    std::vector<int> pulse_powers{0, 1, 2};
    SweepAxis sweep;
    std::optional<noise::NoiseProcess> noise_process;

    // noise-study knobs (fig4)
    std::vector<double> tau_c_values{0.5, 1.0, 2.0};
    std::vector<double> fluct_eps_values;
    int n_realizations{200};          // fluctuating-noise ensembles
    int n_realizations_static{1000};  // static-noise ensembles
    double alpha_static_p0{0.6};
    double alpha_static_p2{0.7};
    double alpha_fluct{0.1};
    double fluct_T{88.0};

    double markov_dump_T{860.0};  // fig5 pulse-shape dump

    double dt{0.01};
    std::string output_dir{"chainctl_out"};
    std::uint64_t master_seed{20240101};
    int threads{1};
    bool dump_trajectory{false};
    bool export_grids{true};
};

// Parses and validates a config; throws io::ConfigError on any problem.
ExperimentConfig config_from_json(const io::json& j);
io::json to_json(const ExperimentConfig& config);

// Named preset with the defaults used throughout; n_channel <= 0 keeps the
// preset default.
ExperimentConfig preset(const std::string& name, int n_channel = -1,
                        std::optional<std::uint64_t> seed = std::nullopt,
                        const std::string& output_dir = "");

std::vector<std::string> preset_names();

struct RunOutputs {
    std::vector<std::string> files;  // paths written, manifest first
};

// Dispatches on config.experiment. Numerical failures surface as
// std::runtime_error; config problems as io::ConfigError.
RunOutputs run_experiment(const ExperimentConfig& config);

RunOutputs run_fig2(const ExperimentConfig& config);
RunOutputs run_fig3a(const ExperimentConfig& config);
RunOutputs run_fig3b(const ExperimentConfig& config);
RunOutputs run_fig4(const ExperimentConfig& config);
RunOutputs run_fig5(const ExperimentConfig& config);
RunOutputs run_custom(const ExperimentConfig& config);

// Infidelity 1 - F implied by a perturbative zeta, with f = 1 - zeta clamped
// into [0, 1].
double infidelity_from_zeta(double zeta);

} // namespace chainctl::experiment

#include "chainctl/experiment.hpp"

#include "chainctl/bathspec.hpp"
#include "chainctl/dynamics.hpp"
#include "chainctl/numerics.hpp"
#include "chainctl/version.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace chainctl::experiment {

namespace fs = std::filesystem;
using io::ConfigError;
using io::json;

SweepAxis log_axis(const std::string& variable, double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw ConfigError("sweep: log axis needs 0 < min < max and points >= 2");
    SweepAxis axis;
    axis.variable = variable;
    for (int i = 0; i < points; ++i)
        axis.values.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    return axis;
}

SweepAxis linear_axis(const std::string& variable, double lo, double hi, int points) {
    if (!(hi > lo) || points < 2)
        throw ConfigError("sweep: linear axis needs min < max and points >= 2");
    SweepAxis axis;
    axis.variable = variable;
    for (int i = 0; i < points; ++i)
        axis.values.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    return axis;
}

double infidelity_from_zeta(double zeta) {
    const double f = std::clamp(1.0 - zeta, 0.0, 1.0);
    return 1.0 - bathspec::averaged_fidelity(f);
}

std::vector<std::string> preset_names() {
    return {"fig2_semicircle", "fig3a_time_sweep", "fig3b_alpha_sweep",
            "fig4_noise_robustness", "fig5_markov_optimal"};
}

namespace {

const std::vector<std::string> kExperiments = {
    "fig2_semicircle", "fig3a_time_sweep", "fig3b_alpha_sweep",
    "fig4_noise_robustness", "fig5_markov_optimal", "custom"};

SweepAxis default_sweep(const std::string& experiment) {
    if (experiment == "fig2_semicircle") return log_axis("T", 4.0, 4096.0, 13);
    if (experiment == "fig3a_time_sweep") return log_axis("T", 8.0, 512.0, 13);
    if (experiment == "fig3b_alpha_sweep") return linear_axis("alpha_M", 0.30, 1.10, 33);
    if (experiment == "fig4_noise_robustness") return log_axis("eps_J", 0.01, 0.2, 7);
    if (experiment == "fig5_markov_optimal") return log_axis("T", 86.0, 2150.0, 9);
    return {};
}

struct ChannelContext {
    chain::BathSpectrum spectrum;
    chain::SystemBathSplit split;
    double jz{0.0};
    double gap_edge{0.0};  // omega_l = (3/4) |omega_{z+1}|
    double J{0.0};
};

ChannelContext make_context(const chain::ChainSpec& spec) {
    ChannelContext ctx;
    ctx.spectrum = chain::diagonalize_channel(spec);
    ctx.split = chain::split_system_bath(ctx.spectrum);
    ctx.jz = ctx.spectrum.zero_mode_coupling;
    const int z = ctx.spectrum.zero_mode_index;  // 1-based
    ctx.gap_edge = 0.75 * std::abs(ctx.spectrum.eigenvalues(z));
    ctx.J = spec.couplings.front();
    return ctx;
}

// Writes the manifest and tracks emitted files.
class RunContext {
public:
    RunContext(const ExperimentConfig& config) : config_(config) {
        fs::create_directories(config.output_dir);
        manifest_["version"] = kVersion;
        manifest_["experiment"] = config.experiment;
        manifest_["resolved_config"] = experiment::to_json(config);
        manifest_["seed_rule"] =
            "point seed = mix64(master_seed, row_index); "
            "realization seed = mix64(point seed, realization_index)";
    }

    std::string path(const std::string& name) const {
        return (fs::path(config_.output_dir) / name).string();
    }

    void note_output(const std::string& file) { outputs_.push_back(file); }
    void annotate(const std::string& key, json value) { manifest_[key] = std::move(value); }
    void note_seed(const std::string& label, std::uint64_t seed) {
        seeds_[label] = seed;
    }

    RunOutputs finish() {
        manifest_["point_seeds"] = seeds_;
        manifest_["outputs"] = outputs_;
        const std::string manifest_path = path("manifest.json");
        std::ofstream out(manifest_path);
        out << manifest_.dump(2) << '\n';
        RunOutputs result;
        result.files.push_back(manifest_path);
        for (const auto& f : outputs_) result.files.push_back(f);
        return result;
    }

private:
    const ExperimentConfig& config_;
    json manifest_;
    json seeds_ = json::object();
    std::vector<std::string> outputs_;
};

struct PeakResult {
    double infidelity{0.0};
    double peak_time{0.0};
    double width{0.0};
};

// Noiseless transfer quality at the realized peak, scanned over
// [0.8, 2.2] x nominal T.
PeakResult realized_peak(const chain::ChainSpec& spec, const control::ModulationShape& mod,
                         double dt) {
    dynamics::PropagateOptions options;
    options.dt = dt;
    const double T = mod.duration;
    const auto scan = dynamics::scan_transfer_window(spec, mod, nullptr, 1.5 * T, 1.4 * T, options);
    return {1.0 - scan.peak_fidelity, scan.peak_time, scan.width};
}

void export_spectrum_csv(RunContext& run, const ChannelContext& ctx) {
    const std::string file = run.path("spectrum.csv");
    io::CsvWriter csv(file);
    csv.header({"omega", "G_minus", "G_plus"});
    // discrete mode weights followed by the bounding semicircle on a grid
    for (const auto& mode : ctx.split.even)
        csv.row({mode.omega, mode.coupling * mode.coupling, 0.0});
    for (const auto& mode : ctx.split.odd)
        csv.row({mode.omega, 0.0, mode.coupling * mode.coupling});
    run.note_output(file);

    const std::string semi_file = run.path("spectrum_semicircle.csv");
    io::CsvWriter semi(semi_file);
    semi.header({"omega", "G_minus", "G_plus"});
    const int points = 801;
    for (int i = 0; i < points; ++i) {
        const double w = -2.0 * ctx.J + 4.0 * ctx.J * i / (points - 1);
        const double g = bathspec::semicircle_gapped(ctx.J, ctx.gap_edge, w);
        semi.row({w, g, g});
    }
    run.note_output(semi_file);
}

void export_filter_csv(RunContext& run, const ChannelContext& ctx,
                       const control::ModulationShape& mod, const std::string& name) {
    bathspec::FilterGridOptions options;
    options.omega_max = 2.2 * ctx.J;
    const auto minus = bathspec::filter_grid(mod, ctx.jz, bathspec::Parity::minus, options);
    const auto plus = bathspec::filter_grid(mod, ctx.jz, bathspec::Parity::plus, options);
    const std::string file = run.path(name);
    io::CsvWriter csv(file);
    csv.header({"omega", "F_minus", "F_plus"});
    for (std::size_t i = 0; i < minus.omega.size(); i += 4)
        csv.row({minus.omega[i], minus.value[i], plus.value[i]});
    run.note_output(file);
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    if (!j.contains("experiment")) throw ConfigError("missing key: experiment");
    config.experiment = j.at("experiment").get<std::string>();
    if (std::find(kExperiments.begin(), kExperiments.end(), config.experiment) ==
        kExperiments.end())
        throw ConfigError("unknown experiment '" + config.experiment + "'");

    if (j.contains("chain")) config.spec = io::chain_spec_from_json(j.at("chain"));

    if (j.contains("pulses")) {
        config.pulse_powers.clear();
        for (const auto& p : j.at("pulses")) {
            if (p.is_number_integer())
                config.pulse_powers.push_back(p.get<int>());
            else if (p.is_object() && p.contains("p"))
                config.pulse_powers.push_back(p.at("p").get<int>());
            else
                throw ConfigError("pulses: entries must be p values or {\"p\": int}");
        }
        if (config.pulse_powers.empty()) throw ConfigError("pulses: empty list");
        for (int p : config.pulse_powers)
            if (p < 0 || p > 2) throw ConfigError("pulses: p must be in {0,1,2}");
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        const std::string variable = s.value("variable", "");
        if (variable != "T" && variable != "alpha_M" && variable != "eps_J")
            throw ConfigError("sweep: variable must be T, alpha_M or eps_J");
        if (s.contains("values")) {
            config.sweep.variable = variable;
            config.sweep.values = s.at("values").get<std::vector<double>>();
            if (config.sweep.values.empty()) throw ConfigError("sweep: empty values");
            if (!std::is_sorted(config.sweep.values.begin(), config.sweep.values.end()))
                throw ConfigError("sweep: values must be ascending");
        } else {
            const double lo = s.value("min", 0.0);
            const double hi = s.value("max", 0.0);
            const int points = s.value("points", 0);
            const std::string scale = s.value("scale", "log");
            config.sweep = scale == "linear" ? linear_axis(variable, lo, hi, points)
                                             : log_axis(variable, lo, hi, points);
        }
    } else {
        config.sweep = default_sweep(config.experiment);
        if (config.experiment == "custom")
            throw ConfigError("custom experiment requires a sweep");
    }

    if (j.contains("noise")) config.noise_process = io::noise_from_json(j.at("noise"));

    config.tau_c_values = j.value("tau_c_values", config.tau_c_values);
    config.fluct_eps_values = j.value("fluct_eps_values", config.fluct_eps_values);
    config.n_realizations = j.value("n_realizations", config.n_realizations);
    config.n_realizations_static = j.value("n_realizations_static", config.n_realizations_static);
    if (config.n_realizations < 2 || config.n_realizations_static < 2)
        throw ConfigError("n_realizations must be >= 2");
    config.alpha_static_p0 = j.value("alpha_static_p0", config.alpha_static_p0);
    config.alpha_static_p2 = j.value("alpha_static_p2", config.alpha_static_p2);
    config.alpha_fluct = j.value("alpha_fluct", config.alpha_fluct);
    config.fluct_T = j.value("fluct_T", config.fluct_T);
    config.markov_dump_T = j.value("markov_dump_T", config.markov_dump_T);
    config.dt = j.value("dt", config.experiment == "fig4_noise_robustness" ? 0.02 : 0.01);
    if (!(config.dt > 0.0)) throw ConfigError("dt must be > 0");
    config.output_dir = j.value("output_dir", config.output_dir);
    config.master_seed = j.value("master_seed", config.master_seed);
    config.threads = j.value("threads", config.threads);
    if (config.threads < 1) throw ConfigError("threads must be >= 1");
    config.dump_trajectory = j.value("dump_trajectory", config.dump_trajectory);
    config.export_grids = j.value("export_grids", config.export_grids);

    if (config.fluct_eps_values.empty())
        config.fluct_eps_values = log_axis("eps_J", 0.02, 0.5, 7).values;
    return config;
}

json to_json(const ExperimentConfig& config) {
    json j;
    j["experiment"] = config.experiment;
    j["chain"] = io::to_json(config.spec);
    j["pulses"] = config.pulse_powers;
    j["sweep"] = {{"variable", config.sweep.variable}, {"values", config.sweep.values}};
    if (config.noise_process) j["noise"] = io::to_json(*config.noise_process);
    j["tau_c_values"] = config.tau_c_values;
    j["fluct_eps_values"] = config.fluct_eps_values;
    j["n_realizations"] = config.n_realizations;
    j["n_realizations_static"] = config.n_realizations_static;
    j["alpha_static_p0"] = config.alpha_static_p0;
    j["alpha_static_p2"] = config.alpha_static_p2;
    j["alpha_fluct"] = config.alpha_fluct;
    j["fluct_T"] = config.fluct_T;
    j["markov_dump_T"] = config.markov_dump_T;
    j["dt"] = config.dt;
    j["output_dir"] = config.output_dir;
    j["master_seed"] = config.master_seed;
    j["threads"] = config.threads;
    j["dump_trajectory"] = config.dump_trajectory;
    j["export_grids"] = config.export_grids;
    return j;
}

ExperimentConfig preset(const std::string& name, int n_channel,
                        std::optional<std::uint64_t> seed, const std::string& output_dir) {
    json j;
    j["experiment"] = name;
    ExperimentConfig config = config_from_json(j);
    if (n_channel > 0) {
        if (n_channel % 2 == 0) throw ConfigError("preset: n must be odd");
        config.spec = chain::ChainSpec::uniform(n_channel, 1.0);
    }
    if (seed) config.master_seed = *seed;
    config.output_dir = output_dir.empty() ? "out_" + name : output_dir;
    return config;
}

RunOutputs run_experiment(const ExperimentConfig& config) {
    if (config.experiment == "fig2_semicircle") return run_fig2(config);
    if (config.experiment == "fig3a_time_sweep") return run_fig3a(config);
    if (config.experiment == "fig3b_alpha_sweep") return run_fig3b(config);
    if (config.experiment == "fig4_noise_robustness") return run_fig4(config);
    if (config.experiment == "fig5_markov_optimal") return run_fig5(config);
    if (config.experiment == "custom") return run_custom(config);
    throw ConfigError("unknown experiment '" + config.experiment + "'");
}

RunOutputs run_fig2(const ExperimentConfig& config) {
    if (config.sweep.variable != "T" || config.sweep.values.empty())
        throw ConfigError("fig2_semicircle needs a T sweep");
    RunContext run(config);
    const ChannelContext ctx = make_context(config.spec);
    const bathspec::SemicircleBath bath{ctx.J, ctx.gap_edge};

    const std::string file = run.path("fig2.csv");
    io::CsvWriter csv(file);
    std::vector<std::string> cols{"T"};
    for (int p : config.pulse_powers) cols.push_back("infidelity_p" + std::to_string(p));
    for (int p : config.pulse_powers) cols.push_back("zeta_p" + std::to_string(p));
    csv.header(cols);

    const int rows = static_cast<int>(config.sweep.values.size());
    const int np = static_cast<int>(config.pulse_powers.size());
    std::vector<std::vector<double>> zeta(rows, std::vector<double>(np, 0.0));
    num::parallel_for(rows, config.threads, [&](int r) {
        const double T = config.sweep.values[r];
        for (int c = 0; c < np; ++c) {
            const auto mod = control::make_power_sine(config.pulse_powers[c], T, ctx.jz);
            zeta[r][c] = bathspec::zeta_frequency_domain(mod, ctx.jz, bath).value;
        }
    });
    for (int r = 0; r < rows; ++r) {
        std::vector<double> row{config.sweep.values[r]};
        for (int c = 0; c < np; ++c) row.push_back(infidelity_from_zeta(zeta[r][c]));
        for (int c = 0; c < np; ++c) row.push_back(zeta[r][c]);
        csv.row(row);
    }
    run.note_output(file);

    if (config.export_grids) {
        export_spectrum_csv(run, ctx);
        const double mid_T = config.sweep.values[config.sweep.values.size() / 2];
        for (int p : config.pulse_powers) {
            const auto mod = control::make_power_sine(p, mid_T, ctx.jz);
            export_filter_csv(run, ctx, mod, "filter_p" + std::to_string(p) + ".csv");
        }
    }
    return run.finish();
}

RunOutputs run_fig3a(const ExperimentConfig& config) {
    if (config.sweep.variable != "T" || config.sweep.values.empty())
        throw ConfigError("fig3a_time_sweep needs a T sweep");
    RunContext run(config);
    const ChannelContext ctx = make_context(config.spec);

    const int rows = static_cast<int>(config.sweep.values.size());
    const int np = static_cast<int>(config.pulse_powers.size());
    std::vector<std::vector<double>> infid(rows, std::vector<double>(np));
    num::parallel_for(rows * np, config.threads, [&](int idx) {
        const int r = idx / np, c = idx % np;
        const auto mod =
            control::make_power_sine(config.pulse_powers[c], config.sweep.values[r], ctx.jz);
        infid[r][c] = realized_peak(config.spec, mod, config.dt).infidelity;
    });

    const std::string file = run.path("fig3a.csv");
    io::CsvWriter csv(file);
    std::vector<std::string> cols{"T"};
    for (int p : config.pulse_powers) cols.push_back("infidelity_p" + std::to_string(p));
    csv.header(cols);
    for (int r = 0; r < rows; ++r) {
        std::vector<double> row{config.sweep.values[r]};
        for (int c = 0; c < np; ++c) row.push_back(infid[r][c]);
        csv.row(row);
    }
    run.note_output(file);
    return run.finish();
}

RunOutputs run_fig3b(const ExperimentConfig& config) {
    if (config.sweep.variable != "alpha_M" || config.sweep.values.empty())
        throw ConfigError("fig3b_alpha_sweep needs an alpha_M sweep");
    RunContext run(config);
    const ChannelContext ctx = make_context(config.spec);

    const int rows = static_cast<int>(config.sweep.values.size());
    const int np = static_cast<int>(config.pulse_powers.size());
    std::vector<std::vector<PeakResult>> peak(rows, std::vector<PeakResult>(np));
    num::parallel_for(rows * np, config.threads, [&](int idx) {
        const int r = idx / np, c = idx % np;
        const int p = config.pulse_powers[c];
        const double alpha = config.sweep.values[r];
        const double T = control::transfer_time_for_amplitude(p, alpha, ctx.jz);
        const auto mod = control::make_power_sine(p, T, ctx.jz);
        peak[r][c] = realized_peak(config.spec, mod, config.dt);
    });

    const std::string file = run.path("fig3b.csv");
    io::CsvWriter csv(file);
    std::vector<std::string> cols{"alpha_M"};
    for (int p : config.pulse_powers) {
        cols.push_back("infidelity_p" + std::to_string(p));
        cols.push_back("T_realized_p" + std::to_string(p));
    }
    csv.header(cols);
    for (int r = 0; r < rows; ++r) {
        std::vector<double> row{config.sweep.values[r]};
        for (int c = 0; c < np; ++c) {
            row.push_back(peak[r][c].infidelity);
            row.push_back(peak[r][c].peak_time);
        }
        csv.row(row);
    }
    run.note_output(file);
    return run.finish();
}

RunOutputs run_fig4(const ExperimentConfig& config) {
    if (config.sweep.values.empty()) throw ConfigError("fig4_noise_robustness needs an eps_J sweep");
    RunContext run(config);
    const ChannelContext ctx = make_context(config.spec);

    const std::string file = run.path("fig4.csv");
    io::CsvWriter csv(file);
    csv.header({"pulse_p", "noise_kind", "tau_c", "eps_J", "mean_infidelity", "std_error"});

    int row_index = 0;
    auto ensemble_at = [&](const control::ModulationShape& mod, noise::NoiseProcess process,
                           double eval_time, int n_av) {
        process.seed = num::mix64(config.master_seed, static_cast<std::uint64_t>(row_index));
        run.note_seed("row_" + std::to_string(row_index), process.seed);
        ++row_index;
        noise::EnsembleRunOptions options;
        options.dt = config.dt;
        options.eval_time = eval_time;
        options.threads = config.threads;
        return noise::run_ensemble(config.spec, mod, process, n_av, options);
    };

    // static noise at the strong-coupling optima
    const std::vector<std::pair<int, double>> static_pulses = {
        {0, config.alpha_static_p0}, {2, config.alpha_static_p2}};
    for (const auto& [p, alpha] : static_pulses) {
        if (std::find(config.pulse_powers.begin(), config.pulse_powers.end(), p) ==
            config.pulse_powers.end())
            continue;
        const double T = control::transfer_time_for_amplitude(p, alpha, ctx.jz);
        const auto mod = control::make_power_sine(p, T, ctx.jz);
        const PeakResult noiseless = realized_peak(config.spec, mod, config.dt);

        noise::NoiseProcess process;
        process.kind = noise::Kind::statik;
        std::vector<double> eps_values = config.sweep.values;
        eps_values.insert(eps_values.begin(), 0.0);
        for (double eps : eps_values) {
            process.strength = eps;
            const auto result =
                ensemble_at(mod, process, noiseless.peak_time, config.n_realizations_static);
            csv.row({static_cast<double>(p), 0.0, 0.0, eps, result.mean_infidelity,
                     result.std_error});
        }
    }

    // piecewise noise at fixed alpha_M and T, plus the tau_c scaling collapse
    std::vector<noise::NoiseCurve> curves;
    {
        const auto mod =
            control::make_power_sine_with_amplitude(0, config.fluct_T, config.alpha_fluct);
        for (double tau : config.tau_c_values) {
            noise::NoiseProcess process;
            process.kind = noise::Kind::piecewise;
            process.tau_c = tau;
            noise::NoiseCurve curve;
            curve.tau_c = tau;
            for (double eps : config.fluct_eps_values) {
                process.strength = eps;
                const auto result = ensemble_at(mod, process, config.fluct_T,
                                                config.n_realizations);
                csv.row({0.0, 1.0, tau, eps, result.mean_infidelity, result.std_error});
                curve.points.push_back({eps, result.mean_infidelity, result.std_error});
            }
            curves.push_back(std::move(curve));
        }
    }
    run.note_output(file);

    if (curves.size() >= 3 && config.fluct_eps_values.size() >= 4) {
        const auto report = noise::collapse_scaling(curves);
        json jr;
        jr["max_rms"] = report.max_rms;
        jr["range"] = report.range;
        jr["relative_deviation"] = report.relative_deviation;
        jr["support"] = {report.support_lo, report.support_hi};
        json pairs = json::array();
        for (const auto& pair : report.pairwise)
            pairs.push_back({{"tau_a", pair.tau_a}, {"tau_b", pair.tau_b}, {"rms", pair.rms}});
        jr["pairwise"] = pairs;
        const std::string report_file = run.path("collapse_report.json");
        std::ofstream out(report_file);
        out << jr.dump(2) << '\n';
        run.note_output(report_file);
    }
    return run.finish();
}

RunOutputs run_fig5(const ExperimentConfig& config) {
    if (config.sweep.variable != "T" || config.sweep.values.empty())
        throw ConfigError("fig5_markov_optimal needs a T sweep");
    RunContext run(config);
    const ChannelContext ctx = make_context(config.spec);

    double phi_plus0 = 0.0, phi_minus0 = 0.0;
    for (const auto& mode : ctx.split.odd) phi_plus0 += mode.coupling * mode.coupling;
    for (const auto& mode : ctx.split.even) phi_minus0 += mode.coupling * mode.coupling;
    run.annotate("phi_plus0", phi_plus0);
    run.annotate("phi_minus0", phi_minus0);

    const std::string file = run.path("fig5.csv");
    io::CsvWriter csv(file);
    csv.header({"T", "infidelity_markov_optimal", "infidelity_p0"});
    for (double T : config.sweep.values) {
        const auto optimal = control::solve_markov_optimal(phi_plus0, phi_minus0, 0.0, T, ctx.jz);
        const auto flat = control::make_power_sine(0, T, ctx.jz);
        const double zeta_opt = control::zeta_markovian(optimal, phi_plus0, phi_minus0, ctx.jz);
        const double zeta_p0 = control::zeta_markovian(flat, phi_plus0, phi_minus0, ctx.jz);
        csv.row({T, infidelity_from_zeta(zeta_opt), infidelity_from_zeta(zeta_p0)});
    }
    run.note_output(file);

    // pulse-shape dump and phenomenological fit at the designated T
    {
        const double T = config.markov_dump_T;
        const auto optimal = control::solve_markov_optimal(phi_plus0, phi_minus0, 0.0, T, ctx.jz);
        const auto flat = control::make_power_sine(0, T, ctx.jz);
        const std::string dump_file = run.path("fig5_pulse.csv");
        io::CsvWriter dump(dump_file);
        dump.header({"t", "alpha_markov_optimal", "alpha_p0"});
        const int points = 513;
        for (int i = 0; i < points; ++i) {
            const double t = T * static_cast<double>(i) / (points - 1);
            dump.row({t, optimal.value(t), flat.value(t)});
        }
        run.note_output(dump_file);

        const auto fit = control::fit_phenomenological(optimal, ctx.jz);
        run.annotate("markov_fit", {{"a", fit.a},
                                    {"b", fit.b},
                                    {"q", fit.q},
                                    {"b_over_a", fit.b / fit.a},
                                    {"residual", fit.residual},
                                    {"T", T}});
    }
    return run.finish();
}

RunOutputs run_custom(const ExperimentConfig& config) {
    if (config.sweep.values.empty()) throw ConfigError("custom experiment needs a sweep");
    RunContext run(config);
    const ChannelContext ctx = make_context(config.spec);

    const std::string file = run.path("custom.csv");
    io::CsvWriter csv(file);

    const bool noisy = config.noise_process.has_value() && config.noise_process->strength > 0.0;
    std::vector<std::string> cols{config.sweep.variable};
    for (int p : config.pulse_powers) {
        cols.push_back("infidelity_p" + std::to_string(p));
        if (noisy) cols.push_back("std_error_p" + std::to_string(p));
    }
    csv.header(cols);

    int row_index = 0;
    for (double x : config.sweep.values) {
        std::vector<double> row{x};
        for (int p : config.pulse_powers) {
            control::ModulationShape mod;
            noise::NoiseProcess process =
                config.noise_process.value_or(noise::NoiseProcess{});
            if (config.sweep.variable == "T") {
                mod = control::make_power_sine(p, x, ctx.jz);
            } else if (config.sweep.variable == "alpha_M") {
                mod = control::make_power_sine(
                    p, control::transfer_time_for_amplitude(p, x, ctx.jz), ctx.jz);
            } else {  // eps_J
                if (!config.noise_process)
                    throw ConfigError("custom eps_J sweep needs a noise block");
                const double alpha = config.alpha_static_p0;
                mod = control::make_power_sine(
                    p, control::transfer_time_for_amplitude(p, alpha, ctx.jz), ctx.jz);
                process.strength = x;
            }

            if (noisy || config.sweep.variable == "eps_J") {
                process.seed = num::mix64(config.master_seed, static_cast<std::uint64_t>(row_index));
                run.note_seed("row_" + std::to_string(row_index), process.seed);
                noise::EnsembleRunOptions options;
                options.dt = config.dt;
                options.threads = config.threads;
                const auto result = noise::run_ensemble(config.spec, mod, process,
                                                        config.n_realizations, options);
                row.push_back(result.mean_infidelity);
                row.push_back(result.std_error);
            } else {
                dynamics::PropagateOptions options;
                options.dt = config.dt;
                dynamics::Trajectory traj;
                const bool want_traj = config.dump_trajectory && row_index == 0;
                const auto outcome = dynamics::propagate_exact(
                    config.spec, mod, nullptr, mod.duration, options,
                    want_traj ? &traj : nullptr, 0.0, mod.duration);
                row.push_back(1.0 - outcome.averaged_fidelity);
                if (want_traj) {
                    const std::string traj_file =
                        run.path("trajectory_p" + std::to_string(p) + ".csv");
                    io::CsvWriter tcsv(traj_file);
                    tcsv.header({"t", "f"});
                    for (std::size_t i = 0; i < traj.t.size(); ++i)
                        tcsv.row({traj.t[i], traj.f[i]});
                    run.note_output(traj_file);
                }
            }
            ++row_index;
        }
        csv.row(row);
    }
    run.note_output(file);
    return run.finish();
}

} // namespace chainctl::experiment

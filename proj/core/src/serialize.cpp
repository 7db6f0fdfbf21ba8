#include "chainctl/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace chainctl::io {

namespace {

double require_positive(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key: ") + key);
    const double v = j.at(key).get<double>();
    if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be > 0");
    return v;
}

} // namespace

json to_json(const chain::ChainSpec& spec) {
    json j;
    j["n_channel"] = spec.n_channel;
    j["couplings"] = spec.couplings;
    j["boundary_couplings"] = {spec.boundary_couplings[0], spec.boundary_couplings[1]};
    return j;
}

chain::ChainSpec chain_spec_from_json(const json& j) {
    chain::ChainSpec spec;
    if (!j.contains("n_channel")) throw ConfigError("chain: missing n_channel");
    spec.n_channel = j.at("n_channel").get<int>();
    const bool has_uniform = j.contains("uniform_J");
    const bool has_list = j.contains("couplings");
    if (has_uniform == has_list)
        throw ConfigError("chain: provide exactly one of couplings / uniform_J");
    if (has_uniform) {
        const double J = require_positive(j, "uniform_J");
        spec.couplings.assign(spec.n_channel >= 1 ? spec.n_channel - 1 : 0, J);
        spec.boundary_couplings = {J, J};
    } else {
        spec.couplings = j.at("couplings").get<std::vector<double>>();
    }
    if (j.contains("boundary_couplings")) {
        const auto b = j.at("boundary_couplings").get<std::vector<double>>();
        if (b.size() != 2) throw ConfigError("chain: boundary_couplings must hold [J0, JN]");
        spec.boundary_couplings = {b[0], b[1]};
    } else if (!has_uniform) {
        throw ConfigError("chain: boundary_couplings required with explicit couplings");
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("chain: ") + e.what());
    }
    return spec;
}

namespace {

const char* kind_name(control::PulseKind kind) {
    switch (kind) {
    case control::PulseKind::power_sine: return "power_sine";
    case control::PulseKind::tabulated: return "tabulated";
    case control::PulseKind::markov_optimal: return "markov_optimal";
    case control::PulseKind::phenomenological: return "phenomenological";
    }
    return "power_sine";
}

} // namespace

json to_json(const control::ModulationShape& mod) {
    json j;
    j["kind"] = kind_name(mod.kind);
    j["alpha_M"] = mod.alpha_max;
    j["T"] = mod.duration;
    if (mod.kind == control::PulseKind::power_sine) {
        j["p"] = mod.power;
    } else {
        j["samples"] = mod.samples;
    }
    if (mod.kind == control::PulseKind::phenomenological) {
        j["a"] = mod.phen_a;
        j["b"] = mod.phen_b;
        j["q"] = mod.phen_q;
    }
    return j;
}

control::ModulationShape modulation_from_json(const json& j) {
    const std::string kind = j.value("kind", "power_sine");
    const double T = require_positive(j, "T");
    if (kind == "power_sine") {
        if (!j.contains("p")) throw ConfigError("pulse: power_sine needs p");
        const double alpha = j.value("alpha_M", -1.0);
        if (alpha <= 0.0) throw ConfigError("pulse: power_sine needs alpha_M > 0");
        return control::make_power_sine_with_amplitude(j.at("p").get<int>(), T, alpha);
    }
    if (!j.contains("samples")) throw ConfigError("pulse: tabulated kinds need samples");
    control::ModulationShape mod;
    mod.duration = T;
    mod.samples = j.at("samples").get<std::vector<double>>();
    if (mod.samples.size() < 2) throw ConfigError("pulse: need >= 2 samples");
    for (double v : mod.samples)
        if (v < 0.0) throw ConfigError("pulse: samples must be >= 0");
    double peak = 0.0;
    for (double v : mod.samples) peak = std::max(peak, v);
    mod.alpha_max = peak;
    if (kind == "tabulated") {
        mod.kind = control::PulseKind::tabulated;
    } else if (kind == "markov_optimal") {
        mod.kind = control::PulseKind::markov_optimal;
    } else if (kind == "phenomenological") {
        mod.kind = control::PulseKind::phenomenological;
        mod.phen_a = j.value("a", 0.0);
        mod.phen_b = j.value("b", 0.0);
        mod.phen_q = j.value("q", 0.0);
    } else {
        throw ConfigError("pulse: unknown kind '" + kind + "'");
    }
    return mod;
}

json to_json(const noise::NoiseProcess& process) {
    json j;
    j["kind"] = process.kind == noise::Kind::statik ? "static" : "piecewise";
    j["strength"] = process.strength;
    if (process.kind == noise::Kind::piecewise) j["tau_c"] = process.tau_c;
    j["target"] = process.target == noise::TargetLinks::internal_only
                      ? "internal_only"
                      : "internal_plus_boundary";
    j["symmetric"] = process.symmetric;
    j["seed"] = process.seed;
    return j;
}

noise::NoiseProcess noise_from_json(const json& j) {
    noise::NoiseProcess process;
    const std::string kind = j.value("kind", "static");
    if (kind == "static") {
        process.kind = noise::Kind::statik;
    } else if (kind == "piecewise") {
        process.kind = noise::Kind::piecewise;
        process.tau_c = require_positive(j, "tau_c");
    } else {
        throw ConfigError("noise: unknown kind '" + kind + "'");
    }
    process.strength = j.value("strength", 0.0);
    const std::string target = j.value("target", "internal_only");
    if (target == "internal_only") {
        process.target = noise::TargetLinks::internal_only;
    } else if (target == "internal_plus_boundary") {
        process.target = noise::TargetLinks::internal_plus_boundary;
    } else {
        throw ConfigError("noise: unknown target '" + target + "'");
    }
    process.symmetric = j.value("symmetric", false);
    process.seed = j.value("seed", std::uint64_t{0});
    try {
        process.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
    return process;
}

json to_json(const noise::EnsembleResult& result, bool include_realizations) {
    json j;
    j["mean_infidelity"] = result.mean_infidelity;
    j["std_error"] = result.std_error;
    j["n_realizations"] = result.n_realizations;
    j["dt"] = result.dt;
    j["eval_time"] = result.eval_time;
    j["master_seed"] = result.master_seed;
    j["config"] = {{"chain", to_json(result.spec)},
                   {"pulse", to_json(result.pulse)},
                   {"noise", to_json(result.process)}};
    if (include_realizations) {
        json list = json::array();
        for (int r = 0; r < result.n_realizations; ++r)
            list.push_back({{"realization_index", r},
                            {"seed", result.seeds[r]},
                            {"infidelity", result.infidelities[r]}});
        j["realizations"] = std::move(list);
    }
    return j;
}

std::string format_double(double v) {
    char buffer[40];
    const auto res = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open CSV output: " + path);
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    raw_row(columns);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    out_ << line << '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    out_ << line << '\n';
}

} // namespace chainctl::io

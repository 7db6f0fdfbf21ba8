// serialize.hpp — JSON round-trips for the domain types and locale-free CSV.

#pragma once

#include "chainctl/chain.hpp"
#include "chainctl/control.hpp"
#include "chainctl/noise.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace chainctl::io {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ChainSpec: {"n_channel": int, "couplings": [..] | "uniform_J": f,
//             "boundary_couplings": [J0, JN]}
json to_json(const chain::ChainSpec& spec);
chain::ChainSpec chain_spec_from_json(const json& j);

// Pulse: {"kind": "...", "alpha_M": f, "T": f, "p": int | "samples": [..]}
json to_json(const control::ModulationShape& mod);
control::ModulationShape modulation_from_json(const json& j);

json to_json(const noise::NoiseProcess& process);
noise::NoiseProcess noise_from_json(const json& j);

json to_json(const noise::EnsembleResult& result, bool include_realizations = false);

// Shortest round-trippable decimal representation, '.' separator, no locale.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
};

} // namespace chainctl::io

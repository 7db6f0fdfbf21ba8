#include <doctest.h>

#include "chainctl/dynamics.hpp"
#include "chainctl/noise.hpp"
#include "chainctl/numerics.hpp"
#include "chainctl/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace chainctl;

TEST_SUITE_BEGIN("noise");

TEST_CASE("zero strength means zero deltas") {
    noise::NoiseProcess process;
    process.strength = 0.0;
    const auto realization = noise::sample_realization(process, 9);
    for (int i = 0; i <= 9; ++i) CHECK(realization.delta(i, 3.7) == 0.0);
}

TEST_CASE("same seed reproduces a static realization exactly") {
    noise::NoiseProcess process;
    process.strength = 0.1;
    process.seed = 1234;
    const auto a = noise::sample_realization(process, 9);
    const auto b = noise::sample_realization(process, 9);
    for (int i = 1; i < 9; ++i) {
        CHECK(a.delta(i, 0.0) == b.delta(i, 0.0));
        CHECK(a.delta(i, 0.0) == a.delta(i, 55.0));  // static: frozen in time
        CHECK(std::abs(a.delta(i, 0.0)) <= 0.1);
    }
    const auto c = noise::sample_realization(process, 9, 999);
    CHECK(a.delta(1, 0.0) != c.delta(1, 0.0));
}

TEST_CASE("piecewise noise redraws exactly once per correlation interval") {
    noise::NoiseProcess process;
    process.kind = noise::Kind::piecewise;
    process.strength = 0.1;
    process.tau_c = 1.0;
    process.seed = 5;
    const auto realization = noise::sample_realization(process, 9);

    std::set<double> values;
    for (int n = 0; n < 10; ++n) {
        const double v0 = realization.delta(3, n + 0.25);
        const double v1 = realization.delta(3, n + 0.75);
        CHECK(v0 == v1);  // constant inside [n, n+1)
        values.insert(v0);
    }
    CHECK(values.size() == 10);

    const auto cuts = realization.redraw_times(0.0, 10.0);
    REQUIRE(cuts.size() == 9);
    CHECK(cuts.front() == doctest::Approx(1.0));
    CHECK(cuts.back() == doctest::Approx(9.0));

    // empirical variance of the uniform draw approaches eps^2/3
    double acc = 0.0;
    int count = 0;
    for (int link = 1; link < 9; ++link)
        for (int n = 0; n < 4000; ++n) {
            const double v = realization.delta(link, n * process.tau_c + 0.5);
            acc += v * v;
            ++count;
        }
    CHECK(acc / count == doctest::Approx(0.1 * 0.1 / 3.0).epsilon(0.05));
}

TEST_CASE("pooled deltas pass a KS test against the uniform law") {
    noise::NoiseProcess process;
    process.kind = noise::Kind::piecewise;
    process.strength = 0.25;
    process.tau_c = 1.0;
    process.seed = 77;
    const auto realization = noise::sample_realization(process, 9);
    std::vector<double> samples;
    for (int link = 1; link < 9; ++link)
        for (int n = 0; n < 1250; ++n) samples.push_back(realization.delta(link, n + 0.5));
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = (samples[i] + 0.25) / 0.5;
        d = std::max(d, std::abs(cdf - (i + 1) / n));
        d = std::max(d, std::abs(cdf - i / n));
    }
    CHECK(n >= 1e4);
    CHECK(d < 1.628 / std::sqrt(n));  // 1% critical value
}

TEST_CASE("link targeting and the symmetric-mirror flag") {
    noise::NoiseProcess process;
    process.strength = 0.2;
    process.seed = 9;
    const auto internal = noise::sample_realization(process, 9);
    CHECK(internal.delta(0, 0.0) == 0.0);
    CHECK(internal.delta(9, 0.0) == 0.0);
    CHECK(internal.delta(4, 0.0) != 0.0);

    process.target = noise::TargetLinks::internal_plus_boundary;
    const auto both = noise::sample_realization(process, 9);
    CHECK(both.delta(0, 0.0) != 0.0);
    CHECK(both.delta(9, 0.0) != 0.0);
    // absolute link indexing: shared internal draws do not shift with the flag
    CHECK(both.delta(4, 0.0) == internal.delta(4, 0.0));

    process.symmetric = true;
    const auto symmetric = noise::sample_realization(process, 9);
    for (int i = 0; i <= 9; ++i)
        CHECK(symmetric.delta(i, 0.0) == symmetric.delta(9 - i, 0.0));
}

TEST_CASE("symmetric static noise preserves the channel zero mode exactly") {
    const auto spec = chain::ChainSpec::uniform(9, 1.0);
    noise::NoiseProcess process;
    process.strength = 0.3;
    process.symmetric = true;
    process.seed = 31;
    const auto realization = noise::sample_realization(process, 9);
    const auto deltas = realization.deltas_at(0.0);
    const auto h = chain::build_single_excitation_hamiltonian(spec, 0.0, deltas);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.block(1, 1, 9, 9));
    double closest = 1e300;
    for (int k = 0; k < 9; ++k) closest = std::min(closest, std::abs(solver.eigenvalues()(k)));
    CHECK(closest < 1e-10);
}

TEST_CASE("ensembles: zero-noise mean equals the noiseless run with zero spread") {
    const auto spec = chain::ChainSpec::uniform(5, 1.0);
    const double jz = std::sqrt(2.0 / 6.0);
    const auto mod = control::make_power_sine(0, control::transfer_time_for_amplitude(0, 0.4, jz),
                                              jz);
    noise::NoiseProcess process;  // strength 0
    const auto result = noise::run_ensemble(spec, mod, process, 4);
    const auto noiseless = dynamics::propagate_exact(spec, mod, nullptr, mod.duration);
    CHECK(result.mean_infidelity ==
          doctest::Approx(1.0 - noiseless.averaged_fidelity).epsilon(1e-14));
    CHECK(result.std_error == 0.0);
    CHECK_THROWS_AS(noise::run_ensemble(spec, mod, process, 1), std::invalid_argument);
}

TEST_CASE("ensembles are bit-reproducible and thread-count independent") {
    const auto spec = chain::ChainSpec::uniform(9, 1.0);
    const double jz = std::sqrt(2.0 / 10.0);
    const auto mod = control::make_power_sine(0, control::transfer_time_for_amplitude(0, 0.6, jz),
                                              jz);
    noise::NoiseProcess process;
    process.strength = 0.08;
    process.seed = 4242;

    noise::EnsembleRunOptions serial;
    serial.threads = 1;
    noise::EnsembleRunOptions parallel;
    parallel.threads = 4;
    const auto a = noise::run_ensemble(spec, mod, process, 64, serial);
    const auto b = noise::run_ensemble(spec, mod, process, 64, serial);
    const auto c = noise::run_ensemble(spec, mod, process, 64, parallel);
    CHECK(a.infidelities == b.infidelities);
    CHECK(a.infidelities == c.infidelities);
    CHECK(a.mean_infidelity == c.mean_infidelity);
    CHECK(a.seeds == c.seeds);
    for (int r = 0; r < 4; ++r)
        CHECK(a.seeds[r] == noise::realization_seed(process.seed, r));
}

TEST_CASE("mean infidelity grows with static noise strength") {
    const auto spec = chain::ChainSpec::uniform(9, 1.0);
    const double jz = std::sqrt(2.0 / 10.0);
    const auto mod = control::make_power_sine(0, control::transfer_time_for_amplitude(0, 0.6, jz),
                                              jz);
    noise::NoiseProcess process;
    process.seed = 11;
    std::vector<double> means, errors;
    for (double eps : {0.02, 0.06, 0.15}) {
        process.strength = eps;
        const auto result = noise::run_ensemble(spec, mod, process, 300);
        means.push_back(result.mean_infidelity);
        errors.push_back(result.std_error);
    }
    CHECK(means[1] >= means[0] - 2.0 * (errors[0] + errors[1]));
    CHECK(means[2] >= means[1] - 2.0 * (errors[1] + errors[2]));
    CHECK(means[2] > means[0]);
}

TEST_CASE("static noise hurts more than fast fluctuating noise") {
    const auto spec = chain::ChainSpec::uniform(9, 1.0);
    const double jz = std::sqrt(2.0 / 10.0);
    const auto mod = control::make_power_sine(0, control::transfer_time_for_amplitude(0, 0.3, jz),
                                              jz);
    noise::NoiseProcess statik;
    statik.strength = 0.12;
    statik.seed = 500;
    noise::NoiseProcess fast;
    fast.kind = noise::Kind::piecewise;
    fast.strength = 0.12;
    fast.tau_c = 0.5;
    fast.seed = 501;
    const auto rs = noise::run_ensemble(spec, mod, statik, 300);
    const auto rf = noise::run_ensemble(spec, mod, fast, 300);
    CHECK(rs.mean_infidelity >= rf.mean_infidelity - 2.0 * (rs.std_error + rf.std_error));
    CHECK(rs.mean_infidelity > rf.mean_infidelity);
}

TEST_CASE("collapse report: identical curves collapse to zero deviation") {
    noise::NoiseCurve curve;
    curve.tau_c = 1.0;
    for (double eps : {0.02, 0.05, 0.1, 0.2})
        curve.points.push_back({eps, eps * eps * 3.0, 1e-5});
    const std::vector<noise::NoiseCurve> curves{curve, curve, curve};
    const auto report = noise::collapse_scaling(curves);
    CHECK(std::abs(report.max_rms) < 1e-14);

    CHECK_THROWS_AS(noise::collapse_scaling({curve, curve}), std::invalid_argument);

    // disjoint rescaled supports must be rejected
    noise::NoiseCurve narrow_low = curve, narrow_high = curve, mid = curve;
    narrow_low.tau_c = 0.005;
    narrow_high.tau_c = 500.0;
    mid.tau_c = 1.0;
    for (auto* c : {&narrow_low, &narrow_high, &mid}) {
        c->points.clear();
        for (double eps : {0.01, 0.012, 0.015, 0.02})
            c->points.push_back({eps, eps * eps, 1e-5});
    }
    CHECK_THROWS_AS(noise::collapse_scaling({narrow_low, mid, narrow_high}),
                    std::invalid_argument);
}

TEST_CASE("noise process round trips through JSON") {
    noise::NoiseProcess process;
    process.kind = noise::Kind::piecewise;
    process.strength = 0.07;
    process.tau_c = 2.0;
    process.target = noise::TargetLinks::internal_plus_boundary;
    process.symmetric = true;
    process.seed = 90210;
    const auto back = io::noise_from_json(io::to_json(process));
    CHECK(back.kind == process.kind);
    CHECK(back.strength == process.strength);
    CHECK(back.tau_c == process.tau_c);
    CHECK(back.target == process.target);
    CHECK(back.symmetric == process.symmetric);
    CHECK(back.seed == process.seed);

    CHECK_THROWS_AS(io::noise_from_json(io::json{{"kind", "piecewise"}, {"strength", 0.1}}),
                    io::ConfigError);
    CHECK_THROWS_AS(io::noise_from_json(io::json{{"kind", "static"}, {"strength", 1.5}}),
                    io::ConfigError);
}

TEST_SUITE_END();

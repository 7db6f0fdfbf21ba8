#include "chainctl/noise.hpp"

#include "chainctl/dynamics.hpp"
#include "chainctl/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace chainctl::noise {

void NoiseProcess::validate() const {
    if (strength < 0.0) throw std::invalid_argument("NoiseProcess: strength must be >= 0");
    if (strength >= 1.0)
        throw std::invalid_argument("NoiseProcess: strength must be < 1 to keep couplings positive");
    if (kind == Kind::piecewise && !(tau_c > 0.0))
        throw std::invalid_argument("NoiseProcess: piecewise noise needs tau_c > 0");
}

Realization::Realization(NoiseProcess process, int n_channel)
    : process_(process), n_channel_(n_channel) {
    process_.validate();
    if (n_channel < 1) throw std::invalid_argument("Realization: n_channel must be >= 1");
}

bool Realization::time_dependent() const {
    return process_.kind == Kind::piecewise && process_.strength > 0.0 &&
           std::isfinite(process_.tau_c);
}

double Realization::delta(int coupling_index, double t) const {
    if (process_.strength == 0.0) return 0.0;
    const int n = n_channel_;
    if (coupling_index < 0 || coupling_index > n)
        throw std::out_of_range("Realization: coupling index outside 0..N");
    const bool boundary = coupling_index == 0 || coupling_index == n;
    if (boundary && process_.target == TargetLinks::internal_only) return 0.0;

    int link = coupling_index;
    if (process_.symmetric) link = std::min(link, n - link);

    std::uint64_t interval = 0;
    if (time_dependent()) {
        if (t < 0.0) t = 0.0;
        interval = static_cast<std::uint64_t>(std::floor(t / process_.tau_c));
    }
    return num::uniform_symmetric(process_.seed, static_cast<std::uint64_t>(link), interval,
                                  process_.strength);
}

std::vector<double> Realization::deltas_at(double t) const {
    std::vector<double> out(n_channel_ + 1, 0.0);
    if (process_.strength == 0.0) return out;
    for (int i = 0; i <= n_channel_; ++i) out[i] = delta(i, t);
    return out;
}

std::vector<double> Realization::redraw_times(double t0, double t1) const {
    std::vector<double> times;
    if (!time_dependent()) return times;
    const double tau = process_.tau_c;
    for (double t = (std::floor(t0 / tau) + 1.0) * tau; t < t1; t += tau)
        if (t > t0) times.push_back(t);
    return times;
}

Realization sample_realization(const NoiseProcess& process, int n_channel) {
    return Realization(process, n_channel);
}

Realization sample_realization(const NoiseProcess& process, int n_channel,
                               std::uint64_t seed_override) {
    NoiseProcess p = process;
    p.seed = seed_override;
    return Realization(p, n_channel);
}

std::uint64_t realization_seed(std::uint64_t master_seed, int realization_index) {
    return num::mix64(master_seed, static_cast<std::uint64_t>(realization_index));
}

EnsembleResult run_ensemble(const chain::ChainSpec& spec, const control::ModulationShape& mod,
                            const NoiseProcess& process, int n_av,
                            const EnsembleRunOptions& options) {
    if (n_av < 2) throw std::invalid_argument("run_ensemble: n_av must be >= 2");
    process.validate();
    const double eval_time = options.eval_time > 0.0 ? options.eval_time : mod.duration;

    EnsembleResult result;
    result.n_realizations = n_av;
    result.infidelities.resize(n_av);
    result.seeds.resize(n_av);
    result.spec = spec;
    result.pulse = mod;
    result.process = process;
    result.dt = options.dt;
    result.eval_time = eval_time;
    result.master_seed = process.seed;

    dynamics::PropagateOptions prop;
    prop.dt = options.dt;

    std::mutex fail_mutex;
    std::string failure;
    std::atomic<bool> aborted{false};
    num::parallel_for(n_av, options.threads, [&](int r) {
        if (aborted.load()) return;
        const std::uint64_t sub_seed = realization_seed(process.seed, r);
        try {
            const Realization realization = sample_realization(process, spec.n_channel, sub_seed);
            const auto outcome = dynamics::propagate_exact(spec, mod, &realization, eval_time, prop);
            result.infidelities[r] = 1.0 - outcome.averaged_fidelity;
            result.seeds[r] = sub_seed;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(fail_mutex);
            aborted.store(true);
            if (failure.empty())
                failure = "realization " + std::to_string(r) + " (sub-seed " +
                          std::to_string(sub_seed) + ") failed: " + e.what();
        }
    });
    if (!failure.empty()) throw std::runtime_error("run_ensemble: " + failure);

    double mean = 0.0;
    for (double v : result.infidelities) mean += v;
    mean /= n_av;
    double var = 0.0;
    for (double v : result.infidelities) var += (v - mean) * (v - mean);
    var /= (n_av - 1);
    result.mean_infidelity = mean;
    result.std_error = std::sqrt(var / n_av);
    return result;
}

CollapseReport collapse_scaling(const std::vector<NoiseCurve>& curves) {
    if (curves.size() < 3)
        throw std::invalid_argument("collapse_scaling: need >= 3 tau_c curves");
    for (const auto& curve : curves) {
        if (curve.points.size() < 4)
            throw std::invalid_argument("collapse_scaling: need >= 4 eps values per curve");
        if (!(curve.tau_c > 0.0))
            throw std::invalid_argument("collapse_scaling: tau_c must be > 0");
    }

    struct Rescaled {
        double tau;
        std::vector<double> x, y;  // x = eps * sqrt(2 tau_c)
    };
    std::vector<Rescaled> rescaled;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (const auto& curve : curves) {
        Rescaled r;
        r.tau = curve.tau_c;
        const double mu = std::sqrt(2.0 * curve.tau_c);
        for (const auto& p : curve.points) {
            r.x.push_back(p.eps * mu);
            r.y.push_back(p.mean_infidelity);
        }
        if (!std::is_sorted(r.x.begin(), r.x.end()))
            throw std::invalid_argument("collapse_scaling: eps values must be ascending");
        lo = std::max(lo, r.x.front());
        hi = std::min(hi, r.x.back());
        rescaled.push_back(std::move(r));
    }
    if (!(hi > lo))
        throw std::invalid_argument("collapse_scaling: rescaled supports do not intersect");

    // common grid, log spaced; interpolate log-infidelity linearly in log-x
    const int grid = 33;
    std::vector<std::vector<double>> values(rescaled.size(), std::vector<double>(grid));
    for (std::size_t c = 0; c < rescaled.size(); ++c) {
        std::vector<double> lx(rescaled[c].x.size()), ly(rescaled[c].y.size());
        for (std::size_t i = 0; i < lx.size(); ++i) {
            lx[i] = std::log(rescaled[c].x[i]);
            ly[i] = std::log(std::max(rescaled[c].y[i], 1e-300));
        }
        const num::LinearInterp interp(lx, ly);
        for (int g = 0; g < grid; ++g) {
            const double x = std::log(lo) + (std::log(hi) - std::log(lo)) * g / (grid - 1);
            values[c][g] = std::exp(interp(x));
        }
    }

    CollapseReport report;
    report.support_lo = lo;
    report.support_hi = hi;
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
    for (const auto& v : values)
        for (double y : v) {
            vmin = std::min(vmin, y);
            vmax = std::max(vmax, y);
        }
    report.range = vmax - vmin;
    for (std::size_t a = 0; a < values.size(); ++a) {
        for (std::size_t b = a + 1; b < values.size(); ++b) {
            double acc = 0.0;
            for (int g = 0; g < grid; ++g) {
                const double d = values[a][g] - values[b][g];
                acc += d * d;
            }
            CollapseReport::Pair pair;
            pair.tau_a = rescaled[a].tau;
            pair.tau_b = rescaled[b].tau;
            pair.rms = std::sqrt(acc / grid);
            report.max_rms = std::max(report.max_rms, pair.rms);
            report.pairwise.push_back(pair);
        }
    }
    report.relative_deviation = report.range > 0.0 ? report.max_rms / report.range : 0.0;
    return report;
}

} // namespace chainctl::noise

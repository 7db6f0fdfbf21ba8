#include "chainctl/control.hpp"

#include "chainctl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainctl::control {

using num::pi;

namespace {

constexpr double kRoot2 = 1.41421356237309504880;
constexpr int kDefaultSamples = 4097;

void check_time(double t, double T) {
    if (t < -1e-12 || t > T * (1.0 + 1e-12))
        throw std::out_of_range("time outside pulse support [0, T]");
}

double sample_step(const ModulationShape& mod) {
    return mod.duration / static_cast<double>(mod.samples.size() - 1);
}

} // namespace

double ModulationShape::value(double t) const {
    check_time(t, duration);
    t = std::clamp(t, 0.0, duration);
    if (kind == PulseKind::power_sine) {
        if (power == 0) return alpha_max;
        const double s = std::sin(pi * t / duration);
        return power == 1 ? alpha_max * s : alpha_max * s * s;
    }
    const double h = sample_step(*this);
    const auto i = std::min(static_cast<std::size_t>(t / h), samples.size() - 2);
    const double w = (t - static_cast<double>(i) * h) / h;
    return samples[i] + w * (samples[i + 1] - samples[i]);
}

double ModulationShape::grid_step() const {
    if (kind == PulseKind::power_sine) return 0.0;
    return sample_step(*this);
}

PhaseProfile::PhaseProfile(const ModulationShape& mod, double jz) : mod_(&mod), jz_(jz) {
    if (mod.kind == PulseKind::power_sine) {
        switch (mod.power) {
        case 0: total_ = jz * mod.alpha_max * mod.duration; break;
        case 1: total_ = jz * mod.alpha_max * 2.0 * mod.duration / pi; break;
        case 2: total_ = jz * mod.alpha_max * mod.duration / 2.0; break;
        default: throw std::invalid_argument("power_sine supports p in {0,1,2}");
        }
        return;
    }
    const double h = sample_step(mod);
    node_phase_ = num::cumulative_trapezoid(mod.samples, h);
    for (double& v : node_phase_) v *= jz;
    total_ = node_phase_.back();
}

double PhaseProfile::operator()(double t) const {
    const ModulationShape& mod = *mod_;
    check_time(t, mod.duration);
    t = std::clamp(t, 0.0, mod.duration);
    if (mod.kind == PulseKind::power_sine) {
        const double T = mod.duration;
        const double a = jz_ * mod.alpha_max;
        switch (mod.power) {
        case 0: return a * t;
        case 1: return a * (T / pi) * (1.0 - std::cos(pi * t / T));
        default: return a * (0.5 * t - T / (4.0 * pi) * std::sin(2.0 * pi * t / T));
        }
    }
    const double h = sample_step(mod);
    const auto i = std::min(static_cast<std::size_t>(t / h), mod.samples.size() - 2);
    const double dt = t - static_cast<double>(i) * h;
    const double w = dt / h;
    const double alpha_t = mod.samples[i] + w * (mod.samples[i + 1] - mod.samples[i]);
    return node_phase_[i] + jz_ * 0.5 * dt * (mod.samples[i] + alpha_t);
}

double c_coefficient(int p) {
    if (p < 0) throw std::invalid_argument("c_coefficient: p must be >= 0");
    return std::sqrt(pi) * std::tgamma(0.5 * p + 1.0) / std::tgamma(0.5 * (p + 1.0));
}

ModulationShape make_power_sine(int p, double T, double jz) {
    if (p < 0 || p > 2)
        throw std::invalid_argument("make_power_sine: p must be in {0,1,2}; larger p splits the central filter peak");
    if (!(T > 0.0)) throw std::invalid_argument("make_power_sine: T must be positive");
    if (!(jz > 0.0)) throw std::invalid_argument("make_power_sine: J~_z must be positive");
    ModulationShape mod;
    mod.kind = PulseKind::power_sine;
    mod.power = p;
    mod.duration = T;
    mod.alpha_max = c_coefficient(p) * pi / (kRoot2 * jz * T);
    return mod;
}

ModulationShape make_power_sine_with_amplitude(int p, double T, double alpha_m) {
    if (p < 0 || p > 2) throw std::invalid_argument("power_sine supports p in {0,1,2}");
    if (!(T > 0.0) || !(alpha_m >= 0.0)) throw std::invalid_argument("bad pulse parameters");
    ModulationShape mod;
    mod.kind = PulseKind::power_sine;
    mod.power = p;
    mod.duration = T;
    mod.alpha_max = alpha_m;
    return mod;
}

double transfer_time_for_amplitude(int p, double alpha_m, double jz) {
    if (!(alpha_m > 0.0) || !(jz > 0.0)) throw std::invalid_argument("bad pulse parameters");
    return c_coefficient(p) * pi / (kRoot2 * jz * alpha_m);
}

ModulationShape make_tabulated(std::vector<double> samples, double T, double jz,
                               bool normalize) {
    if (samples.size() < 2) throw std::invalid_argument("tabulated pulse needs >= 2 samples");
    if (!(T > 0.0)) throw std::invalid_argument("tabulated pulse: T must be positive");
    for (double& v : samples) {
        if (v < -1e-12) throw std::invalid_argument("tabulated pulse: alpha(t) must be >= 0");
        v = std::max(v, 0.0);
    }
    ModulationShape mod;
    mod.kind = PulseKind::tabulated;
    mod.duration = T;
    mod.samples = std::move(samples);
    if (normalize) {
        const double h = T / static_cast<double>(mod.samples.size() - 1);
        const double phase = jz * num::cumulative_trapezoid(mod.samples, h).back();
        if (!(phase > 0.0)) throw std::invalid_argument("tabulated pulse: zero accumulated phase");
        const double scale = pi / kRoot2 / phase;
        for (double& v : mod.samples) v *= scale;
    }
    mod.alpha_max = *std::max_element(mod.samples.begin(), mod.samples.end());
    return mod;
}

ModulationShape make_phenomenological(double a, double b, double q, double T, double jz) {
    if (!(a >= 0.0) || !(b >= 0.0) || !(q > 0.0))
        throw std::invalid_argument("phenomenological pulse: a, b >= 0 and q > 0 required");
    // mean of sin^q over [0, pi]
    const double mean_sin_q = std::tgamma(0.5 * (q + 1.0)) / (std::sqrt(pi) * std::tgamma(0.5 * q + 1.0));
    const double alpha_ref = pi / (kRoot2 * jz * T * (a + b * mean_sin_q));
    std::vector<double> samples(kDefaultSamples);
    for (int i = 0; i < kDefaultSamples; ++i) {
        const double t = T * static_cast<double>(i) / (kDefaultSamples - 1);
        samples[i] = alpha_ref * (a + b * std::pow(std::sin(pi * t / T), q));
    }
    ModulationShape mod = make_tabulated(std::move(samples), T, jz, true);
    mod.kind = PulseKind::phenomenological;
    mod.phen_a = a;
    mod.phen_b = b;
    mod.phen_q = q;
    return mod;
}

double accumulated_phase(const ModulationShape& mod, double jz, double t) {
    return PhaseProfile(mod, jz)(t);
}

double pulse_energy(const ModulationShape& mod, double jz) {
    if (mod.kind == PulseKind::power_sine) {
        const double base = jz * jz * mod.alpha_max * mod.alpha_max * mod.duration;
        switch (mod.power) {
        case 0: return base;
        case 1: return 0.5 * base;
        default: return 0.375 * base;
        }
    }
    // alpha is piecewise linear, alpha^2 piecewise quadratic: integrate exactly.
    const double h = sample_step(mod);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < mod.samples.size(); ++i) {
        const double a0 = mod.samples[i], a1 = mod.samples[i + 1];
        acc += h / 3.0 * (a0 * a0 + a0 * a1 + a1 * a1);
    }
    return jz * jz * acc;
}

void OptimizerConfig::validate() const {
    if (grid_points < 64) throw std::invalid_argument("OptimizerConfig: grid_points must be >= 64");
    if (!(convergence_tol > 0.0)) throw std::invalid_argument("OptimizerConfig: convergence_tol must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("OptimizerConfig: max_iterations must be >= 1");
    if (!(relaxation > 0.0) || relaxation > 1.0)
        throw std::invalid_argument("OptimizerConfig: relaxation must be in (0, 1]");
}

ModulationShape solve_markov_optimal(double phi_plus0, double phi_minus0, double lambda,
                                     double T, double jz, int grid) {
    if (phi_plus0 < 0.0 || phi_minus0 < 0.0)
        throw std::invalid_argument("solve_markov_optimal: Phi_pm(0) must be >= 0");
    if (!(T > 0.0) || !(jz > 0.0)) throw std::invalid_argument("solve_markov_optimal: T, J~_z must be > 0");
    const int m = std::max(grid, 64);

    const double phi_end = pi / kRoot2;
    const double hphi = phi_end / m;
    auto radicand = [&](double phi) {
        const double c = std::cos(kRoot2 * phi);
        return 2.0 * (phi_plus0 * c * c + phi_minus0 - lambda * jz * jz);
    };

    std::vector<double> phi_nodes(m + 1), g(m + 1);
    for (int j = 0; j <= m; ++j) {
        phi_nodes[j] = hphi * j;
        const double r = radicand(phi_nodes[j]);
        if (!(r > 0.0))
            throw std::invalid_argument("solve_markov_optimal: infeasible lambda, non-positive radicand");
        g[j] = std::sqrt(r);
    }

    const std::vector<double> cum = num::cumulative_integral(g, hphi);
    const double g_total = cum.back();
    std::vector<double> t_nodes(m + 1);
    for (int j = 0; j <= m; ++j) t_nodes[j] = T * cum[j] / g_total;
    t_nodes.front() = 0.0;
    t_nodes.back() = T;

    const num::PchipInterp phi_of_t(t_nodes, phi_nodes);
    std::vector<double> alpha(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double t = T * static_cast<double>(i) / m;
        const double phi = std::clamp(phi_of_t(t), 0.0, phi_end);
        alpha[i] = g_total / (T * jz * std::sqrt(radicand(phi)));
    }

    ModulationShape mod = make_tabulated(std::move(alpha), T, jz, true);
    mod.kind = PulseKind::markov_optimal;
    return mod;
}

double zeta_markovian(const ModulationShape& mod, double phi_plus0, double phi_minus0,
                      double jz) {
    if (phi_plus0 < 0.0 || phi_minus0 < 0.0)
        throw std::invalid_argument("zeta_markovian: Phi_pm(0) must be >= 0");
    const PhaseProfile phase(mod, jz);
    const double T = mod.duration;
    int n = 8192;
    if (mod.kind != PulseKind::power_sine)
        n = 2 * static_cast<int>(mod.samples.size() - 1);
    auto integrand = [&](double t) {
        const double a = mod.value(t);
        const double c = std::cos(kRoot2 * phase(t));
        return a * a * (phi_plus0 * c * c + phi_minus0);
    };
    return num::simpson(integrand, 0.0, T, n);
}

PhenomenologicalFit fit_phenomenological(const ModulationShape& mod, double jz) {
    const double T = mod.duration;
    const double alpha_ref = pi / (kRoot2 * jz * T);
    const int n = 512;
    std::vector<double> y(n + 1), s(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = T * static_cast<double>(i) / n;
        y[i] = mod.value(t) / alpha_ref;
        s[i] = std::sin(pi * t / T);
    }

    PhenomenologicalFit best;
    double best_sse = std::numeric_limits<double>::infinity();
    double y_norm2 = 0.0;
    for (double v : y) y_norm2 += v * v;

    for (double q = 2.0; q <= 5.0 + 1e-9; q += 0.005) {
        // normal equations for y ~ a + b sin^q
        double sb = 0, sbb = 0, sy = 0, sby = 0;
        const double np = n + 1;
        for (int i = 0; i <= n; ++i) {
            const double basis = std::pow(s[i], q);
            sb += basis;
            sbb += basis * basis;
            sy += y[i];
            sby += basis * y[i];
        }
        const double det = np * sbb - sb * sb;
        if (std::abs(det) < 1e-14) continue;
        const double a = (sbb * sy - sb * sby) / det;
        const double b = (np * sby - sb * sy) / det;
        double sse = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double r = y[i] - a - b * std::pow(s[i], q);
            sse += r * r;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best = {a, b, q, std::sqrt(sse / y_norm2)};
        }
    }
    return best;
}

} // namespace chainctl::control

#include "chainctl/bathspec.hpp"

#include "chainctl/numerics.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace chainctl::bathspec {

using control::ModulationShape;
using control::PhaseProfile;
using num::pi;

namespace {
constexpr double kRoot2 = 1.41421356237309504880;
}

double DiscreteSpectrum::total_weight() const {
    double acc = 0.0;
    for (double w : weight) acc += w;
    return acc;
}

BathSpectra BathSpectra::from_split(const chain::SystemBathSplit& split) {
    BathSpectra spectra;
    for (const auto& mode : split.odd) {
        spectra.plus.omega.push_back(mode.omega);
        spectra.plus.weight.push_back(mode.coupling * mode.coupling);
    }
    for (const auto& mode : split.even) {
        spectra.minus.omega.push_back(mode.omega);
        spectra.minus.weight.push_back(mode.coupling * mode.coupling);
    }
    return spectra;
}

double semicircle_gapped(double J, double omega_l, double omega) {
    if (!(J > 0.0) || !(omega_l > 0.0) || !(omega_l < 2.0 * J))
        throw std::invalid_argument("semicircle_gapped: require 0 < omega_l < 2J");
    const double w = std::abs(omega);
    if (w < omega_l || w > 2.0 * J) return 0.0;
    return 0.5 * std::sqrt(4.0 * J * J - w * w);
}

// ---------------------------- BathCorrelation ------------------------------

BathCorrelation BathCorrelation::zero(Parity parity) {
    BathCorrelation corr;
    corr.kind_ = Kind::zero;
    corr.parity_ = parity;
    return corr;
}

BathCorrelation BathCorrelation::discrete(DiscreteSpectrum spectrum, Parity parity) {
    if (spectrum.omega.size() != spectrum.weight.size())
        throw std::invalid_argument("BathCorrelation: omega/weight size mismatch");
    for (double w : spectrum.weight)
        if (w < 0.0) throw std::invalid_argument("BathCorrelation: negative mode weight");
    BathCorrelation corr;
    corr.kind_ = Kind::discrete;
    corr.parity_ = parity;
    corr.spectrum_ = std::move(spectrum);
    return corr;
}

BathCorrelation BathCorrelation::semicircle(SemicircleBath bath, Parity parity) {
    if (!(bath.J > 0.0) || !(bath.omega_l > 0.0) || !(bath.omega_l < 2.0 * bath.J))
        throw std::invalid_argument("BathCorrelation: require 0 < omega_l < 2J");
    BathCorrelation corr;
    corr.kind_ = Kind::semicircle;
    corr.parity_ = parity;
    corr.bath_ = bath;
    return corr;
}

namespace {

// theta-substituted band integrals for the gapped semicircle; the integrand
// oscillates as cos(2J tau sin theta), so the point count tracks |tau|.
int semicircle_points(double J, double tau) {
    const double cycles = std::abs(2.0 * J * tau) / (2.0 * pi);
    return std::max(512, 2 * static_cast<int>(std::ceil(16.0 * cycles)));
}

double semicircle_real(const SemicircleBath& bath, double tau) {
    const double theta_l = std::asin(std::min(1.0, bath.omega_l / (2.0 * bath.J)));
    const double J = bath.J;
    auto f = [&](double theta) {
        const double c = std::cos(theta);
        return c * c * std::cos(2.0 * J * tau * std::sin(theta));
    };
    return 4.0 * J * J * num::simpson(f, theta_l, 0.5 * pi, semicircle_points(J, tau));
}

double semicircle_real_derivative(const SemicircleBath& bath, double tau) {
    const double theta_l = std::asin(std::min(1.0, bath.omega_l / (2.0 * bath.J)));
    const double J = bath.J;
    auto f = [&](double theta) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        return c * c * s * std::sin(2.0 * J * tau * s);
    };
    return -8.0 * J * J * J * num::simpson(f, theta_l, 0.5 * pi, semicircle_points(J, tau));
}

} // namespace

std::complex<double> BathCorrelation::value(double tau) const {
    switch (kind_) {
    case Kind::zero:
        return {0.0, 0.0};
    case Kind::discrete: {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < spectrum_.omega.size(); ++k) {
            re += spectrum_.weight[k] * std::cos(spectrum_.omega[k] * tau);
            im -= spectrum_.weight[k] * std::sin(spectrum_.omega[k] * tau);
        }
        return {re, im};
    }
    case Kind::semicircle:
        // G is even, so the Fourier integral is real.
        return {semicircle_real(bath_, tau), 0.0};
    }
    return {0.0, 0.0};
}

double BathCorrelation::real_part(double tau) const {
    switch (kind_) {
    case Kind::zero:
        return 0.0;
    case Kind::discrete: {
        double re = 0.0;
        for (std::size_t k = 0; k < spectrum_.omega.size(); ++k)
            re += spectrum_.weight[k] * std::cos(spectrum_.omega[k] * tau);
        return re;
    }
    case Kind::semicircle:
        return semicircle_real(bath_, tau);
    }
    return 0.0;
}

double BathCorrelation::real_derivative(double tau) const {
    switch (kind_) {
    case Kind::zero:
        return 0.0;
    case Kind::discrete: {
        double d = 0.0;
        for (std::size_t k = 0; k < spectrum_.omega.size(); ++k)
            d -= spectrum_.weight[k] * spectrum_.omega[k] * std::sin(spectrum_.omega[k] * tau);
        return d;
    }
    case Kind::semicircle:
        return semicircle_real_derivative(bath_, tau);
    }
    return 0.0;
}

double BathCorrelation::at_zero() const { return real_part(0.0); }

bool BathCorrelation::is_null() const {
    if (kind_ == Kind::zero) return true;
    if (kind_ == Kind::discrete) return spectrum_.total_weight() == 0.0;
    return false;
}

// ------------------------- filters and zeta routes --------------------------

std::pair<double, double> control_functions(const ModulationShape& mod, double jz, double t) {
    const double alpha = mod.value(t);
    const double phi = control::accumulated_phase(mod, jz, t);
    return {alpha * std::cos(kRoot2 * phi), alpha};
}

namespace {

// Samples Omega_par(t) on n+1 uniform nodes.
std::vector<double> sample_control(const ModulationShape& mod, double jz, Parity parity,
                                   int n) {
    const PhaseProfile phase(mod, jz);
    const double T = mod.duration;
    std::vector<double> omega(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = T * static_cast<double>(i) / n;
        const double alpha = mod.value(t);
        omega[i] = parity == Parity::minus ? alpha : alpha * std::cos(kRoot2 * phase(t));
    }
    return omega;
}

// Node count for oscillatory quadrature; aligned with the sample grid of
// tabulated pulses so their kinks fall on quadrature nodes.
int oscillation_nodes(const ModulationShape& mod, double omega) {
    const double cycles = std::abs(omega) * mod.duration / (2.0 * pi);
    int n = std::max(4096, 2 * static_cast<int>(std::ceil(128.0 * cycles)));
    if (mod.kind != control::PulseKind::power_sine) {
        const int base = 2 * static_cast<int>(mod.samples.size() - 1);
        n = base * ((n + base - 1) / base);
    }
    if (n % 2) ++n;
    return n;
}

} // namespace

double filter_function(const ModulationShape& mod, double jz, Parity parity, double omega) {
    const int n = oscillation_nodes(mod, omega);
    const std::vector<double> samples = sample_control(mod, jz, parity, n);
    const double T = mod.duration;
    const double h = T / n;
    // complex Simpson over the samples
    std::complex<double> acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double t = h * i;
        acc += w * samples[i] * std::complex<double>(std::cos(omega * t), std::sin(omega * t));
    }
    acc *= h / 3.0;
    return std::norm(acc) / (2.0 * pi);
}

FilterGrid filter_grid(const ModulationShape& mod, double jz, Parity parity,
                       const FilterGridOptions& options) {
    if (!(options.omega_max > 0.0)) throw std::invalid_argument("filter_grid: omega_max must be > 0");
    const double T = mod.duration;
    const double dt = std::min(options.dt_max, pi / (32.0 * options.omega_max));
    int n_t = static_cast<int>(std::ceil(T / dt));
    std::size_t m = 1;
    while (m < static_cast<std::size_t>(n_t) * std::max(2, options.pad_factor)) m <<= 1;

    const std::vector<double> samples = sample_control(mod, jz, parity, n_t);
    const double h = T / n_t;

    std::vector<std::complex<double>> x(m, {0.0, 0.0});
    for (int i = 0; i <= n_t; ++i) {
        const double w = (i == 0 || i == n_t) ? 0.5 : 1.0;  // trapezoid ends
        x[i] = w * samples[i];
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, x);

    const double domega = 2.0 * pi / (static_cast<double>(m) * h);
    FilterGrid grid;
    grid.parity = parity;
    grid.T = T;
    grid.jz = jz;
    const int n_bins = static_cast<int>(options.omega_max / domega) + 1;
    grid.omega.reserve(n_bins);
    grid.value.reserve(n_bins);
    for (int b = 0; b < n_bins && b < static_cast<int>(m); ++b) {
        grid.omega.push_back(b * domega);
        grid.value.push_back(std::norm(h * spectrum[b]) / (2.0 * pi));
    }
    return grid;
}

ZetaResult zeta_time_domain(const ModulationShape& mod, double jz,
                            const BathCorrelation& plus, const BathCorrelation& minus,
                            int grid) {
    const double T = mod.duration;
    int n = grid > 0 ? grid : 4096;
    if (n % 2) ++n;
    const double h = T / n;

    const PhaseProfile phase(mod, jz);
    std::vector<double> om_p(n + 1), om_m(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = h * i;
        const double alpha = mod.value(t);
        om_m[i] = alpha;
        om_p[i] = alpha * std::cos(kRoot2 * phase(t));
    }

    std::vector<double> corr_p(n + 1, 0.0), corr_m(n + 1, 0.0);
    const bool has_p = !plus.is_null();
    const bool has_m = !minus.is_null();
    for (int i = 0; i <= n; ++i) {
        const double tau = h * i;
        if (has_p) corr_p[i] = plus.real_part(tau);
        if (has_m) corr_m[i] = minus.real_part(tau);
    }

    // outer integrand: F(t_i) = Omega(t_i) * int_0^{t_i} Omega(t') C(t_i - t') dt'
    std::vector<double> outer(n + 1, 0.0), scratch(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        double value = 0.0;
        if (has_p) {
            for (int j = 0; j <= i; ++j) scratch[j] = om_p[j] * corr_p[i - j];
            value += om_p[i] * num::prefix_integral(scratch, i, h);
        }
        if (has_m) {
            for (int j = 0; j <= i; ++j) scratch[j] = om_m[j] * corr_m[i - j];
            value += om_m[i] * num::prefix_integral(scratch, i, h);
        }
        outer[i] = value;
    }

    ZetaResult result;
    result.value = num::simpson_samples(outer, h);
    result.perturbation_flag = result.value > 0.5;
    return result;
}

ZetaResult zeta_frequency_domain(const ModulationShape& mod, double jz,
                                 const BathSpectra& spectra) {
    double acc = 0.0;
    for (std::size_t k = 0; k < spectra.plus.omega.size(); ++k)
        acc += spectra.plus.weight[k] *
               filter_function(mod, jz, Parity::plus, spectra.plus.omega[k]);
    for (std::size_t k = 0; k < spectra.minus.omega.size(); ++k)
        acc += spectra.minus.weight[k] *
               filter_function(mod, jz, Parity::minus, spectra.minus.omega[k]);
    ZetaResult result;
    result.value = pi * acc;
    result.perturbation_flag = result.value > 0.5;
    return result;
}

ZetaResult zeta_frequency_domain(const ModulationShape& mod, double jz,
                                 const SemicircleBath& bath,
                                 const FilterGridOptions& options) {
    FilterGridOptions opts = options;
    opts.omega_max = std::max(opts.omega_max, 2.0 * bath.J * 1.001);

    const FilterGrid grid_p = filter_grid(mod, jz, Parity::plus, opts);
    const FilterGrid grid_m = filter_grid(mod, jz, Parity::minus, opts);

    const double domega = grid_p.omega[1] - grid_p.omega[0];
    const double peak_width = 2.0 * pi / mod.duration;
    if (domega > peak_width / 8.0)
        throw GridResolutionError("frequency grid too coarse for the central filter peak");

    // integrate (F+ + F-) G over [omega_l, 2J]; doubled for the negative band.
    auto f_sum = [&](std::size_t b) { return grid_p.value[b] + grid_m.value[b]; };
    auto g_at = [&](double w) { return semicircle_gapped(bath.J, bath.omega_l, w); };

    const double lo = bath.omega_l;
    const double hi = 2.0 * bath.J;
    double acc = 0.0;
    std::size_t b0 = static_cast<std::size_t>(std::ceil(lo / domega));
    std::size_t b1 = static_cast<std::size_t>(std::floor(hi / domega));
    b1 = std::min(b1, grid_p.omega.size() - 1);
    for (std::size_t b = b0; b + 1 <= b1; ++b) {
        const double f0 = f_sum(b) * g_at(grid_p.omega[b]);
        const double f1 = f_sum(b + 1) * g_at(grid_p.omega[b + 1]);
        acc += 0.5 * domega * (f0 + f1);
    }
    // partial cell at the gap edge
    if (b0 > 0 && b0 <= b1) {
        const double w_edge = grid_p.omega[b0];
        const double frac = w_edge - lo;
        const double f_lo = f_sum(b0 - 1) +
                            (f_sum(b0) - f_sum(b0 - 1)) * (lo - grid_p.omega[b0 - 1]) / domega;
        acc += 0.5 * frac * (f_lo * g_at(lo) + f_sum(b0) * g_at(w_edge));
    }

    ZetaResult result;
    result.value = 2.0 * pi * acc;
    result.perturbation_flag = result.value > 0.5;
    return result;
}

double averaged_fidelity(double f, bool* clamped) {
    if (clamped) *clamped = false;
    if (f < 0.0) throw std::domain_error("averaged_fidelity: f must be in [0, 1]");
    if (f > 1.0 + 1e-9) throw std::domain_error("averaged_fidelity: f exceeds 1 beyond numerical noise");
    if (f > 1.0) {
        f = 1.0;
        if (clamped) *clamped = true;
    }
    return f * f / 6.0 + f / 3.0 + 0.5;
}

} // namespace chainctl::bathspec

#include <doctest.h>

#include "chainctl/bathspec.hpp"
#include "chainctl/numerics.hpp"

#include <cmath>

using namespace chainctl;
using bathspec::BathCorrelation;
using bathspec::Parity;
using control::make_power_sine;
using num::pi;

namespace {
constexpr double kRoot2 = 1.41421356237309504880;

bathspec::DiscreteSpectrum single_mode(double omega, double weight) {
    bathspec::DiscreteSpectrum s;
    s.omega = {omega};
    s.weight = {weight};
    return s;
}
}

TEST_SUITE_BEGIN("bathspec");

TEST_CASE("control functions at the pulse landmarks") {
    const double T = 25.0, jz = 0.4;
    const auto p0 = make_power_sine(0, T, jz);
    const auto p2 = make_power_sine(2, T, jz);

    auto [plus0, minus0] = bathspec::control_functions(p0, jz, 0.0);
    CHECK(plus0 == doctest::Approx(p0.alpha_max));
    CHECK(minus0 == doctest::Approx(p0.alpha_max));

    auto [plusT, minusT] = bathspec::control_functions(p0, jz, T);
    CHECK(plusT == doctest::Approx(-p0.alpha_max).epsilon(1e-12));
    CHECK(minusT == doctest::Approx(p0.alpha_max));

    auto [plus2, minus2] = bathspec::control_functions(p2, jz, 0.0);
    CHECK(std::abs(plus2) < 1e-15);
    CHECK(std::abs(minus2) < 1e-15);
}

TEST_CASE("discrete correlation: tau = 0 weights and a single mode at tau = pi") {
    const auto corr =
        BathCorrelation::discrete({{0.5, -0.5, 1.2}, {0.2, 0.2, 0.05}}, Parity::plus);
    CHECK(corr.value(0.0).real() == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(std::abs(corr.value(0.0).imag()) < 1e-16);
    CHECK(corr.at_zero() == doctest::Approx(0.45));

    const auto one = BathCorrelation::discrete(single_mode(1.0, 1.0), Parity::minus);
    CHECK(one.value(pi).real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(one.value(pi).imag()) < 1e-14);

    // Hermiticity: Phi(-tau) = conj(Phi(tau))
    const auto f = corr.value(0.7), b = corr.value(-0.7);
    CHECK(f.real() == doctest::Approx(b.real()).epsilon(1e-14));
    CHECK(f.imag() == doctest::Approx(-b.imag()).epsilon(1e-14));
}

TEST_CASE("uniform N=29 channel correlation follows the short-time Bessel form") {
    // Full channel correlation (zero mode included), normalized at tau -> 0,
    // against J1(2 J tau)/(J tau); the infinite-channel limit.
    const auto spec = chain::ChainSpec::uniform(29, 1.0);
    const auto spectrum = chain::diagonalize_channel(spec);
    bathspec::DiscreteSpectrum all;
    for (int k = 0; k < spectrum.n_modes(); ++k) {
        all.omega.push_back(spectrum.eigenvalues(k));
        all.weight.push_back(spectrum.eff_couplings(k) * spectrum.eff_couplings(k));
    }
    const auto corr = BathCorrelation::discrete(all, Parity::plus);
    const double norm = corr.at_zero();
    for (double tau = 0.05; tau <= 2.0; tau += 0.05) {
        const double lhs = corr.real_part(tau) / norm;
        const double bessel = std::cyl_bessel_j(1, 2.0 * tau) / tau;
        CHECK(std::abs(lhs - bessel) < 0.05);
    }
}

TEST_CASE("gapped semicircle values and correlation normalization") {
    CHECK(bathspec::semicircle_gapped(1.0, 0.1, 0.0) == 0.0);
    CHECK(std::abs(bathspec::semicircle_gapped(1.0, 0.1, 2.0)) < 1e-12);
    CHECK(bathspec::semicircle_gapped(1.0, 0.1, 1.0) ==
          doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(bathspec::semicircle_gapped(1.0, 0.1, -1.0) ==
          doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(bathspec::semicircle_gapped(1.0, 0.1, 0.05) == 0.0);
    CHECK_THROWS(bathspec::semicircle_gapped(1.0, 2.5, 0.5));

    // Phi(0) equals the band integral of G, known in closed form
    const double J = 1.0, wl = 0.3;
    const auto corr = BathCorrelation::semicircle({J, wl}, Parity::minus);
    const double theta_l = std::asin(wl / (2.0 * J));
    const double expected =
        4.0 * J * J * (0.5 * (pi / 2.0 - theta_l) - 0.25 * std::sin(2.0 * theta_l));
    CHECK(corr.at_zero() == doctest::Approx(expected).epsilon(1e-8));

    // derivative consistency with a finite difference
    const double tau = 1.3, h = 1e-5;
    const double fd = (corr.real_part(tau + h) - corr.real_part(tau - h)) / (2.0 * h);
    CHECK(corr.real_derivative(tau) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("static-pulse filter: DC value, sinc zeros, evenness") {
    const double T = 18.0, jz = 0.5;
    const auto p0 = make_power_sine(0, T, jz);
    const double f0 = bathspec::filter_function(p0, jz, Parity::minus, 0.0);
    CHECK(f0 == doctest::Approx(p0.alpha_max * p0.alpha_max * T * T / (2.0 * pi)).epsilon(1e-10));
    for (int n : {1, 2, 5}) {
        const double zero = bathspec::filter_function(p0, jz, Parity::minus, 2.0 * pi * n / T);
        CHECK(zero < 1e-12 * f0);
    }
    const double wp = bathspec::filter_function(p0, jz, Parity::minus, 0.83);
    const double wm = bathspec::filter_function(p0, jz, Parity::minus, -0.83);
    CHECK(wp == doctest::Approx(wm).epsilon(1e-10));
    CHECK(wp >= 0.0);
}

TEST_CASE("p=2 filter tails sit far below p=0 tails at matched T") {
    const double T = 40.0, jz = std::sqrt(2.0 / 30.0);
    const auto p0 = make_power_sine(0, T, jz);
    const auto p2 = make_power_sine(2, T, jz);
    double max0 = 0.0, max2 = 0.0;
    for (double w = 6.0 * pi / T; w <= 2.0; w += 0.5 * pi / T) {
        max0 = std::max(max0, bathspec::filter_function(p0, jz, Parity::minus, w));
        max2 = std::max(max2, bathspec::filter_function(p2, jz, Parity::minus, w));
    }
    CHECK(max2 * 10.0 < max0);
}

TEST_CASE("filter central peak narrows monotonically with T") {
    const double jz = 0.3;
    for (int p : {0, 1, 2}) {
        double prev_width = 1e300;
        for (double T : {10.0, 20.0, 40.0, 80.0}) {
            const auto mod = make_power_sine(p, T, jz);
            const double peak = bathspec::filter_function(mod, jz, Parity::minus, 0.0);
            double width = 0.0;
            for (double w = 0.005 * pi / T;; w += 0.005 * pi / T) {
                if (bathspec::filter_function(mod, jz, Parity::minus, w) < 0.5 * peak) {
                    width = 2.0 * w;
                    break;
                }
            }
            CHECK(width < prev_width);
            prev_width = width;
        }
    }
}

TEST_CASE("zeta time domain: null bath and the single-mode closed form") {
    const double T = 20.0, jz = 0.3;
    const auto p0 = make_power_sine(0, T, jz);
    const auto empty = BathCorrelation::zero(Parity::plus);
    CHECK(bathspec::zeta_time_domain(p0, jz, empty, BathCorrelation::zero(Parity::minus)).value ==
          0.0);

    // one even-parity mode: zeta = 2 w alpha^2 sin^2(omega T/2)/omega^2 exactly
    const double omega = 1.0, weight = 0.04;
    const auto minus = BathCorrelation::discrete(single_mode(omega, weight), Parity::minus);
    const double zeta = bathspec::zeta_time_domain(p0, jz, empty, minus, 8192).value;
    const double a = p0.alpha_max;
    const double expected = 2.0 * weight * a * a * std::sin(omega * T / 2.0) *
                            std::sin(omega * T / 2.0) / (omega * omega);
    CHECK(zeta == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("zeta scales quadratically in a global coupling factor") {
    const double T = 15.0, jz = 0.35;
    const auto p1 = make_power_sine(1, T, jz);
    bathspec::DiscreteSpectrum base;
    base.omega = {0.4, -0.4, 1.3, -1.3};
    base.weight = {0.05, 0.05, 0.08, 0.08};
    std::vector<double> log_s, log_z;
    for (double s = 1.0; s <= 10.0 + 1e-9; s *= std::pow(10.0, 0.25)) {
        bathspec::DiscreteSpectrum scaled = base;
        for (double& w : scaled.weight) w *= s * s;
        const auto corr = BathCorrelation::discrete(scaled, Parity::minus);
        const double z =
            bathspec::zeta_time_domain(p1, jz, BathCorrelation::zero(Parity::plus), corr).value;
        log_s.push_back(std::log(s));
        log_z.push_back(std::log(z));
    }
    const auto fit = num::fit_line(log_s, log_z);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("time- and frequency-domain zeta agree on a mixed discrete bath") {
    const double T = 22.0, jz = 0.3;
    const auto p2 = make_power_sine(2, T, jz);
    bathspec::BathSpectra spectra;
    spectra.plus.omega = {0.9, -0.9, 2.0, -2.0};
    spectra.plus.weight = {0.06, 0.06, 0.04, 0.04};
    spectra.minus.omega = {0.45, -0.45};
    spectra.minus.weight = {0.09, 0.09};

    const auto plus = BathCorrelation::discrete(spectra.plus, Parity::plus);
    const auto minus = BathCorrelation::discrete(spectra.minus, Parity::minus);
    const double zt = bathspec::zeta_time_domain(p2, jz, plus, minus, 8192).value;
    const double zf = bathspec::zeta_frequency_domain(p2, jz, spectra).value;
    CHECK(std::abs(zt - zf) / zf < 1e-6);

    bathspec::BathSpectra none;
    CHECK(bathspec::zeta_frequency_domain(p2, jz, none).value == 0.0);
}

TEST_CASE("semicircle zeta orders the pulse family at long T") {
    const double jz = std::sqrt(2.0 / 30.0);
    const bathspec::SemicircleBath bath{1.0, 0.157};
    const double T = 512.0;
    const double z0 = bathspec::zeta_frequency_domain(make_power_sine(0, T, jz), jz, bath).value;
    const double z1 = bathspec::zeta_frequency_domain(make_power_sine(1, T, jz), jz, bath).value;
    const double z2 = bathspec::zeta_frequency_domain(make_power_sine(2, T, jz), jz, bath).value;
    CHECK(z2 < z1);
    CHECK(z1 < z0);

    bathspec::FilterGridOptions coarse;
    coarse.pad_factor = 2;
    CHECK_THROWS_AS(
        bathspec::zeta_frequency_domain(make_power_sine(0, T, jz), jz, bath, coarse),
        bathspec::GridResolutionError);
}

TEST_CASE("averaged fidelity polynomial, clamp and domain errors") {
    CHECK(bathspec::averaged_fidelity(1.0) == doctest::Approx(1.0));
    CHECK(bathspec::averaged_fidelity(0.0) == doctest::Approx(0.5));
    CHECK(bathspec::averaged_fidelity(0.9) == doctest::Approx(0.935).epsilon(1e-12));
    bool clamped = false;
    CHECK(bathspec::averaged_fidelity(1.0 + 5e-10, &clamped) == doctest::Approx(1.0));
    CHECK(clamped);
    CHECK_THROWS_AS(bathspec::averaged_fidelity(1.0 + 5e-9), std::domain_error);
    CHECK_THROWS_AS(bathspec::averaged_fidelity(-0.1), std::domain_error);
}

TEST_SUITE_END();

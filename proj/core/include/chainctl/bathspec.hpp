// bathspec.hpp — bath correlation functions, spectral filter functions and
// the perturbative transfer infidelity zeta(T) in time and frequency domain.
//
// Normalization note: with real control functions and Hermitian correlations,
// the real part of the triangular double integral (time domain) equals half
// the full square, so zeta = pi * int F(w) G(w) dw with
// F(w) = |int Omega e^{iwt} dt|^2 / 2pi and G the correlation spectrum. For a
// discrete bath G collapses to delta peaks and the integral to
// pi * sum_k |J~_k|^2 F(w_k). Both code paths use this constant; the
// agreement between them is tested, not assumed.

#pragma once

#include "chainctl/chain.hpp"
#include "chainctl/control.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace chainctl::bathspec {

enum class Parity { plus, minus };  // plus: odd-k modes, minus: even-k modes

struct DiscreteSpectrum {
    std::vector<double> omega;
    std::vector<double> weight;  // |J~_k|^2

    double total_weight() const;
};

// Parity-resolved discrete bath of a diagonalized channel.
struct BathSpectra {
    DiscreteSpectrum plus;
    DiscreteSpectrum minus;

    static BathSpectra from_split(const chain::SystemBathSplit& split);
};

// Gapped Wigner semicircle model bath: G(w) = sqrt(4J^2-w^2)/2 on
// w_l <= |w| <= 2J, zero inside the gap and beyond the band edges.
struct SemicircleBath {
    double J{1.0};
    double omega_l{0.0};
};

double semicircle_gapped(double J, double omega_l, double omega);

// Bath correlation function Phi(tau). Discrete baths evaluate the mode sum
// exactly; the semicircle evaluates its Fourier integral with the
// w = 2J sin(theta) substitution that removes the band-edge singularity.
class BathCorrelation {
public:
    static BathCorrelation zero(Parity parity);
    static BathCorrelation discrete(DiscreteSpectrum spectrum, Parity parity);
    static BathCorrelation semicircle(SemicircleBath bath, Parity parity);

    std::complex<double> value(double tau) const;
    double real_part(double tau) const;       // Re Phi(tau), even in tau
    double real_derivative(double tau) const; // d/dtau Re Phi
    double at_zero() const;
    bool is_null() const;
    Parity parity() const { return parity_; }

private:
    enum class Kind { zero, discrete, semicircle };
    Kind kind_{Kind::zero};
    Parity parity_{Parity::plus};
    DiscreteSpectrum spectrum_;
    SemicircleBath bath_{};
};

// Dynamical-control functions Omega+(t) = alpha cos(sqrt2 phi), Omega-(t) = alpha.
std::pair<double, double> control_functions(const control::ModulationShape& mod, double jz,
                                            double t);

// Spectral filter F_{T,±}(w) = |int_0^T Omega_± e^{iwt} dt|^2 / 2pi at a
// single frequency, by oscillation-resolving composite Simpson.
double filter_function(const control::ModulationShape& mod, double jz, Parity parity,
                       double omega);

// Filter evaluated on a uniform frequency grid via FFT of the sampled,
// zero-padded control function.
struct FilterGrid {
    Parity parity{Parity::minus};
    std::vector<double> omega;   // 0 .. omega_max
    std::vector<double> value;
    double T{0.0};
    double jz{0.0};
};

struct FilterGridOptions {
    double omega_max{2.5};
    int pad_factor{16};     // frequency resolution: 2pi/(pad T)
    double dt_max{0.05};
};

FilterGrid filter_grid(const control::ModulationShape& mod, double jz, Parity parity,
                       const FilterGridOptions& options = {});

struct ZetaResult {
    double value{0.0};
    bool perturbation_flag{false};  // set when zeta > 0.5

    operator double() const { return value; }
};

// Eq.-level time-domain route: nested quadrature of the triangular double
// integral of Omega(t) Omega(t') Re Phi(t-t'). grid = 0 picks a default.
ZetaResult zeta_time_domain(const control::ModulationShape& mod, double jz,
                            const BathCorrelation& plus, const BathCorrelation& minus,
                            int grid = 0);

// Frequency-domain route for a discrete bath: pi * sum_k w_k F(w_k).
ZetaResult zeta_frequency_domain(const control::ModulationShape& mod, double jz,
                                 const BathSpectra& spectra);

struct GridResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frequency-domain route for the continuous gapped-semicircle bath, both
// parities seeing the same G. Throws GridResolutionError when the frequency
// grid cannot resolve the central filter peak.
ZetaResult zeta_frequency_domain(const control::ModulationShape& mod, double jz,
                                 const SemicircleBath& bath,
                                 const FilterGridOptions& options = {});

// Input-state-averaged transfer fidelity F = f^2/6 + f/3 + 1/2. Values of f
// within 1e-9 above 1 are clamped (flag reported through `clamped`); larger
// excursions throw.
double averaged_fidelity(double f, bool* clamped = nullptr);

} // namespace chainctl::bathspec

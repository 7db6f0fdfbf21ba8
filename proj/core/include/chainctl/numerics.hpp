// numerics.hpp — quadrature, interpolation, deterministic RNG mixing, small fits

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace chainctl::num {

inline constexpr double pi = 3.14159265358979323846;

// ----------------------------- quadrature ----------------------------------

// Composite Simpson over [a,b] with n intervals (n rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

std::complex<double> simpson_complex(const std::function<std::complex<double>(double)>& f,
                                     double a, double b, int n);

// Composite Simpson over equally spaced samples (odd sample count; if the
// count is even the last interval is handled with a trapezoid correction).
double simpson_samples(const std::vector<double>& y, double h);

// Cumulative integral at every node of an equally spaced sample set,
// fourth-order accurate (Simpson with 3/8 and start-up patches).
std::vector<double> cumulative_integral(const std::vector<double>& y, double h);

// Exact cumulative integral of the piecewise-linear interpolant.
std::vector<double> cumulative_trapezoid(const std::vector<double>& y, double h);

// Fourth-order integral of y[0..i] on a uniform grid (alternating Simpson
// and 3/8 prefixes; the i = 1 stub falls back to a trapezoid).
double prefix_integral(const std::vector<double>& y, int i, double h);

// ---------------------------- interpolation --------------------------------

// Piecewise-linear interpolation on a strictly increasing abscissa.
class LinearInterp {
public:
    LinearInterp() = default;
    LinearInterp(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_;
};

// Monotone cubic (Fritsch-Carlson) interpolation; preserves monotonicity of
// the data, used to invert strictly monotone maps.
class PchipInterp {
public:
    PchipInterp() = default;
    PchipInterp(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_, d_;  // d_ = node derivatives
};

// ------------------------- deterministic RNG -------------------------------

// SplitMix64 step; the basis of all seeding in this library.
std::uint64_t splitmix64(std::uint64_t& state);

// Stateless hash-combine of two 64-bit keys. Used to derive per-link,
// per-interval and per-realization streams from a master seed.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// Map 64 bits to a double in [0,1).
double uniform01(std::uint64_t bits);

// Uniform draw in [-eps, eps] keyed by (seed, a, b).
double uniform_symmetric(std::uint64_t seed, std::uint64_t a, std::uint64_t b, double eps);

// ------------------------------- fits --------------------------------------

struct LineFit {
    double slope{0.0};
    double intercept{0.0};
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// --------------------------- parallel helper -------------------------------

// Runs fn(i) for i in [0,n) on `threads` workers. Results must be written to
// index-addressed slots by the caller so that the outcome is identical for
// any thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

} // namespace chainctl::num

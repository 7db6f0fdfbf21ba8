#include "chainctl/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace chainctl::num {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    for (int i = 2; i < n; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

std::complex<double> simpson_complex(const std::function<std::complex<double>(double)>& f,
                                     double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    std::complex<double> odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    for (int i = 2; i < n; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

double simpson_samples(const std::vector<double>& y, double h) {
    const int n = static_cast<int>(y.size()) - 1;  // intervals
    if (n < 1) return 0.0;
    if (n == 1) return 0.5 * h * (y[0] + y[1]);
    double total = 0.0;
    int m = (n % 2 == 0) ? n : n - 3;
    for (int i = 0; i + 2 <= m; i += 2) total += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    if (n % 2) {
        if (m >= 0 && n >= 3) {
            total += 3.0 * h / 8.0 * (y[n - 3] + 3.0 * y[n - 2] + 3.0 * y[n - 1] + y[n]);
        } else {
            total += 0.5 * h * (y[n - 1] + y[n]);
        }
    }
    return total;
}

std::vector<double> cumulative_integral(const std::vector<double>& y, double h) {
    const int n = static_cast<int>(y.size()) - 1;
    std::vector<double> out(y.size(), 0.0);
    if (n < 1) return out;
    if (n == 1) { out[1] = 0.5 * h * (y[0] + y[1]); return out; }
    if (n == 2) {
        out[1] = h / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2]);
        out[2] = h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
        return out;
    }
    // Adams-Moulton start, then alternating Simpson / 3-8 prefixes.
    out[1] = h / 24.0 * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]);
    out[2] = h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
    for (int i = 3; i <= n; ++i) {
        if (i % 2 == 0) {
            out[i] = out[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
        } else {
            out[i] = out[i - 3] + 3.0 * h / 8.0 * (y[i - 3] + 3.0 * y[i - 2] + 3.0 * y[i - 1] + y[i]);
        }
    }
    return out;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& y, double h) {
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t i = 1; i < y.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
    return out;
}

double prefix_integral(const std::vector<double>& y, int i, double h) {
    if (i <= 0) return 0.0;
    if (i == 1) return 0.5 * h * (y[0] + y[1]);
    double acc = 0.0;
    int start = 0;
    if (i % 2) {
        acc += 3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3]);
        start = 3;
    }
    for (int j = start; j + 2 <= i; j += 2)
        acc += h / 3.0 * (y[j] + 4.0 * y[j + 1] + y[j + 2]);
    return acc;
}

// ---------------------------- interpolation --------------------------------

namespace {

void check_strictly_increasing(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("interpolation needs at least two nodes");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("abscissa must be strictly increasing");
}

std::size_t bracket(const std::vector<double>& x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) return 0;
    if (i >= x.size()) return x.size() - 2;
    return i - 1;
}

} // namespace

LinearInterp::LinearInterp(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    check_strictly_increasing(x_);
    if (x_.size() != y_.size()) throw std::invalid_argument("interpolation size mismatch");
}

double LinearInterp::operator()(double x) const {
    const std::size_t i = bracket(x_, x);
    const double w = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return y_[i] + w * (y_[i + 1] - y_[i]);
}

PchipInterp::PchipInterp(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    check_strictly_increasing(x_);
    if (x_.size() != y_.size()) throw std::invalid_argument("interpolation size mismatch");
    const std::size_t n = x_.size();
    std::vector<double> hseg(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        hseg[i] = x_[i + 1] - x_[i];
        slope[i] = (y_[i + 1] - y_[i]) / hseg[i];
    }
    d_.assign(n, 0.0);
    d_[0] = slope[0];
    d_[n - 1] = slope[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * hseg[i] + hseg[i - 1];
            const double w2 = hseg[i] + 2.0 * hseg[i - 1];
            d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
}

double PchipInterp::operator()(double x) const {
    const std::size_t i = bracket(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

// ------------------------- deterministic RNG -------------------------------

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double uniform_symmetric(std::uint64_t seed, std::uint64_t a, std::uint64_t b, double eps) {
    return eps * (2.0 * uniform01(mix64(mix64(seed, a), b)) - 1.0);
}

// ------------------------------- fits --------------------------------------

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line needs matching vectors of size >= 2");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

// --------------------------- parallel helper -------------------------------

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    threads = std::min(threads, n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace chainctl::num

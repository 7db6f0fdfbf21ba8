#include "chainctl/optimize.hpp"

#include "chainctl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace chainctl::control {

using bathspec::BathCorrelation;
using num::pi;

namespace {

constexpr double kRoot2 = 1.41421356237309504880;

struct Grid {
    int n{0};
    double h{0.0};
    double T{0.0};
    double jz{0.0};
    std::vector<double> corr_p, corr_m;    // Re Phi_pm on the tau grid
    std::vector<double> dcorr_p, dcorr_m;  // d/dtau Re Phi_pm
    double c0_p{0.0}, c0_m{0.0};
};

// zeta of (phi, phidot) on the solver grid, Eq.-13 style triangle quadrature.
double zeta_on_grid(const Grid& g, const std::vector<double>& phi,
                    const std::vector<double>& phidot) {
    const int n = g.n;
    std::vector<double> om_p(n + 1), om_m(n + 1), outer(n + 1, 0.0), scratch(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double alpha = phidot[i] / g.jz;
        om_m[i] = alpha;
        om_p[i] = alpha * std::cos(kRoot2 * phi[i]);
    }
    for (int i = 1; i <= n; ++i) {
        double value = 0.0;
        for (int j = 0; j <= i; ++j) scratch[j] = om_p[j] * g.corr_p[i - j];
        value += om_p[i] * num::prefix_integral(scratch, i, g.h);
        for (int j = 0; j <= i; ++j) scratch[j] = om_m[j] * g.corr_m[i - j];
        value += om_m[i] * num::prefix_integral(scratch, i, g.h);
        outer[i] = value;
    }
    return num::simpson_samples(outer, g.h);
}

// Source term of the stationarity condition.
std::vector<double> source_term(const Grid& g, const std::vector<double>& phi,
                                const std::vector<double>& phidot) {
    const int n = g.n;
    const double jz4 = g.jz * g.jz * g.jz * g.jz;
    std::vector<double> cc(n + 1), q(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) cc[i] = std::cos(kRoot2 * phi[i]);
    for (int i = 0; i <= n; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= i; ++j) {
            const double w = (j == 0 || j == i) ? 0.5 : 1.0;
            acc += w * phidot[j] * (g.dcorr_p[i - j] * cc[i] * cc[j] + g.dcorr_m[i - j]);
        }
        acc *= g.h;
        acc += phidot[i] * (g.c0_p * cc[i] * cc[i] + g.c0_m);
        q[i] = acc / (2.0 * jz4);
    }
    return q;
}

} // namespace

EulerLagrangeResult solve_euler_lagrange(const BathCorrelation& plus,
                                         const BathCorrelation& minus,
                                         const OptimizerConfig& config, double T, double jz) {
    config.validate();
    if (!(T > 0.0) || !(jz > 0.0))
        throw std::invalid_argument("solve_euler_lagrange: T, J~_z must be > 0");

    Grid g;
    g.n = config.grid_points + (config.grid_points % 2);
    g.h = T / g.n;
    g.T = T;
    g.jz = jz;
    g.corr_p.resize(g.n + 1);
    g.corr_m.resize(g.n + 1);
    g.dcorr_p.resize(g.n + 1);
    g.dcorr_m.resize(g.n + 1);
    for (int i = 0; i <= g.n; ++i) {
        const double tau = g.h * i;
        g.corr_p[i] = plus.real_part(tau);
        g.corr_m[i] = minus.real_part(tau);
        g.dcorr_p[i] = plus.real_derivative(tau);
        g.dcorr_m[i] = minus.real_derivative(tau);
    }
    g.c0_p = g.corr_p[0];
    g.c0_m = g.corr_m[0];

    const double phi_end = pi / kRoot2;
    std::vector<double> phi(g.n + 1), phidot(g.n + 1);
    for (int i = 0; i <= g.n; ++i) {
        const double t = g.h * i;
        phi[i] = 0.5 * phi_end * (1.0 - std::cos(pi * t / T));
        phidot[i] = 0.5 * phi_end * (pi / T) * std::sin(pi * t / T);
    }

    double zeta_best = zeta_on_grid(g, phi, phidot);
    std::vector<double> phi_best = phi, phidot_best = phidot;

    EulerLagrangeResult result;
    result.residual = std::numeric_limits<double>::infinity();

    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        const std::vector<double> q = source_term(g, phi, phidot);
        const std::vector<double> psi = num::cumulative_trapezoid(q, g.h);
        const std::vector<double> chi = num::cumulative_trapezoid(psi, g.h);
        const double chi_end = chi.back();
        if (!(std::abs(chi_end) > 1e-280)) {
            // correlations vanish identically: every admissible phi is
            // stationary, keep the current iterate
            result.converged = true;
            result.residual = 0.0;
            break;
        }
        const double scale = phi_end / chi_end;

        bool accepted = false;
        double relax = config.relaxation;
        for (int attempt = 0; attempt < 8; ++attempt, relax *= 0.5) {
            std::vector<double> phi_try(g.n + 1), phidot_try(g.n + 1);
            for (int i = 0; i <= g.n; ++i) {
                phi_try[i] = (1.0 - relax) * phi[i] + relax * scale * chi[i];
                phidot_try[i] = (1.0 - relax) * phidot[i] + relax * scale * psi[i];
            }
            const double zeta_try = zeta_on_grid(g, phi_try, phidot_try);
            if (zeta_try <= zeta_best * (1.0 + 1e-12)) {
                double diff = 0.0;
                for (int i = 0; i <= g.n; ++i)
                    diff = std::max(diff, std::abs(phi_try[i] - phi[i]));
                result.residual = diff / phi_end;
                phi = std::move(phi_try);
                phidot = std::move(phidot_try);
                if (zeta_try < zeta_best) {
                    zeta_best = zeta_try;
                    phi_best = phi;
                    phidot_best = phidot;
                }
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // stalled against the monotone safeguard
        if (result.residual < config.convergence_tol) {
            result.converged = true;
            ++iter;
            break;
        }
    }
    result.iterations = iter;

    std::vector<double> alpha(g.n + 1);
    for (int i = 0; i <= g.n; ++i) alpha[i] = std::max(phidot_best[i], 0.0) / jz;
    result.pulse = make_tabulated(std::move(alpha), T, jz, true);
    result.zeta = zeta_best;
    return result;
}

} // namespace chainctl::control

#include "chainctl/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chainctl::chain {

ChainSpec ChainSpec::uniform(int n_channel, double J) {
    ChainSpec spec;
    spec.n_channel = n_channel;
    spec.couplings.assign(n_channel >= 1 ? n_channel - 1 : 0, J);
    spec.boundary_couplings = {J, J};
    return spec;
}

double ChainSpec::coupling_scale() const {
    double scale = std::max(boundary_couplings[0], boundary_couplings[1]);
    for (double j : couplings) scale = std::max(scale, j);
    return scale;
}

bool ChainSpec::mirror_symmetric(double tol) const {
    const double abs_tol = tol * coupling_scale();
    if (std::abs(boundary_couplings[0] - boundary_couplings[1]) > abs_tol) return false;
    const int m = static_cast<int>(couplings.size());
    for (int i = 0; i < m; ++i)
        if (std::abs(couplings[i] - couplings[m - 1 - i]) > abs_tol) return false;
    return true;
}

void ChainSpec::validate() const {
    if (n_channel < 1) throw std::invalid_argument("ChainSpec: n_channel must be >= 1");
    if (static_cast<int>(couplings.size()) != n_channel - 1)
        throw std::invalid_argument("ChainSpec: expected " + std::to_string(n_channel - 1) +
                                    " internal couplings, got " + std::to_string(couplings.size()));
    for (double j : couplings)
        if (!(j > 0.0)) throw std::invalid_argument("ChainSpec: couplings must be positive");
    if (!(boundary_couplings[0] > 0.0) || !(boundary_couplings[1] > 0.0))
        throw std::invalid_argument("ChainSpec: boundary couplings must be positive");
}

Eigen::MatrixXd build_single_excitation_hamiltonian(const ChainSpec& spec, double alpha,
                                                    std::span<const double> deltas) {
    spec.validate();
    if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");

    const int n = spec.n_channel;
    const int sites = spec.total_sites();

    // All couplings J_0..J_N in link order.
    std::vector<double> links(n + 1);
    links[0] = alpha * spec.boundary_couplings[0];
    for (int i = 1; i <= n - 1; ++i) links[i] = spec.couplings[i - 1];
    links[n] = alpha * spec.boundary_couplings[1];

    if (!deltas.empty()) {
        if (static_cast<int>(deltas.size()) == n - 1) {
            for (int i = 1; i <= n - 1; ++i) links[i] *= 1.0 + deltas[i - 1];
        } else if (static_cast<int>(deltas.size()) == n + 1) {
            for (int i = 0; i <= n; ++i) links[i] *= 1.0 + deltas[i];
        } else {
            throw std::invalid_argument("deltas must address the internal couplings (N-1) or all couplings (N+1)");
        }
        for (int i = 1; i <= n - 1; ++i)
            if (!(links[i] > 0.0)) throw std::invalid_argument("noise drove a coupling non-positive");
    }

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sites, sites);
    for (int i = 0; i <= n; ++i) {
        h(i, i + 1) = links[i];
        h(i + 1, i) = links[i];
    }
    return h;
}

BathSpectrum diagonalize_channel(const ChainSpec& spec, double tol) {
    spec.validate();
    const int n = spec.n_channel;
    if (n < 3) throw std::invalid_argument("diagonalize_channel: channel needs at least 3 spins");
    if (n % 2 == 0)
        throw std::invalid_argument("diagonalize_channel: even channel has no zero mode (N must be odd)");
    if (!spec.mirror_symmetric(tol))
        throw std::invalid_argument("diagonalize_channel: couplings are not mirror symmetric");

    const double scale = spec.coupling_scale();

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n - 1; ++i) {
        h(i, i + 1) = spec.couplings[i];
        h(i + 1, i) = spec.couplings[i];
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize_channel: eigendecomposition failed");

    BathSpectrum spectrum;
    spectrum.eigenvalues = solver.eigenvalues();
    spectrum.eigenvectors = solver.eigenvectors();

    for (int k = 0; k + 1 < n; ++k)
        if (spectrum.eigenvalues(k + 1) - spectrum.eigenvalues(k) < tol * scale)
            throw std::runtime_error("diagonalize_channel: near-degenerate channel spectrum");

    // Sign convention: <1|w_k> > 0. First components of irreducible
    // tridiagonal eigenvectors never vanish.
    for (int k = 0; k < n; ++k)
        if (spectrum.eigenvectors(0, k) < 0.0) spectrum.eigenvectors.col(k) *= -1.0;

    // Parity must alternate as (-1)^(k-1) for a mirror-symmetric chain.
    spectrum.parities.resize(n);
    for (int k = 0; k < n; ++k) {
        const int expected = (k % 2 == 0) ? 1 : -1;
        for (int j = 0; j < n; ++j) {
            const double mirrored = expected * spectrum.eigenvectors(n - 1 - j, k);
            if (std::abs(spectrum.eigenvectors(j, k) - mirrored) > 100.0 * tol)
                throw std::runtime_error("diagonalize_channel: eigenvector parity check failed");
        }
        spectrum.parities[k] = expected;
    }

    const int z = (n + 1) / 2;  // 1-based
    if (std::abs(spectrum.eigenvalues(z - 1)) > tol * scale)
        throw std::runtime_error("diagonalize_channel: central eigenvalue is not zero");

    const double j1 = spec.couplings.front();
    spectrum.eff_couplings = j1 * spectrum.eigenvectors.row(0).transpose();
    spectrum.zero_mode_index = z;
    spectrum.zero_mode_coupling = spectrum.eff_couplings(z - 1);
    return spectrum;
}

SystemBathSplit split_system_bath(const BathSpectrum& spectrum) {
    const int n = spectrum.n_modes();
    const int z = spectrum.zero_mode_index;
    if (z < 1 || z > n) throw std::invalid_argument("split_system_bath: spectrum has no zero mode");

    SystemBathSplit split;
    split.zero = {z, spectrum.eigenvalues(z - 1), spectrum.zero_mode_coupling};
    for (int k = 1; k <= n; ++k) {
        if (k == z) continue;
        Mode mode{k, spectrum.eigenvalues(k - 1), spectrum.eff_couplings(k - 1)};
        if (k % 2 == 1)
            split.odd.push_back(mode);
        else
            split.even.push_back(mode);
    }
    return split;
}

} // namespace chainctl::chain

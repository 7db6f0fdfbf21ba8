// chain.hpp — spin-chain channel model in the single-excitation sector:
// Hamiltonian assembly, channel diagonalization, parity structure and the
// system/bath mode split around the zero-energy mode.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace chainctl::chain {

// Channel geometry. Sites are numbered 0..N+1: source qubit 0, channel spins
// 1..N, target qubit N+1. couplings holds the internal exchange couplings
// J_1..J_{N-1}; boundary_couplings holds (J_0, J_N), which are scaled by the
// control amplitude alpha(t).
struct ChainSpec {
    int n_channel{0};
    std::vector<double> couplings;
    std::array<double, 2> boundary_couplings{1.0, 1.0};

    static ChainSpec uniform(int n_channel, double J);

    int total_sites() const { return n_channel + 2; }
    double coupling_scale() const;
    bool mirror_symmetric(double tol) const;
    void validate() const;  // throws std::invalid_argument on bad geometry
};

// Spectral decomposition of the channel block. Modes are labelled k = 1..N in
// ascending energy order; eigenvector columns are sign-fixed so <1|w_k> > 0,
// which makes every effective coupling J~_k = J_1 <1|w_k> positive.
struct BathSpectrum {
    Eigen::VectorXd eigenvalues;   // w_k, strictly ascending
    Eigen::MatrixXd eigenvectors;  // column k-1 is |w_k>
    std::vector<int> parities;     // (-1)^(k-1): +1 mirror-symmetric mode
    Eigen::VectorXd eff_couplings; // J~_k
    int zero_mode_index{0};        // k = z = (N+1)/2, 1-based
    double zero_mode_coupling{0.0};

    int n_modes() const { return static_cast<int>(eigenvalues.size()); }
};

struct Mode {
    int k{0};          // 1-based spectral label
    double omega{0.0};
    double coupling{0.0};
};

struct SystemBathSplit {
    Mode zero;
    std::vector<Mode> odd;   // k odd, k != z
    std::vector<Mode> even;  // k even, k != z
};

// Single-excitation Hamiltonian of the full (N+2)-site chain. The hopping
// amplitude on link i is J_i (boundary links scaled by alpha), fixed by the
// convention that a uniform channel has eigenvalues 2J cos(k pi/(N+1)).
// deltas, if non-empty, multiplies coupling i by (1 + delta): size N-1
// addresses the internal couplings J_1..J_{N-1}, size N+1 addresses all
// couplings J_0..J_N.
Eigen::MatrixXd build_single_excitation_hamiltonian(const ChainSpec& spec, double alpha,
                                                    std::span<const double> deltas = {});

// Diagonalizes the channel block of a mirror-symmetric, odd-N chain and
// extracts effective couplings, parities and the zero mode.
BathSpectrum diagonalize_channel(const ChainSpec& spec, double tol = 1e-10);

// Partitions the spectrum into the zero-mode descriptor and the odd/even
// bath mode lists. The zero mode belongs to neither list.
SystemBathSplit split_system_bath(const BathSpectrum& spectrum);

} // namespace chainctl::chain

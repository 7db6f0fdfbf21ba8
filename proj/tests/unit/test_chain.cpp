#include <doctest.h>

#include "chainctl/chain.hpp"
#include "chainctl/numerics.hpp"
#include "chainctl/serialize.hpp"

#include <algorithm>
#include <cmath>

using namespace chainctl;

TEST_SUITE_BEGIN("chain");

TEST_CASE("uniform N=3 Hamiltonian has unit hoppings everywhere") {
    const auto spec = chain::ChainSpec::uniform(3, 1.0);
    const auto h = chain::build_single_excitation_hamiltonian(spec, 1.0);
    REQUIRE(h.rows() == 5);
    for (int i = 0; i < 4; ++i) {
        CHECK(h(i, i + 1) == doctest::Approx(1.0));
        CHECK(h(i + 1, i) == doctest::Approx(1.0));
    }
    CHECK(h.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("alpha = 0 decouples the boundaries; channel block spectrum is {-sqrt2,0,sqrt2}") {
    const auto spec = chain::ChainSpec::uniform(3, 1.0);
    const auto h = chain::build_single_excitation_hamiltonian(spec, 0.0);
    CHECK(h(0, 1) == 0.0);
    CHECK(h(3, 4) == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.block(1, 1, 3, 3));
    CHECK(solver.eigenvalues()(0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(solver.eigenvalues()(1)) < 1e-12);
    CHECK(solver.eigenvalues()(2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("noise deltas scale the addressed couplings") {
    const auto spec = chain::ChainSpec::uniform(3, 1.0);
    const std::vector<double> deltas{0.1, -0.1};
    const auto h = chain::build_single_excitation_hamiltonian(spec, 0.5, deltas);
    CHECK(h(1, 2) == doctest::Approx(1.1));
    CHECK(h(2, 3) == doctest::Approx(0.9));
    CHECK(h(0, 1) == doctest::Approx(0.5));
    CHECK(h(3, 4) == doctest::Approx(0.5));

    const std::vector<double> all{0.0, 0.1, -0.1, 0.2};
    const auto h2 = chain::build_single_excitation_hamiltonian(spec, 0.5, all);
    CHECK(h2(0, 1) == doctest::Approx(0.5));
    CHECK(h2(3, 4) == doctest::Approx(0.6));

    CHECK_THROWS(chain::build_single_excitation_hamiltonian(spec, 0.5, std::vector<double>{0.1}));
    CHECK_THROWS(chain::build_single_excitation_hamiltonian(spec, 0.5,
                                                            std::vector<double>{0.1, -1.5}));
    CHECK_THROWS(chain::build_single_excitation_hamiltonian(spec, -1.0));
}

TEST_CASE("uniform N=29 spectrum matches 2J cos(k pi / 30)") {
    const auto spec = chain::ChainSpec::uniform(29, 1.0);
    const auto spectrum = chain::diagonalize_channel(spec);
    std::vector<double> expected;
    for (int k = 1; k <= 29; ++k) expected.push_back(2.0 * std::cos(k * num::pi / 30.0));
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 29; ++k)
        CHECK(std::abs(spectrum.eigenvalues(k) - expected[k]) < 1e-10);
    CHECK(std::abs(spectrum.eigenvalues(14)) < 1e-10);  // omega_15 = 0
    CHECK(spectrum.zero_mode_index == 15);
    CHECK(std::abs(spectrum.zero_mode_coupling - std::sqrt(2.0 / 30.0)) < 1e-10);
}

TEST_CASE("uniform N=5 effective couplings follow the closed form") {
    const auto spec = chain::ChainSpec::uniform(5, 1.0);
    const auto spectrum = chain::diagonalize_channel(spec);
    for (int k = 1; k <= 5; ++k) {
        const double expected = std::sqrt(2.0 / 6.0) * std::sin(k * num::pi / 6.0);
        CHECK(std::abs(spectrum.eff_couplings(k - 1) - expected) < 1e-10);
    }
}

TEST_CASE("system/bath split separates the zero mode from odd and even lists") {
    const auto spec = chain::ChainSpec::uniform(5, 1.0);
    const auto split = chain::split_system_bath(chain::diagonalize_channel(spec));
    CHECK(split.zero.k == 3);
    REQUIRE(split.odd.size() == 2);
    REQUIRE(split.even.size() == 2);
    CHECK(split.odd[0].k == 1);
    CHECK(split.odd[1].k == 5);
    CHECK(split.even[0].k == 2);
    CHECK(split.even[1].k == 4);
    CHECK(split.odd[0].omega == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-12));
    CHECK(split.odd[1].omega == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(split.even[0].omega == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(split.even[1].omega == doctest::Approx(1.0).epsilon(1e-12));

    const auto big = chain::split_system_bath(
        chain::diagonalize_channel(chain::ChainSpec::uniform(29, 1.0)));
    CHECK(big.odd.size() == 14);
    CHECK(big.even.size() == 14);
}

TEST_CASE("spectral invariants: orthonormality, antisymmetry, reconstruction, completeness") {
    chain::ChainSpec spec;
    spec.n_channel = 7;
    spec.couplings = {1.0, 0.8, 1.2, 1.2, 0.8, 1.0};
    spec.boundary_couplings = {0.5, 0.5};
    const auto spectrum = chain::diagonalize_channel(spec);
    const int n = spectrum.n_modes();

    const Eigen::MatrixXd& v = spectrum.eigenvectors;
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);

    for (int k = 0; k < n; ++k)
        CHECK(std::abs(spectrum.eigenvalues(k) + spectrum.eigenvalues(n - 1 - k)) < 1e-10);

    Eigen::MatrixXd channel = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n - 1; ++i)
        channel(i, i + 1) = channel(i + 1, i) = spec.couplings[i];
    const Eigen::MatrixXd rebuilt =
        v * spectrum.eigenvalues.asDiagonal() * v.transpose();
    CHECK((rebuilt - channel).cwiseAbs().maxCoeff() < 1e-10);

    double total = spectrum.eff_couplings.squaredNorm();
    CHECK(total == doctest::Approx(spec.couplings.front() * spec.couplings.front()).epsilon(1e-12));

    for (int k = 0; k < n; ++k) {
        CHECK(spectrum.parities[k] == (k % 2 == 0 ? 1 : -1));
        CHECK(spectrum.eff_couplings(k) >= 0.0);
    }
}

TEST_CASE("diagonalize_channel rejects bad geometry") {
    chain::ChainSpec spec;
    spec.n_channel = 5;
    spec.couplings = {1.0, 0.7, 1.0, 1.0};
    spec.boundary_couplings = {1.0, 1.0};
    CHECK_THROWS_AS(chain::diagonalize_channel(spec), std::invalid_argument);

    CHECK_THROWS_AS(chain::diagonalize_channel(chain::ChainSpec::uniform(6, 1.0)),
                    std::invalid_argument);

    chain::ChainSpec bad = chain::ChainSpec::uniform(5, 1.0);
    bad.couplings[2] = -1.0;
    CHECK_THROWS_AS(chain::diagonalize_channel(bad), std::invalid_argument);
}

TEST_CASE("ChainSpec round trips through JSON") {
    chain::ChainSpec spec;
    spec.n_channel = 5;
    spec.couplings = {1.0, 0.9, 0.9, 1.0};
    spec.boundary_couplings = {0.4, 0.4};
    const auto j = io::to_json(spec);
    const auto back = io::chain_spec_from_json(j);
    CHECK(back.n_channel == spec.n_channel);
    CHECK(back.couplings == spec.couplings);
    CHECK(back.boundary_couplings == spec.boundary_couplings);

    const auto uniform = io::chain_spec_from_json(
        io::json{{"n_channel", 9}, {"uniform_J", 2.0}});
    CHECK(uniform.couplings.size() == 8);
    CHECK(uniform.couplings.front() == 2.0);
    CHECK(uniform.boundary_couplings[0] == 2.0);

    CHECK_THROWS_AS(io::chain_spec_from_json(io::json{{"n_channel", 5}}), io::ConfigError);
    CHECK_THROWS_AS(io::chain_spec_from_json(io::json{
                        {"n_channel", 5}, {"couplings", {1.0, 1.0, 1.0, 1.0}}}),
                    io::ConfigError);
}

TEST_SUITE_END();

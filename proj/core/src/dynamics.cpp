#include "chainctl/dynamics.hpp"

#include "chainctl/bathspec.hpp"
#include "chainctl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainctl::dynamics {

using control::ModulationShape;

namespace {

constexpr double kRoot2 = 1.41421356237309504880;

// exp(-i H h) |psi> through the eigendecomposition of the real symmetric H.
class StepPropagator {
public:
    void factor(const Eigen::MatrixXd& h) {
        solver_.compute(h);
        if (solver_.info() != Eigen::Success)
            throw std::runtime_error("propagate_exact: eigendecomposition failed");
    }

    void apply(double h, Eigen::VectorXcd& psi) const {
        const Eigen::MatrixXd& v = solver_.eigenvectors();
        const Eigen::VectorXd& lambda = solver_.eigenvalues();
        Eigen::VectorXd re = psi.real();
        Eigen::VectorXd im = psi.imag();
        Eigen::VectorXd wr = v.transpose() * re;
        Eigen::VectorXd wi = v.transpose() * im;
        for (Eigen::Index i = 0; i < wr.size(); ++i) {
            const double c = std::cos(lambda(i) * h);
            const double s = -std::sin(lambda(i) * h);
            const double r = wr(i) * c - wi(i) * s;
            const double m = wr(i) * s + wi(i) * c;
            wr(i) = r;
            wi(i) = m;
        }
        re = v * wr;
        im = v * wi;
        psi.real() = re;
        psi.imag() = im;
    }

private:
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
};

double held_alpha(const ModulationShape& mod, double t) {
    return mod.value(std::min(t, mod.duration));
}

} // namespace

TransferOutcome propagate_exact(const chain::ChainSpec& spec, const ModulationShape& mod,
                                const noise::Realization* realization, double T,
                                const PropagateOptions& options, Trajectory* trajectory,
                                double record_from, double record_to) {
    spec.validate();
    if (!(T > 0.0)) throw std::invalid_argument("propagate_exact: T must be > 0");
    const double scale = spec.coupling_scale();
    double dt_bound = 0.02 / scale;
    const bool noisy = realization && realization->process().strength > 0.0;
    if (noisy && realization->process().kind == noise::Kind::piecewise)
        dt_bound = std::min(dt_bound, realization->process().tau_c / 4.0);
    if (!(options.dt > 0.0) || options.dt > dt_bound * (1.0 + 1e-12))
        throw std::invalid_argument("propagate_exact: dt must satisfy dt <= min(0.02/J, tau_c/4)");
    if (record_to < 0.0) record_to = T;

    const int sites = spec.total_sites();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sites);
    psi(0) = 1.0;

    // segment boundaries: noise redraws plus recording-window edges
    std::vector<double> cuts{0.0, T};
    if (noisy && realization->time_dependent()) {
        const auto redraws = realization->redraw_times(0.0, T);
        cuts.insert(cuts.end(), redraws.begin(), redraws.end());
    }
    if (trajectory) {
        if (record_from > 0.0 && record_from < T) cuts.push_back(record_from);
        if (record_to > 0.0 && record_to < T) cuts.push_back(record_to);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               cuts.end());

    StepPropagator stepper;
    const bool const_alpha = mod.is_constant();

    auto record = [&](double t) {
        if (!trajectory) return;
        if (t + 1e-12 < record_from || t > record_to + 1e-12) return;
        trajectory->t.push_back(t);
        trajectory->f.push_back(std::abs(psi(sites - 1)));
    };
    record(0.0);

    std::vector<double> deltas;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double t0 = cuts[s], t1 = cuts[s + 1];
        const double len = t1 - t0;
        if (len <= 0.0) continue;
        const double t_mid_seg = 0.5 * (t0 + t1);
        if (noisy) deltas = realization->deltas_at(t_mid_seg);

        const bool recording = trajectory && t1 > record_from - 1e-12 && t0 < record_to + 1e-12;
        if (const_alpha && !recording) {
            const Eigen::MatrixXd h = chain::build_single_excitation_hamiltonian(
                spec, held_alpha(mod, t_mid_seg), deltas);
            stepper.factor(h);
            stepper.apply(len, psi);
            record(t1);
            continue;
        }

        const int m = std::max(1, static_cast<int>(std::ceil(len / options.dt)));
        const double h_step = len / m;
        if (const_alpha) {
            const Eigen::MatrixXd h = chain::build_single_excitation_hamiltonian(
                spec, held_alpha(mod, t_mid_seg), deltas);
            stepper.factor(h);
            for (int k = 0; k < m; ++k) {
                stepper.apply(h_step, psi);
                record(t0 + (k + 1) * h_step);
            }
        } else {
            for (int k = 0; k < m; ++k) {
                const double tm = t0 + (k + 0.5) * h_step;
                const Eigen::MatrixXd h = chain::build_single_excitation_hamiltonian(
                    spec, held_alpha(mod, tm), deltas);
                stepper.factor(h);
                stepper.apply(h_step, psi);
                record(t0 + (k + 1) * h_step);
            }
        }
    }

    const double norm = psi.norm();
    if (!std::isfinite(norm)) throw std::runtime_error("propagate_exact: integration produced NaN");
    const double defect = std::abs(norm - 1.0);
    if (defect >= 1e-8)
        throw std::runtime_error("propagate_exact: unitarity defect exceeds 1e-8, reduce dt");

    TransferOutcome outcome;
    outcome.amplitude_modulus = std::min(1.0, std::abs(psi(sites - 1)));
    outcome.averaged_fidelity = bathspec::averaged_fidelity(outcome.amplitude_modulus);
    outcome.transfer_time = T;
    outcome.unitarity_defect = defect;
    if (realization) outcome.seed = realization->process().seed;
    return outcome;
}

Eigen::Matrix3cd propagate_three_mode(const ModulationShape& mod, double jz, double t) {
    const double phi = control::accumulated_phase(mod, jz, t);
    const double c = std::cos(kRoot2 * phi);
    const double s = std::sin(kRoot2 * phi);
    const std::complex<double> i_unit(0.0, 1.0);

    // basis order: source, zero mode, target
    Eigen::Matrix3cd u;
    u(0, 0) = 0.5 * (c + 1.0);
    u(2, 2) = 0.5 * (c + 1.0);
    u(0, 2) = 0.5 * (c - 1.0);
    u(2, 0) = 0.5 * (c - 1.0);
    u(1, 1) = c;
    u(0, 1) = -i_unit * s / kRoot2;
    u(1, 0) = -i_unit * s / kRoot2;
    u(2, 1) = -i_unit * s / kRoot2;
    u(1, 2) = -i_unit * s / kRoot2;
    return u;
}

WindowScan scan_transfer_window(const chain::ChainSpec& spec, const ModulationShape& mod,
                                const noise::Realization* realization, double t_center,
                                double window, const PropagateOptions& options) {
    if (!(window > 0.0) || window >= t_center)
        throw std::invalid_argument("scan_transfer_window: require 0 < window < t_center");
    const double lo = t_center - 0.5 * window;
    const double hi = t_center + 0.5 * window;

    Trajectory traj;
    propagate_exact(spec, mod, realization, hi, options, &traj, lo, hi);

    WindowScan scan;
    scan.t = traj.t;
    scan.f = traj.f;
    if (traj.t.empty()) throw std::runtime_error("scan_transfer_window: empty scan");

    std::size_t peak = 0;
    for (std::size_t i = 1; i < traj.f.size(); ++i)
        if (traj.f[i] > traj.f[peak]) peak = i;
    scan.peak_time = traj.t[peak];
    scan.peak_f = traj.f[peak];
    scan.peak_fidelity = bathspec::averaged_fidelity(scan.peak_f);

    // contiguous region around the peak with F >= F_peak - 0.01
    const double threshold = scan.peak_fidelity - 0.01;
    auto fidelity = [&](std::size_t i) { return bathspec::averaged_fidelity(traj.f[i]); };
    std::size_t left = peak, right = peak;
    while (left > 0 && fidelity(left - 1) >= threshold) --left;
    while (right + 1 < traj.f.size() && fidelity(right + 1) >= threshold) ++right;

    double t_left = traj.t[left];
    if (left > 0) {
        const double f0 = fidelity(left - 1), f1 = fidelity(left);
        t_left = traj.t[left - 1] + (threshold - f0) / (f1 - f0) * (traj.t[left] - traj.t[left - 1]);
    }
    double t_right = traj.t[right];
    if (right + 1 < traj.f.size()) {
        const double f0 = fidelity(right), f1 = fidelity(right + 1);
        t_right = traj.t[right] + (threshold - f0) / (f1 - f0) * (traj.t[right + 1] - traj.t[right]);
    }
    scan.width = t_right - t_left;
    return scan;
}

} // namespace chainctl::dynamics

// twoqubit.cpp — flux-tunable transmon pair: level maps, iSWAP chevrons and adiabatic CPHASE

#include "sqsim/twoqubit.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "sqsim/linalg.hpp"

namespace sqsim::gates {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

struct FluxMap::Impl {
    Spline e1, e2;
};

FluxMap::FluxMap(const device::QubitCircuitParams& p, double phi_min, double phi_max, int points, int cutoff)
    : lo_(phi_min), hi_(phi_max) {
    if (!(phi_max > phi_min) || points < 4) throw Error(ErrorCode::invalid_grid, "invalid flux grid");
    std::vector<double> e1(points), e2(points);
    const double h = (phi_max - phi_min) / (points - 1);
    for (int k = 0; k < points; ++k) {
        auto s = device::spectrum(device::build_split_transmon_hamiltonian(p, {phi_min + k * h}, cutoff), 3);
        e1[k] = kTwoPi * (s.energies[1] - s.energies[0]);
        e2[k] = kTwoPi * (s.energies[2] - s.energies[0]);
    }
    impl_ = std::make_shared<const Impl>(Impl{Spline(e1.begin(), e1.end(), phi_min, h),
                                              Spline(e2.begin(), e2.end(), phi_min, h)});
}

double FluxMap::level(int n, double phi) const {
    phi = std::clamp(phi, lo_, hi_);
    if (n == 0) return 0.0;
    if (n == 1) return impl_->e1(phi);
    if (n == 2) return impl_->e2(phi);
    throw Error(ErrorCode::invalid_params, "only levels 0..2 are mapped");
}

namespace {

template <class F>
double bisect(F f, double a, double b, int iters = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) == (fb > 0)) throw Error(ErrorCode::invalid_params, "no sign change on bracket");
    for (int i = 0; i < iters && b - a > 1e-14; ++i) {
        double m = 0.5 * (a + b), fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double FluxMap::phi_for_omega01(double w) const {
    return bisect([&](double phi) { return omega01(phi) - w; }, lo_, hi_);
}

TransmonPair make_transmon_pair(const device::QubitCircuitParams& q1, const device::QubitCircuitParams& q2, double g,
                                double phi_idle, double phi_max) {
    auto s2 = device::spectrum(device::build_transmon_hamiltonian(q2), 3);
    return TransmonPair{FluxMap(q1, 0.0, phi_max), s2.omega_01, s2.alpha, g, phi_idle};
}

Mat two_excitation_hamiltonian(const TransmonPair& pr, double phi) {
    const double e1 = pr.q1.level(1, phi), e2 = pr.q1.level(2, phi);
    const double f1 = pr.w2, f2 = 2 * pr.w2 + pr.a2;
    Mat H = Mat::Zero(6, 6);
    H(1, 1) = f1;
    H(2, 2) = e1;
    H(3, 3) = e1 + f1;
    H(4, 4) = f2;
    H(5, 5) = e2;
    H(1, 2) = H(2, 1) = pr.g;
    H(3, 4) = H(4, 3) = std::sqrt(2.0) * pr.g;
    H(3, 5) = H(5, 3) = std::sqrt(2.0) * pr.g;
    return H;
}

Mat qubit_pair_hamiltonian(const TransmonPair& pr, double phi) {
    const double e1 = pr.q1.omega01(phi);
    Mat H = Mat::Zero(4, 4);
    H(1, 1) = pr.w2;
    H(2, 2) = e1;
    H(3, 3) = e1 + pr.w2;
    H(1, 2) = H(2, 1) = pr.g;
    return H;
}

namespace {

// dressed eigenvectors reordered to follow the bare labels
Mat dressed_basis(const Mat& H, Eigen::VectorXd* energies = nullptr) {
    auto e = la::eigh(H);
    auto idx = la::bare_to_dressed(e.vectors);
    Mat V(H.rows(), H.cols());
    if (energies) energies->resize(H.rows());
    for (int j = 0; j < H.rows(); ++j) {
        V.col(j) = e.vectors.col(idx[j]);
        if (energies) (*energies)(j) = e.values(idx[j]);
    }
    return V;
}

} // namespace

double zeta(const TransmonPair& pr, double phi) {
    Eigen::VectorXd E;
    dressed_basis(two_excitation_hamiltonian(pr, phi), &E);
    return E(3) - E(1) - E(2) + E(0);
}

double cphase_crossing(const TransmonPair& pr) {
    return bisect([&](double phi) { return pr.q1.level(2, phi) - pr.q1.level(1, phi) - pr.w2; }, pr.phi_idle,
                  pr.q1.phi_max());
}

double iswap_bias(const TransmonPair& pr) { return pr.q1.phi_for_omega01(pr.w2); }

double FluxTrajectory::at(double t) const {
    if (phi.empty()) return 0.0;
    if (phi.size() == 1) return phi[0];
    double x = std::clamp(t / dt, 0.0, double(phi.size() - 1));
    size_t k = std::min(size_t(x), phi.size() - 2);
    double w = x - double(k);
    return (1 - w) * phi[k] + w * phi[k + 1];
}

FluxTrajectory square_trajectory(double phi_idle, double phi_pulse, double tau, double dt) {
    (void)phi_idle;
    if (!(tau > 0)) throw Error(ErrorCode::invalid_params, "tau must be positive");
    int n = std::max(1, int(std::ceil(tau / dt - 1e-9)));
    return FluxTrajectory{tau / n, std::vector<double>(n + 1, phi_pulse)};
}

FluxTrajectory raised_cosine_trajectory(double phi_idle, double phi_hold, double T, double rise, double dt) {
    if (!(T > 0) || !(rise >= 0) || 2 * rise > T) throw Error(ErrorCode::invalid_params, "need T >= 2 rise > 0");
    int n = std::max(2, int(std::ceil(T / dt - 1e-9)));
    FluxTrajectory tr{T / n, std::vector<double>(n + 1)};
    for (int k = 0; k <= n; ++k) {
        double t = k * tr.dt, w = 1.0;
        if (rise > 0 && t < rise) w = 0.5 * (1 - std::cos(kPi * t / rise));
        else if (rise > 0 && t > T - rise) w = 0.5 * (1 - std::cos(kPi * (T - t) / rise));
        tr.phi[k] = phi_idle + (phi_hold - phi_idle) * w;
    }
    return tr;
}

FluxTrajectory concatenate(const FluxTrajectory& a, const FluxTrajectory& b) {
    if (std::abs(a.dt - b.dt) > 1e-12) throw Error(ErrorCode::invalid_params, "trajectories need equal dt");
    FluxTrajectory c = a;
    c.phi.insert(c.phi.end(), b.phi.begin() + (b.phi.empty() ? 0 : 1), b.phi.end());
    return c;
}

Chevron iswap_chevron(const TransmonPair& pr, const std::vector<double>& flux, const std::vector<double>& tau,
                      int levels) {
    if (flux.empty() || tau.empty()) throw Error(ErrorCode::invalid_grid, "empty chevron grid");
    if (levels != 4 && levels != 6) throw Error(ErrorCode::invalid_params, "levels must be 4 or 6");
    Chevron c{flux, tau, {}};
    for (double phi : flux) {
        Mat H = levels == 4 ? qubit_pair_hamiltonian(pr, phi) : two_excitation_hamiltonian(pr, phi);
        auto e = la::eigh(H);
        Vec coef = e.vectors.row(2).adjoint(); // <v_j|10>
        std::vector<double> row;
        for (double t : tau) {
            cd amp = 0;
            for (int j = 0; j < H.rows(); ++j) amp += e.vectors(1, j) * std::exp(-kI * e.values(j) * t) * coef(j);
            row.push_back(std::norm(amp));
        }
        c.p01.push_back(row);
    }
    return c;
}

std::vector<double> iswap_phase_correction(const TransmonPair& pr, const FluxTrajectory& traj) {
    const double w_idle = pr.q1.omega01(pr.phi_idle);
    double th = 0.0;
    for (size_t k = 0; k + 1 < traj.phi.size(); ++k)
        th += 0.5 * traj.dt * ((w_idle - pr.q1.omega01(traj.phi[k])) + (w_idle - pr.q1.omega01(traj.phi[k + 1])));
    return {th, 0.0};
}

Mat iswap_gate(const TransmonPair& pr, double tau, double phi, bool correct) {
    Mat U = la::expm_herm(qubit_pair_hamiltonian(pr, phi), tau);
    Mat H0 = qubit_pair_hamiltonian(pr, pr.phi_idle);
    for (int j = 0; j < 4; ++j) U.row(j) *= std::exp(kI * H0(j, j).real() * tau);
    if (correct) {
        double th = iswap_phase_correction(pr, square_trajectory(pr.phi_idle, phi, tau))[0];
        U.row(2) *= std::exp(-kI * th);
        U.row(3) *= std::exp(-kI * th);
    }
    return U;
}

double zeta_integral(const TransmonPair& pr, const FluxTrajectory& traj) {
    double acc = 0.0, prev = 0.0;
    for (size_t k = 0; k < traj.phi.size(); ++k) {
        double z = zeta(pr, traj.phi[k]);
        if (k > 0) acc += 0.5 * traj.dt * (prev + z);
        prev = z;
    }
    return acc;
}

FluxTrajectory fast_adiabatic_trajectory(const TransmonPair& pr, double phi_mid, double T, double l2, double dt) {
    if (!(T > 0)) throw Error(ErrorCode::invalid_params, "T must be positive");
    const double g2 = 2.0 * std::sqrt(2.0) * pr.g;
    auto detuning = [&](double phi) { return pr.q1.level(2, phi) - pr.q1.level(1, phi) - pr.w2; };
    auto angle = [&](double phi) { return std::atan2(g2, detuning(phi)); };
    const double th_i = angle(pr.phi_idle), th_m = angle(phi_mid);
    int n = std::max(2, int(std::ceil(T / dt - 1e-9)));
    FluxTrajectory tr{T / n, std::vector<double>(n + 1, pr.phi_idle)};
    const double cross = cphase_crossing(pr);
    for (int k = 1; k < n; ++k) {
        double x = double(k) / n;
        double w = 0.5 * (1 - std::cos(kTwoPi * x)) + l2 * 0.5 * (1 - std::cos(2 * kTwoPi * x));
        double th = th_i + (th_m - th_i) * w;
        double det = g2 / std::tan(th);
        tr.phi[k] = bisect([&](double phi) { return detuning(phi) - det; }, pr.phi_idle, cross);
    }
    return tr;
}

CPhaseDesign cphase_trajectory(const TransmonPair& pr, double target, double T, double rise, double dt,
                               TrajectoryShape shape) {
    if (target < 0) throw Error(ErrorCode::invalid_params, "target phase must be non-negative");
    auto make = [&](double hold) {
        if (shape == TrajectoryShape::fast_adiabatic && hold != pr.phi_idle)
            return fast_adiabatic_trajectory(pr, hold, T, 0.0, dt);
        return raised_cosine_trajectory(pr.phi_idle, hold, T, rise, dt);
    };
    CPhaseDesign d;
    if (target == 0.0) {
        d.trajectory = make(pr.phi_idle);
        d.phi_hold = pr.phi_idle;
        d.zeta_integral = zeta_integral(pr, d.trajectory);
        return d;
    }
    // stop just short of the degeneracy, where the dressed labels exchange
    const double cross = pr.phi_idle + (1.0 - 1e-4) * (cphase_crossing(pr) - pr.phi_idle);
    auto phase_at = [&](double hold) { return std::abs(zeta_integral(pr, make(hold))); };
    d.max_phase = phase_at(cross);
    if (d.max_phase < target)
        throw Error(ErrorCode::invalid_params,
                    "target phase unreachable; max achievable " + std::to_string(d.max_phase) + " rad");
    double lo = pr.phi_idle, hi = cross;
    for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
        double m = 0.5 * (lo + hi);
        if (phase_at(m) < target) lo = m;
        else hi = m;
    }
    // lower depth preferred on equal error
    double a = phase_at(lo), b = phase_at(hi);
    d.phi_hold = std::abs(a - target) <= std::abs(b - target) ? lo : hi;
    d.trajectory = make(d.phi_hold);
    d.zeta_integral = zeta_integral(pr, d.trajectory);
    return d;
}

CPhaseResult cphase_unitary(const TransmonPair& pr, const FluxTrajectory& traj, bool cancel, double dt) {
    if (traj.phi.size() < 2) throw Error(ErrorCode::invalid_params, "trajectory too short");
    // piecewise-constant midpoint exponentials; exact for each frozen Hamiltonian
    const double T = traj.duration();
    const int n = std::max(1, int(std::ceil(T / dt)));
    const double h = T / n;
    Mat U = Mat::Identity(6, 6);
    for (int k = 0; k < n; ++k) {
        Mat Hm = two_excitation_hamiltonian(pr, traj.at((k + 0.5) * h));
        if (!Hm.allFinite()) throw Error(ErrorCode::numeric_failure, "Hamiltonian contains NaN/Inf");
        U = la::expm_herm(Hm, h) * U;
    }
    Mat V = dressed_basis(two_excitation_hamiltonian(pr, pr.phi_idle));
    Mat Ud = V.adjoint() * U * V;
    CPhaseResult r;
    r.raw = Ud.topLeftCorner(4, 4);
    cd ratio = Ud(3, 3) * Ud(0, 0) / (Ud(1, 1) * Ud(2, 2));
    r.phase = -std::arg(ratio);
    double stay = 0.0;
    for (int k = 0; k < 4; ++k) stay += std::norm(Ud(k, 3));
    r.leakage = std::clamp(1.0 - stay, 0.0, 1.0);
    r.nonadiabatic = r.leakage > 0.05;
    Mat G = Mat::Identity(4, 4);
    if (cancel) {
        G(3, 3) = std::exp(-kI * r.phase);
    } else {
        for (int k = 0; k < 4; ++k) G(k, k) = std::exp(kI * std::arg(Ud(k, k)));
    }
    r.gate = GateOp{"CZ", {0, 1}, G, {{"phi", r.phase}, {"leakage", r.leakage}}};
    return r;
}

} // namespace sqsim::gates

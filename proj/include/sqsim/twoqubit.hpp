// twoqubit.hpp — flux-tunable transmon pair: level maps, iSWAP chevrons and adiabatic CPHASE

#pragma once

#include <memory>
#include <vector>

#include "sqsim/device.hpp"
#include "sqsim/gates.hpp"

namespace sqsim::gates {

// levels E_1, E_2 (rad/ns, relative to E_0) of a split transmon on a uniform flux grid, cubic B-spline
class FluxMap {
public:
    FluxMap(const device::QubitCircuitParams& p, double phi_min, double phi_max, int points = 1001,
            int cutoff = 25);
    double level(int n, double phi) const; // n = 0, 1, 2
    double omega01(double phi) const { return level(1, phi); }
    // phi in [phi_min, phi_max] with omega01(phi) = w, omega01 assumed monotone there
    double phi_for_omega01(double w) const;
    double phi_min() const { return lo_; }
    double phi_max() const { return hi_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double lo_, hi_;
};

// qubit 1 tunable, qubit 2 fixed; all rates rad/ns
struct TransmonPair {
    FluxMap q1;
    double w2{0.0};     // omega01 of qubit 2
    double a2{0.0};     // anharmonicity of qubit 2
    double g{0.0};
    double phi_idle{0.0};
};

TransmonPair make_transmon_pair(const device::QubitCircuitParams& q1, const device::QubitCircuitParams& q2, double g,
                                double phi_idle = 0.0, double phi_max = 1.2);

// basis {|00>,|01>,|10>,|11>,|02>,|20>}, energies relative to E_00
Mat two_excitation_hamiltonian(const TransmonPair& pr, double phi);
// two-level qubits: basis {|00>,|01>,|10>,|11>} with the exchange coupling only
Mat qubit_pair_hamiltonian(const TransmonPair& pr, double phi);

// omega_11 - (omega_01 + omega_10) of the dressed six-level spectrum
double zeta(const TransmonPair& pr, double phi);

// bias where bare |11> and |20> are degenerate
double cphase_crossing(const TransmonPair& pr);
// bias where omega01 of qubit 1 equals qubit 2
double iswap_bias(const TransmonPair& pr);

struct FluxTrajectory {
    double dt{0.05};          // ns
    std::vector<double> phi;  // samples at k*dt
    double duration() const { return phi.empty() ? 0.0 : dt * double(phi.size() - 1); }
    double at(double t) const; // linear interpolation, clamped
};

FluxTrajectory square_trajectory(double phi_idle, double phi_pulse, double tau, double dt = 0.05);
// raised-cosine rise and fall of length rise around a flat hold, total length T
FluxTrajectory raised_cosine_trajectory(double phi_idle, double phi_hold, double T, double rise = 8.0,
                                        double dt = 0.05);
FluxTrajectory concatenate(const FluxTrajectory& a, const FluxTrajectory& b);

struct Chevron {
    std::vector<double> flux, tau;
    std::vector<std::vector<double>> p01; // [flux][tau]
};

// |10> -> P(|01>) after a square excursion of length tau to each bias; levels 4 (two-level qubits) or 6
Chevron iswap_chevron(const TransmonPair& pr, const std::vector<double>& flux, const std::vector<double>& tau,
                      int levels = 4);

// theta_z per qubit = int (omega_idle - omega(t)) dt
std::vector<double> iswap_phase_correction(const TransmonPair& pr, const FluxTrajectory& traj);

// computational propagator in the frame of the idle qubit frequencies, optionally phase corrected
Mat iswap_gate(const TransmonPair& pr, double tau, double phi, bool correct_phases = true);

double zeta_integral(const TransmonPair& pr, const FluxTrajectory& traj);

// mixing angle of the |11>-|20> pair, theta = atan(2 sqrt2 g / (omega12_q1 - omega01_q2)), runs
// theta_i -> theta_i + (theta_m - theta_i)[(1 - cos(2 pi t/T))/2 + l2 (1 - cos(4 pi t/T))/2] over the whole gate
FluxTrajectory fast_adiabatic_trajectory(const TransmonPair& pr, double phi_mid, double T, double l2 = 0.0,
                                         double dt = 0.05);

enum class TrajectoryShape { raised_cosine, fast_adiabatic };

struct CPhaseDesign {
    FluxTrajectory trajectory;
    double phi_hold{0.0};
    double zeta_integral{0.0};
    double max_phase{0.0};
};

// excursion depth by bisection so that |int zeta dt| = target; rise only applies to raised_cosine
CPhaseDesign cphase_trajectory(const TransmonPair& pr, double target_phase, double T, double rise = 8.0,
                               double dt = 0.05, TrajectoryShape shape = TrajectoryShape::raised_cosine);

struct CPhaseResult {
    GateOp gate;        // diag(1,1,1,e^{-i phase}) when single-qubit phases are cancelled
    Mat raw;            // computational block of the dressed propagator
    double phase{0.0};  // -arg(U11 U00 / (U01 U10))
    double leakage{0.0};
    bool nonadiabatic{false};
};

CPhaseResult cphase_unitary(const TransmonPair& pr, const FluxTrajectory& traj, bool cancel_single_qubit = true,
                            double dt = 0.01);

} // namespace sqsim::gates

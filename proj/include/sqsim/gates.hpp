// gates.hpp — ideal gates, virtual-Z compilation, gate identities, CR and bSWAP models

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "sqsim/common.hpp"

namespace sqsim::gates {

// qubit 0 is the most significant bit of the basis index; z=+1 <-> |0>
struct GateOp {
    std::string name;
    std::vector<int> qubits;
    Mat unitary;
    std::map<std::string, double> params;
};

// cos(theta/2) I - i sin(theta/2) n.sigma
GateOp su2_gate(const std::array<double, 3>& axis, double theta, int qubit = 0);
GateOp x_gate(double theta, int qubit = 0);
GateOp y_gate(double theta, int qubit = 0);
GateOp z_gate(double theta, int qubit = 0); // diag(e^{-i theta/2}, e^{i theta/2})
GateOp hadamard(int qubit = 0);
GateOp s_gate(int qubit = 0);
GateOp t_gate(int qubit = 0);
GateOp phase_gate(double gamma, int qubit = 0); // e^{i gamma} I

GateOp cnot(int control = 0, int target = 1);
GateOp cz_phi(double phi, int q0 = 0, int q1 = 1); // diag(1,1,1,e^{-i phi})
GateOp cphase(int q0 = 0, int q1 = 1);             // cz_phi(pi)

GateOp iswap_unitary(double g, double t, int q0 = 0, int q1 = 1);
GateOp zx_unitary(double theta, int q0 = 0, int q1 = 1);
GateOp bswap_unitary(double theta, double phi, int q0 = 0, int q1 = 1);

// Z_phi X_theta Z_lambda, the form realized by the two-pulse sequence below
Mat euler_zxz(double theta, double phi, double lambda);
// (theta, phi, lambda) with U = e^{i g} euler_zxz(theta, phi, lambda)
std::array<double, 3> euler_zxz_angles(const Mat& U);
// time-ordered Z_{lambda-pi/2}, X_{pi/2}, Z_{pi-theta}, X_{pi/2}, Z_{phi-pi/2}
std::vector<GateOp> any_su2_sequence(double theta, double phi, double lambda, int qubit = 0);

// full n-qubit operator of a gate
Mat embed(const GateOp& g, int n_qubits);
// product of a time-ordered sequence (first element acts first)
Mat compose(const std::vector<GateOp>& seq, int n_qubits);

struct CompiledSequence {
    std::vector<GateOp> ops;         // physical operations; single-qubit pulses carry "phase_offset"
    std::map<int, double> frames;    // accumulated frame per qubit after the last op
    int physical_z_count{0};
};

// removes every Z_theta; subsequent pulses become Z_{-phi0} G Z_{phi0} with phi0 the accumulated angle,
// two-qubit gates become F^dag G F with F the current frame
CompiledSequence virtual_z_compile(const std::vector<GateOp>& seq);
// compiled operator including the trailing frame rotation (equals the original up to phase)
Mat compiled_unitary(const CompiledSequence& c, int n_qubits, bool include_frames = true);

enum class Identity { cnot_from_cphase, cnot_from_iswap, uzz_from_czphi_v1, uzz_from_czphi_v2, ghz_circuit };

struct IdentityReport {
    std::string name;
    int n_qubits{2};
    std::vector<GateOp> sequence;
    Mat composed;
    Mat target;       // unitary target, or the target state as a column for ghz_circuit
    double distance;  // phase-invariant operator-norm (or state) distance
};

// param: phi for the ZZ identities, number of qubits for ghz_circuit
IdentityReport synthesize_identity(Identity which, double param = 0.0);

// (|Tr(U_ideal^dag U)|^2 + d)/(d(d+1))
double gate_fidelity(const Mat& U_actual, const Mat& U_ideal);

// ---- cross resonance ----

struct CREffectiveParams {
    double mu1_minus{0}, mu1_plus{0}, nu1_minus{0}, nu1_plus{0};
    double mu2_minus{0}, mu2_plus{0}, nu2_minus{0}, nu2_plus{0};
    double eta{0};
    // Omega V_d (nu1^- + z1 mu1^-) for control |0> (z1=+1) and |1> (z1=-1), rad/ns
    double rabi_control0{0}, rabi_control1{0};
};

// rates rad/ns; drive = Omega V_d (rad/ns), only used for the conditional rates
CREffectiveParams cr_effective_params(double g, double delta12, double alpha1, double alpha2, double eta,
                                      double drive = 0.0);

// -(Delta12/2) ZI + (A/2)(XI + (nu1^- + eta) IX + mu1^- ZX) in the frame of the drive
Mat cr_hamiltonian(const CREffectiveParams& p, double delta12, double drive);

struct CRTrace {
    std::vector<double> t;
    std::array<std::vector<double>, 2> y2, z2, angle; // per control state, qubit-2 Bloch components
    std::array<double, 2> rabi_rate{};                // fitted angular rates, rad/ns
    std::vector<double> differential_phase;           // angle[1] - angle[0]
    double t_pi{-1};                                  // first time |differential_phase| reaches pi, ns
};

CRTrace cr_simulate(const CREffectiveParams& p, double delta12, double drive, const std::vector<double>& t);

// Omega_B of the bSWAP drive
double bswap_rate(double omega_drive, double g, double delta12, double alpha1, double alpha2, double gamma_drive);

} // namespace sqsim::gates

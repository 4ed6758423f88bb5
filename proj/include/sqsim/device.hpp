// device.hpp — circuit Hamiltonians, spectra, couplings and dispersive parameters

#pragma once

#include <optional>
#include <vector>

#include "sqsim/common.hpp"

namespace sqsim::device {

enum class QubitKind { transmon, split_transmon, flux_qubit, fluxonium };

// energies in h*GHz
struct QubitCircuitParams {
    QubitKind kind{QubitKind::transmon};
    double E_C{0.3};
    double E_J{15.0}; // E_J, or E_J_sum for the split transmon
    double d{0.0};    // SQUID asymmetry
    double gamma{1.0};
    int N{1};
    double n_g{0.0};

    double E_L() const { return gamma / N * E_J; } // fluxonium
    void validate() const;
};

// reduced external flux; pi*Phi/Phi0 for SQUIDs, 2pi*Phi/Phi0 for flux qubit / fluxonium loops
struct FluxBias {
    double phi_e{0.0};
};

enum class BasisKind { charge, phase_grid, oscillator };

struct BasisInfo {
    BasisKind kind{BasisKind::charge};
    int charge_cutoff{0};
    double grid_min{0.0}, grid_max{0.0};
    int grid_points{0};
    int osc_levels{0};
};

struct HermitianOperator {
    Mat H;
    BasisInfo basis;
    int dim() const { return int(H.rows()); }
};

// energies h*GHz; transition frequencies rad/ns
struct Spectrum {
    std::vector<double> energies;
    double omega_01{0.0};
    double omega_12{0.0};
    double alpha{0.0};
};

struct PhaseGrid {
    double min{-4 * kPi};
    double max{4 * kPi};
    int points{401};
};

HermitianOperator build_transmon_hamiltonian(const QubitCircuitParams& p, int cutoff = 30);
HermitianOperator build_split_transmon_hamiltonian(const QubitCircuitParams& p, FluxBias bias, int cutoff = 30);
double effective_josephson_energy(double E_J_sum, double d, FluxBias bias);
double asymmetry_from_ratio(double gamma); // d = (gamma-1)/(gamma+1)

HermitianOperator build_flux_qubit_hamiltonian(const QubitCircuitParams& p, FluxBias bias, PhaseGrid grid = {});
// same Hamiltonian in the charge basis of the 2pi-periodic sector (cos(2phi+phi_e) as two-step hopping)
HermitianOperator build_flux_qubit_charge_hamiltonian(const QubitCircuitParams& p, FluxBias bias, int cutoff = 40);
double flux_qubit_potential(const QubitCircuitParams& p, FluxBias bias, double phi);
std::vector<double> flux_qubit_grid(const PhaseGrid& g); // sector points actually used

HermitianOperator build_fluxonium_hamiltonian(const QubitCircuitParams& p, FluxBias bias, int levels = 60);

Spectrum spectrum(const HermitianOperator& H, int k);
// eigenvectors as columns, k lowest
Mat eigenvectors(const HermitianOperator& H, int k);

// <0|n|1> in the transmon eigenbasis (charge operator n)
double transmon_charge_matrix_element(const QubitCircuitParams& p, int cutoff = 30);

// omega01 of any modality at a flux bias (rad/ns)
Spectrum qubit_spectrum(const QubitCircuitParams& p, FluxBias bias, int k = 3);

enum class CouplingKind { direct_capacitive, via_resonator };

struct CouplingSpec {
    CouplingKind kind{CouplingKind::direct_capacitive};
    double C_qq{0.0};                       // fF
    double g1{0}, g2{0}, delta1{0}, delta2{0}; // rad/ns
    double g{0.0};                          // derived
    bool regime_warning{false};             // set when |delta_i| < 10 g_i
};

// direct: omegas in rad/ns, capacitances in fF; via resonator uses spec fields only
double coupling_strength(CouplingSpec& spec, double omega_q1, double omega_q2, double C1, double C2);

struct DispersiveParams {
    double chi{0.0};
    double lamb_shift{0.0};
    double stark_per_photon{0.0};
    double n_crit{0.0};
};

// delta = omega_q - omega_r; chi is (omega_r^{|1>} - omega_r^{|0>})/2
DispersiveParams dispersive_params(double g, double delta, double alpha);

} // namespace sqsim::device

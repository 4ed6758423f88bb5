// noise.hpp — noise spectra, decoherence rates, decay laws, filter functions and decay experiments

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqsim/common.hpp"
#include "sqsim/fit.hpp"

namespace sqsim::noise {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PSDKind { one_over_f, ohmic, lorentzian, white, composite };

// bilateral, symmetric classical spectra; omega in rad/s, S in (noise unit)^2/Hz
struct NoisePSD {
    PSDKind kind{PSDKind::white};
    double amplitude{0.0};  // A^2 at 1 Hz (1/f), B^2 (ohmic slope at 1 Hz), S0 (white)
    double exponent{1.0};   // gamma for 1/f^gamma
    double f_low_Hz{0.0};   // S = 0 below
    double f_high_Hz{kInf}; // S = 0 above
    double chi{0.0};        // lorentzian, rad/s
    double kappa{0.0};      // lorentzian, rad/s
    double eta{1.0};
    double nbar{0.0};
    std::vector<NoisePSD> parts;

    static NoisePSD one_over_f(double A2, double gamma = 1.0);
    static NoisePSD ohmic(double B2);
    static NoisePSD lorentzian(double chi, double kappa, double eta, double nbar);
    static NoisePSD white(double S0);
    static NoisePSD composite(std::vector<NoisePSD> parts);

    void validate() const;
    double operator()(double omega) const;
};

double psd_eval(const NoisePSD& psd, double omega);

nlohmann::json psd_to_json(const NoisePSD& psd);
NoisePSD psd_from_json(const nlohmann::json& j);

// int S(omega) domega/2pi over f_lo <= |f| <= f_hi (both signs)
double band_variance(const NoisePSD& psd, double f_lo_Hz, double f_hi_Hz);

// real Gaussian record with the given spectrum on the FFT grid of n samples at fs
std::vector<double> synthesize_noise(const NoisePSD& psd, double fs_Hz, std::size_t n, std::uint64_t seed);

// Fermi golden rule; matrix element as angular frequency per noise unit, S in unit^2/Hz -> 1/s
double gamma1_from_psd(double matrix_element, double S_at_omega_q);

struct ThermalRates {
    double gamma_up{0.0};
    double polarization{1.0};
    double boltzmann{0.0}; // hbar omega / kB T
};
// omega_q in rad/ns, T in kelvin; rates in the unit of gamma_down
ThermalRates thermal_rates(double omega_q, double T_K, double gamma_down);

// rates in 1/us, times in us
struct DecoherenceRates {
    double Gamma1{0.0};
    double Gamma1_up{0.0};
    double Gamma1_down{0.0};
    double Gamma_phi{0.0};
    double Gamma2{0.0};
    double T1{kInf};
    double T2{kInf};
    double T_phi_G{kInf};

    static DecoherenceRates from_times(double T1_us, double T_phi_us, double T_phi_G_us = kInf,
                                       double Gamma1_up = 0.0);
    void validate() const;
};

// pulse centres delta_j in (0, 1) of the free time tau; lengths in us
struct PulseSequenceSpec {
    int N{0};
    std::vector<double> delta;
    double tau{1.0};
    double tau_pi{0.0};

    static PulseSequenceSpec ramsey(double tau_us);
    static PulseSequenceSpec hahn(double tau_us, double tau_pi_us = 0.0);
    static PulseSequenceSpec cpmg(int N, double tau_us, double tau_pi_us = 0.0);
    void validate() const;
};

// g_N(omega, tau), omega in rad/s
double filter_function(const PulseSequenceSpec& seq, double omega);

struct CoherenceOptions {
    double wall_time_s{100.0}; // IR cutoff omega_ir/2pi = 1/(10 wall time) unless ir_Hz > 0
    double ir_Hz{0.0};
    double uv_factor{100.0};   // omega_uv/2pi = uv_factor / tau
    double rel_tol{1e-8};
};

struct Coherence {
    double chi{0.0};
    double decay{1.0};
    double error_estimate{0.0};
    double omega_ir{0.0};
    double omega_uv{0.0};
};

// chi_N = (tau^2/2)(dw/dlambda)^2 int g_N S domega/2pi; dOmega_dLambda in rad/s per unit
Coherence coherence_decay(const NoisePSD& psd, const PulseSequenceSpec& seq, double dOmega_dLambda,
                          const CoherenceOptions& opts = {});

// 2x2 density matrices in the {|0>,|1>} basis; delta_omega in rad/us, t in us
Mat bloch_redfield_rho(cd alpha, cd beta, const DecoherenceRates& rates, double delta_omega, double t);
Mat rho_with_1f(cd alpha, cd beta, double Gamma1, const std::function<double(double)>& chi_N,
                double delta_omega, double t);
std::function<double(double)> gaussian_chi(double T_phi_G_us);

enum class DecayKind { t1, ramsey, hahn, cpmg };

// dephasing sources are additive in chi: exponential T_phi, Gaussian T_phi_G, optional PSD
struct DecayTruth {
    double T1_us{kInf};
    double T_phi_us{kInf};
    double T_phi_G_us{kInf};
    std::optional<NoisePSD> psd;
    double dOmega_dLambda{0.0};
    CoherenceOptions coherence;
};

struct DecayExperiment {
    DecayKind kind{DecayKind::t1};
    int n_pulses{0};         // cpmg only
    double detuning{0.0};    // rad/us, ramsey only
    std::vector<double> t_us;
    long shots{0};           // 0 means noiseless expectation values
    std::uint64_t seed{0};
    double tau_pi_us{0.0};
    double known_T1_us{0.0}; // > 0 enables the Gaussian-times-exponential Ramsey model
};

struct DecayFit {
    std::string model;     // exponential | damped_cosine | gaussian | gaussian_cosine
    fit::FitResult result;
    double T{0.0};         // T1 (t1), T2* (ramsey), T2 (echo, cpmg), T_phi_G (gaussian models)
    double T_err{0.0};
    double aicc_exponential{kInf};
    double aicc_gaussian{kInf};
};

struct DecayResult {
    std::vector<double> t_us;
    std::vector<double> polarization; // excited-state probability P1 after the final analysis pulse
    std::vector<double> stderr_;
    DecayFit fit;
};

// noiseless P1(t) for the experiment
double decay_signal(const DecayExperiment& ex, const DecayTruth& truth, double t_us);

DecayResult simulate_decay_experiment(const DecayExperiment& ex, const DecayTruth& truth);

nlohmann::json decay_report(const DecayResult& r);
std::string decay_csv(const DecayResult& r);

const char* to_string(DecayKind k);
DecayKind decay_kind_from_string(const std::string& s);

} // namespace sqsim::noise

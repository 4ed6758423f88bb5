// readout.hpp — dispersive readout chain: resonator response, signal synthesis, demodulation, shot statistics

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqsim/common.hpp"

namespace sqsim::readout {

enum class Coupling { reflection, transmission };

// all rates in rad/ns; state |0> sits at omega_r - chi, |1> at omega_r + chi
struct ResonatorParams {
    double omega_r{kTwoPi * 7.0};
    double kappa{kTwoPi * 2e-3};
    double chi{kTwoPi * 1e-3};
    Coupling coupling{Coupling::reflection};

    double Q() const { return omega_r / kappa; }
    double omega_state(int state) const;
    void validate() const;
};

// steady-state S11 (reflection) or S21 (transmission)
cd resonator_response(const ResonatorParams& r, int qubit_state, double omega);
// output phasor t ns after a probe step at omega; approaches the steady state at rate kappa/2
cd resonator_transient(const ResonatorParams& r, int qubit_state, double omega, double t);
double optimal_probe_frequency(const ResonatorParams& r);
// |S(state 1) - S(state 0)|, the distance between the two output phasors per unit drive
double state_separation(const ResonatorParams& r, double omega);

enum class ParampMode { phase_insensitive, phase_sensitive };

struct AmpStage {
    double gain{1.0}; // linear power ratio
    double T_N{0.0};  // kelvin
};

struct ParampSpec {
    double gain{1.0};
    ParampMode mode{ParampMode::phase_insensitive};
    double phi{0.0};
};

struct AmplifierChain {
    std::vector<AmpStage> stages;
    std::optional<ParampSpec> paramp;

    void validate() const;
    double total_gain() const;
};

double system_noise_temperature(const AmplifierChain& chain);

struct Efficiency {
    double eta{0.0};
    bool exceeds_unity{false};
};
// omega in rad/ns
Efficiency quantum_efficiency(double omega_rf, double T_sys);

struct Probe {
    double amplitude{1e-6}; // volts at the resonator output
    double omega{0.0};      // rad/ns; 0 selects the optimal probe frequency
    double duration{2000.0};
};

// real RF samples of the reflected/transmitted tone plus input-referred chain noise, gain applied
struct RFRecord {
    double fs{0.0};     // samples/ns
    double omega_ro{0.0};
    std::vector<double> s;
};

struct SynthesisOptions {
    double R_ohm{50.0};
    // qubit switches from |1> to |0> at this time (ns) when finite
    double decay_time{std::numeric_limits<double>::infinity()};
};

RFRecord synthesize_readout_signal(const ResonatorParams& r, const Probe& probe, int qubit_state,
                                   const AmplifierChain& chain, double fs, std::uint64_t seed,
                                   const SynthesisOptions& opts = {});

struct IQRecord {
    double fs{1.0};        // samples/ns
    double omega_if{0.0};  // rad/ns
    double t0{0.0};        // time stamp of sample 0 (ns)
    std::vector<double> I, Q;
    std::size_t n1{0}, n2{0}; // inclusive window
    cd phasor{0.0, 0.0};
};

// analog I-Q mixing with LO y = A_LO cos(omega_lo t), then a centred moving average of
// `lowpass` samples (0 picks the length that best nulls the sum frequency); the boxcar
// gain at the IF is divided out
IQRecord analog_mix(const RFRecord& rf, double omega_lo, double A_LO = 1.0, int lowpass = 0);

// digital stage: z = (1/M) sum (I + jQ) e^{-j omega_if t_n} over [n1, n2]
cd heterodyne_demodulate(IQRecord& rec);

// digitized IF record directly (mixer output), noise injected per quadrature
struct ReadoutConfig {
    ResonatorParams resonator;
    Probe probe;
    AmplifierChain chain;
    double A_LO{1.0};
    double omega_if{kTwoPi * 0.05}; // rad/ns
    double fs{1.0};                 // samples/ns
    double tau_rd{500.0};           // ns
    double tau_s{1000.0};           // ns
    double T1_us{std::numeric_limits<double>::infinity()}; // in-flight decay of |1>
    double R_ohm{50.0};

    void validate() const;
    double probe_omega() const;
    std::size_t n1() const;
    std::size_t n2() const;
};

IQRecord synthesize_if_record(const ReadoutConfig& c, int qubit_state, std::uint64_t seed,
                              double decay_time = std::numeric_limits<double>::infinity());

// per-quadrature standard deviation of the demodulated phasor from the chain noise
double phasor_noise_sigma(const ReadoutConfig& c);
// probe amplitude at which the SNR (2-sigma widths) reaches the target, noiseless means
double amplitude_for_snr(const ReadoutConfig& c, double snr);

struct ShotStatistics {
    std::vector<cd> phasors0, phasors1;
    std::vector<int> assigned0, assigned1;
    cd mu0{0.0, 0.0}, mu1{0.0, 0.0};
    double width0{0.0}, width1{0.0}; // 2 sigma along the separatrix normal
    double separation{0.0};
    double snr{0.0};
    double epsilon_sep{0.0};         // 1/2 erfc(SNR/2)
    double error0{0.0}, error1{0.0}; // measured misassignment per prepared state
    double assignment_error{0.0};    // mean of error0 and error1
    // histogram over both states
    std::vector<double> I_edges, Q_edges;
    std::vector<std::vector<double>> counts; // [Q bin][I bin]
};

// cluster means, widths and perpendicular-bisector assignment of given phasors
ShotStatistics shot_statistics(std::vector<cd> p0, std::vector<cd> p1, int bins = 64);
ShotStatistics shot_histogram(const ReadoutConfig& c, long n_shots, std::uint64_t seed, int bins = 64);

std::string shots_csv(const ShotStatistics& s);
std::string histogram_csv(const ShotStatistics& s);
nlohmann::json shot_report(const ShotStatistics& s);

double separation_error(double snr);

struct DecayError {
    double tau_ro{0.0};
    double error{0.0};
    double fidelity{1.0};
};
// tau_rd, tau_s in ns, T1 in us
DecayError readout_decay_error(double tau_rd, double tau_s, double T1_us);

enum class PurcellForm { dispersive, resonant, impedance };

// rates in any common unit (rad/ns here); Q_F > 0 adds the bandpass filter factor
double purcell_rate(double g, double delta, double kappa, double omega_q, double omega_r,
                    PurcellForm form = PurcellForm::dispersive, double Q_F = 0.0);
bool purcell_dispersive_valid(double g, double delta);

// quadrature convention a = X + iP, vacuum variance 1/4 per quadrature
std::vector<cd> paramp_transform(const std::vector<cd>& in, double G, ParampMode mode, double phi,
                                 std::uint64_t seed);
std::vector<cd> vacuum_ensemble(std::size_t n, std::uint64_t seed);

struct QuadratureGains {
    double amplified{1.0};
    double deamplified{1.0};
};
QuadratureGains phase_sensitive_gains(double G);

// config blocks
ReadoutConfig readout_from_json(const nlohmann::json& j);
nlohmann::json readout_to_json(const ReadoutConfig& c);
AmplifierChain chain_from_json(const nlohmann::json& j);

} // namespace sqsim::readout

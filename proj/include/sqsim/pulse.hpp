// pulse.hpp — drive envelopes, drive Hamiltonians, frames and the Schrodinger integrator

#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqsim/common.hpp"

namespace sqsim::pulse {

enum class EnvelopeKind { gaussian, cosine, flattop, samples };

// times in ns; s(t) dimensionless with |s| <= 1, amplitude V0 carries the scale
struct Envelope {
    EnvelopeKind kind{EnvelopeKind::gaussian};
    double amplitude{1.0};
    double sigma{10.0};    // gaussian
    double rise{5.0};      // flattop
    double duration{40.0};
    std::vector<std::pair<double, double>> samples;

    void validate() const;
    double s(double t) const;     // envelope, zero outside [0, duration]
    double sdot(double t) const;  // derivative
    double integral(double t0, double t1, double dt) const; // Simpson with step dt, same nodes as RK4
};

// detunings in rad/ns, drag_df in GHz (cycles/ns)
struct DrivePulse {
    Envelope env;
    double delta_omega{0.0};
    double phase{0.0};
    double drag_lambda{0.0};
    double drag_df{0.0};
    double t0{0.0}; // start time inside a schedule

    double I() const;
    double Q() const;
};

// complex baseband epsilon(t) = V0 (I'(t) + i Q'(t)) e^{i(dw t + phi)}; alpha only used when lambda != 0
cd complex_envelope(const DrivePulse& p, double t, double alpha = 0.0);

// -(Omega/2) V0 s(t) [[0, e^{-i(dw t+phi)}], [e^{i(dw t+phi)}, 0]]
Mat rwa_drive_hamiltonian(const DrivePulse& p, double omega_coupling, double t, double alpha = 0.0);

// Theta(t) = -Omega V0 int_0^t s
double rabi_angle(const DrivePulse& p, double omega_coupling, double t, double dt = 0.01);

struct Waveform {
    std::vector<double> t, I, Q;
};
Waveform drag_waveform(const DrivePulse& p, double alpha, double dt = 1.0);

// lab frame: omega_q a^dag a + (alpha/2) a^dag a^dag a a + Omega V_d(t) i(a - a^dag)
// with V_d(t) = V0 [Im eps cos(w_d t) - Re eps sin(w_d t)], w_d = omega_q - delta_omega
Mat build_drive_hamiltonian_multilevel(double omega_q, double alpha, int levels, const DrivePulse& p,
                                       double omega_coupling, double t);
// same system in the frame rotating at w_d with the rotating-wave approximation applied
Mat rwa_multilevel_hamiltonian(double omega_q, double alpha, int levels, const DrivePulse& p,
                               double omega_coupling, double t);

using HSource = std::function<Mat(double)>;

// t -> U H U^dag - H0 with U = exp(i H0 t), H0 = diag(frame)
HSource to_rotating_frame(HSource H_lab, std::vector<double> frame);

enum class Stepper { rk4, expm_midpoint };

struct EvolveOptions {
    Stepper stepper{Stepper::rk4};
    int substeps{0};             // 0: choose from the spectral rule
    bool store_states{true};
    bool propagator{false};      // evolve the identity instead of psi0
    int computational_dim{0};    // leakage = population outside the first n levels; 0 disables
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<double> leakage;
    Vec final_state;
    Mat propagator;
};

EvolutionResult evolve(const HSource& H, const Vec& psi0, const std::vector<double>& t_grid,
                       const EvolveOptions& opt = {});

std::vector<double> linspace(double a, double b, int n);

// ---- schedules ----

enum class ChannelKind { drive, flux };

struct FluxPulse {
    double t0{0.0};
    double duration{0.0};
    std::vector<double> samples; // phi_e values on a uniform grid across [t0, t0+duration]
};

struct Channel {
    ChannelKind kind{ChannelKind::drive};
    int qubit{0};
    std::vector<DrivePulse> pulses;
    std::vector<FluxPulse> flux;
};

struct PulseSchedule {
    std::map<std::string, Channel> channels;
    std::map<int, double> phase_frames; // accumulated virtual-Z angle per qubit
    double total_duration{0.0};

    // appends after the last pulse on the channel; the pulse phase is offset by the qubit frame
    void add_drive(const std::string& channel, int qubit, DrivePulse p, double gap = 0.0);
    void add_flux(const std::string& channel, int qubit, FluxPulse f);
    void virtual_z(int qubit, double theta);
    void validate() const;
    double channel_end(const std::string& channel) const;
};

nlohmann::json schedule_to_json(const PulseSchedule& s);
PulseSchedule schedule_from_json(const nlohmann::json& j);
// CSV text "t_ns,I,Q" for one drive channel, sampled at dt
std::string waveform_csv(const PulseSchedule& s, const std::string& channel, double alpha, double dt = 1.0);

} // namespace sqsim::pulse

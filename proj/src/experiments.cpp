// experiments.cpp — configuration-driven experiment runner with deterministic file outputs

#include "sqsim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sqsim/gates.hpp"
#include "sqsim/io.hpp"
#include "sqsim/linalg.hpp"
#include "sqsim/noise.hpp"
#include "sqsim/pulse.hpp"
#include "sqsim/readout.hpp"

namespace sqsim::exp {

using nlohmann::json;

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"spectrum",      "rabi",      "drag-scan",         "t1",
                                                "ramsey",        "hahn",      "cpmg",              "iswap-chevron",
                                                "cphase-cal",    "cr-scan",   "readout-histogram", "purcell",
                                                "paramp"};
    return names;
}

// ---- config ----

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw Error(ErrorCode::config_error, "config: expected an object");
    ExperimentConfig c;
    if (!j.contains("experiment") || !j.at("experiment").is_string())
        throw Error(ErrorCode::config_error, "experiment: missing or not a string");
    c.experiment = j.at("experiment").get<std::string>();
    if (j.contains("device")) {
        const auto& d = j.at("device");
        if (d.is_string()) {
            std::filesystem::path p = d.get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            try {
                c.device = json::parse(io::read_file(p));
            } catch (const json::exception& e) {
                throw Error(ErrorCode::config_error, "device: cannot parse " + p.string() + ": " + e.what());
            }
        } else if (d.is_object()) {
            c.device = d;
        } else {
            throw Error(ErrorCode::config_error, "device: expected an object or a file path");
        }
    } else {
        c.device = json::object();
    }
    if (j.contains("parameters")) {
        if (!j.at("parameters").is_object()) throw Error(ErrorCode::config_error, "parameters: expected an object");
        c.parameters = j.at("parameters");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer()) throw Error(ErrorCode::config_error, "seed: expected an integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    return {{"device", c.device},
            {"experiment", c.experiment},
            {"parameters", c.parameters},
            {"seed", c.seed},
            {"output", c.output.string()}};
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    json j;
    try {
        j = json::parse(io::read_file(file));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_error, "cannot parse " + file.string() + ": " + e.what());
    }
    return config_from_json(j, file.parent_path());
}

// ---- device tree ----

device::QubitCircuitParams qubit_from_json(const json& j) {
    device::QubitCircuitParams p;
    const std::string kind = j.value("kind", "transmon");
    if (kind == "transmon") p.kind = device::QubitKind::transmon;
    else if (kind == "split_transmon") p.kind = device::QubitKind::split_transmon;
    else if (kind == "flux_qubit") p.kind = device::QubitKind::flux_qubit;
    else if (kind == "fluxonium") p.kind = device::QubitKind::fluxonium;
    else throw Error(ErrorCode::config_error, "kind: unknown qubit kind " + kind);
    p.E_C = j.value("E_C_GHz", p.E_C);
    p.E_J = j.value("E_J_GHz", p.E_J);
    p.d = j.value("d", p.d);
    p.gamma = j.value("gamma", p.gamma);
    p.N = j.value("N", p.N);
    p.n_g = j.value("n_g", p.n_g);
    return p;
}

namespace {

json default_pair_qubit(int k) {
    if (k == 0) return {{"kind", "split_transmon"}, {"E_C_GHz", 0.25}, {"E_J_GHz", 19.5}};
    return {{"kind", "transmon"}, {"E_C_GHz", 0.25}, {"E_J_GHz", 13.78}};
}

json qubit_json(const json& device, int k) {
    if (device.contains("qubits") && device.at("qubits").is_array() && int(device.at("qubits").size()) > k)
        return device.at("qubits").at(k);
    if (k == 0 && device.contains("qubit")) return device.at("qubit");
    return default_pair_qubit(k);
}

} // namespace

gates::TransmonPair pair_from_device(const json& device, double g) {
    auto q1 = qubit_from_json(qubit_json(device, 0));
    auto q2 = qubit_from_json(qubit_json(device, 1));
    return gates::make_transmon_pair(q1, q2, g);
}

// ---- DRAG metrics ----

DragMetrics drag_metrics(double omega_q, double alpha, double sigma, double lambda) {
    pulse::DrivePulse p;
    p.env.kind = pulse::EnvelopeKind::gaussian;
    p.env.sigma = sigma;
    p.env.duration = 4.0 * sigma;
    const double T = p.env.duration;
    const double area = p.env.integral(0.0, T, T / 4000.0);
    p.env.amplitude = -kPi / area;
    p.drag_lambda = lambda;
    pulse::HSource H = [&](double t) { return pulse::rwa_multilevel_hamiltonian(omega_q, alpha, 3, p, 1.0, t); };
    pulse::EvolveOptions o;
    o.propagator = true;
    o.store_states = false;
    auto r = pulse::evolve(H, Vec::Zero(3), {0.0, T}, o);
    const Mat U = r.propagator.topLeftCorner(2, 2);
    DragMetrics m;
    m.leakage = std::norm(r.propagator(2, 0));
    const Mat Xpi = gates::x_gate(kPi).unitary;
    const Mat E = Xpi.adjoint() * U;
    const cd ph = std::sqrt(E.determinant());
    const Mat Es = E / ph;
    // Es = a I - i b.sigma; a phase (detuning) error tilts the rotation axis out of x, giving b_y, b_z
    const cd by = 0.5 * (Es(1, 0) - Es(0, 1));
    const cd bz = 0.5 * kI * (Es(0, 0) - Es(1, 1));
    m.phase_error = 2.0 * std::asin(std::min(1.0, std::hypot(std::abs(by), std::abs(bz))));
    m.fidelity = gates::gate_fidelity(U, Xpi);
    return m;
}

// ---- parameter access ----

namespace {

struct Params {
    const json& j;

    bool has(const std::string& k) const { return j.contains(k) && !j.at(k).is_null(); }
    double num(const std::string& k, double def) const {
        if (!has(k)) return def;
        if (!j.at(k).is_number()) throw Error(ErrorCode::config_error, "parameters." + k + ": expected a number");
        return j.at(k).get<double>();
    }
    double req(const std::string& k) const {
        if (!has(k)) throw Error(ErrorCode::config_error, "parameters." + k + ": required");
        return num(k, 0.0);
    }
    int integer(const std::string& k, int def) const {
        if (!has(k)) return def;
        if (!j.at(k).is_number_integer()) throw Error(ErrorCode::config_error, "parameters." + k + ": expected an integer");
        return j.at(k).get<int>();
    }
    std::string str(const std::string& k, const std::string& def) const {
        if (!has(k)) return def;
        if (!j.at(k).is_string()) throw Error(ErrorCode::config_error, "parameters." + k + ": expected a string");
        return j.at(k).get<std::string>();
    }
};

struct RequiredField {
    std::string name;
    bool positive;
};

const std::map<std::string, std::vector<RequiredField>>& required_fields() {
    static const std::map<std::string, std::vector<RequiredField>> r{
        {"t1", {{"T1_us", true}}},
        {"ramsey", {{"T1_us", true}}},
        {"hahn", {{"T1_us", true}}},
        {"cpmg", {{"T1_us", true}}},
        {"iswap-chevron", {{"g_MHz", true}}},
        {"cphase-cal", {{"g_MHz", true}}},
        {"cr-scan", {{"g_MHz", true}}},
        {"purcell", {{"g_MHz", true}, {"kappa_MHz", true}}},
    };
    return r;
}

std::string csv_row(std::initializer_list<double> v) {
    std::string s;
    bool first = true;
    for (double x : v) {
        if (!first) s += ',';
        s += io::fmt(x);
        first = false;
    }
    return s + '\n';
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

double default_alpha(const json& device) {
    auto q = qubit_from_json(qubit_json(device, 0));
    return device::qubit_spectrum(q, {}, 3).alpha;
}

// ---- experiments ----

Artifacts run_spectrum(const ExperimentConfig& c) {
    Params P{c.parameters};
    auto q = qubit_from_json(qubit_json(c.device, 0));
    const double lo = P.num("phi_min", -kPi / 2 + 0.05), hi = P.num("phi_max", kPi / 2 - 0.05);
    const int n = P.integer("points", 101);
    if (n < 2 || !(hi > lo)) throw Error(ErrorCode::config_error, "parameters.points: need >= 2 points and phi_max > phi_min");
    std::string csv = "phi_e,omega01_GHz,omega12_GHz,alpha_MHz\n";
    for (double phi : pulse::linspace(lo, hi, n)) {
        auto s = device::qubit_spectrum(q, {phi}, 3);
        csv += csv_row({phi, units::rad_to_ghz(s.omega_01), units::rad_to_ghz(s.omega_12), units::rad_to_mhz(s.alpha)});
    }
    return {{"spectrum.csv", csv}};
}

Artifacts run_rabi(const ExperimentConfig& c) {
    Params P{c.parameters};
    const double alpha = P.has("alpha_MHz") ? units::mhz_to_rad(P.num("alpha_MHz", 0)) : default_alpha(c.device);
    pulse::DrivePulse p;
    p.env.kind = pulse::EnvelopeKind::gaussian;
    p.env.duration = P.num("duration_ns", 40.0);
    p.env.sigma = P.num("sigma_ns", p.env.duration / 4.0);
    p.env.validate();
    const double area = p.env.integral(0.0, p.env.duration, p.env.duration / 4000.0);
    const int n = P.integer("points", 81);
    const double theta_max = P.num("theta_max_pi", 4.0);
    std::string csv = "theta_over_pi,P0,P1,P2\n";
    for (double th : pulse::linspace(0.0, theta_max, n)) {
        p.env.amplitude = -th * kPi / area;
        pulse::HSource H = [&](double t) { return pulse::rwa_multilevel_hamiltonian(0.0, alpha, 3, p, 1.0, t); };
        Vec psi = Vec::Zero(3);
        psi(0) = 1.0;
        pulse::EvolveOptions o;
        o.store_states = false;
        auto r = pulse::evolve(H, psi, {0.0, p.env.duration}, o);
        const Vec& f = r.final_state;
        csv += csv_row({th, std::norm(f(0)), std::norm(f(1)), std::norm(f(2))});
    }
    return {{"rabi.csv", csv}};
}

Artifacts run_drag(const ExperimentConfig& c) {
    Params P{c.parameters};
    const double alpha = P.has("alpha_MHz") ? units::mhz_to_rad(P.num("alpha_MHz", 0)) : default_alpha(c.device);
    const double wq = units::ghz_to_rad(P.num("omega_q_GHz", 4.0));
    const double sigma = P.num("sigma_ns", 3.0);
    const int n = P.integer("points", 31);
    std::string csv = "lambda,leakage,phase_error_rad,fidelity\n";
    for (double lam : pulse::linspace(P.num("lambda_min", 0.0), P.num("lambda_max", 1.5), n)) {
        auto m = drag_metrics(wq, alpha, sigma, lam);
        csv += csv_row({lam, m.leakage, m.phase_error, m.fidelity});
    }
    return {{"drag_scan.csv", csv}};
}

noise::DecayKind decay_kind(const std::string& e) { return noise::decay_kind_from_string(e); }

Artifacts run_decay(const ExperimentConfig& c) {
    Params P{c.parameters};
    noise::DecayTruth truth;
    truth.T1_us = P.req("T1_us");
    if (P.has("T2_us")) {
        const double inv = 1.0 / P.num("T2_us", 0) - 0.5 / truth.T1_us;
        if (!(inv > 0.0)) throw Error(ErrorCode::invalid_rates, "parameters.T2_us: T2 must be below 2 T1");
        truth.T_phi_us = 1.0 / inv;
    }
    truth.T_phi_us = P.num("T_phi_us", truth.T_phi_us);
    truth.T_phi_G_us = P.num("T_phi_G_us", truth.T_phi_G_us);
    if (P.has("psd")) {
        truth.psd = noise::psd_from_json(c.parameters.at("psd"));
        truth.dOmega_dLambda = P.req("dOmega_dLambda_rad_s");
    }
    noise::DecayExperiment ex;
    ex.kind = decay_kind(c.experiment);
    ex.n_pulses = P.integer("n_pulses", ex.kind == noise::DecayKind::cpmg ? 4 : 0);
    ex.detuning = kTwoPi * P.num("detuning_MHz", ex.kind == noise::DecayKind::ramsey ? 0.05 : 0.0);
    ex.shots = P.integer("shots", 10000);
    ex.seed = io::stream_seed(c.seed, 1);
    ex.tau_pi_us = P.num("tau_pi_us", 0.0);
    ex.known_T1_us = P.num("known_T1_us", 0.0);
    double scale = truth.T1_us;
    if (ex.kind != noise::DecayKind::t1) {
        double r2 = 0.5 / truth.T1_us + (std::isfinite(truth.T_phi_us) ? 1.0 / truth.T_phi_us : 0.0);
        if (std::isfinite(truth.T_phi_G_us)) r2 += 1.0 / truth.T_phi_G_us;
        scale = 1.0 / r2;
    }
    ex.t_us = pulse::linspace(P.num("t_min_us", 0.0), P.num("t_max_us", 3.0 * scale), P.integer("points", 101));
    auto r = noise::simulate_decay_experiment(ex, truth);
    json rep = noise::decay_report(r);
    rep["experiment"] = c.experiment;
    rep["truth"] = {{"T1_us", truth.T1_us},
                    {"T_phi_us", std::isfinite(truth.T_phi_us) ? json(truth.T_phi_us) : json(nullptr)},
                    {"T_phi_G_us", std::isfinite(truth.T_phi_G_us) ? json(truth.T_phi_G_us) : json(nullptr)}};
    return {{"decay.csv", noise::decay_csv(r)}, {"fit_report.json", dump(rep)}};
}

double fitted_swap_period(const std::vector<double>& tau, const std::vector<double>& p01) {
    const double w0 = fit::dft_peak_frequency(tau, p01);
    fit::Params p0(3);
    p0 << 1.0, w0, 0.0;
    auto f = [](double t, const fit::Params& p) { return p(0) * 0.5 * (1.0 - std::cos(p(1) * t)) + p(2); };
    auto r = fit::least_squares(f, tau, p01, {}, p0, {"A", "w", "B"});
    return kTwoPi / std::abs(r.value("w"));
}

Artifacts run_chevron(const ExperimentConfig& c) {
    Params P{c.parameters};
    const double g = units::mhz_to_rad(P.req("g_MHz"));
    auto pr = pair_from_device(c.device, g);
    const double phi0 = gates::iswap_bias(pr);
    const double span = P.num("flux_span", 0.01);
    const int levels = P.integer("levels", 4);
    if (levels != 4 && levels != 6) throw Error(ErrorCode::config_error, "parameters.levels: must be 4 or 6");
    auto flux = pulse::linspace(phi0 - span, phi0 + span, P.integer("flux_points", 41));
    auto tau = pulse::linspace(0.0, P.num("tau_max_ns", 3.0 * kPi / g), P.integer("tau_points", 121));
    auto ch = gates::iswap_chevron(pr, flux, tau, levels);
    std::string csv = "phi_e,tau_ns,p01\n";
    for (size_t i = 0; i < flux.size(); ++i)
        for (size_t k = 0; k < tau.size(); ++k) csv += csv_row({flux[i], tau[k], ch.p01[i][k]});

    auto on = gates::iswap_chevron(pr, {phi0}, tau, levels);
    const double period = fitted_swap_period(tau, on.p01[0]);
    const Mat U = gates::iswap_gate(pr, kPi / (2.0 * g), phi0, true);
    const double F = gates::gate_fidelity(U, gates::iswap_unitary(g, kPi / (2.0 * g)).unitary);
    json rep{{"iswap_bias_phi", phi0},
             {"g_MHz", units::rad_to_mhz(g)},
             {"swap_period_ns", period},
             {"swap_period_expected_ns", kPi / g},
             {"iswap_fidelity", F}};
    return {{"chevron.csv", csv}, {"iswap_report.json", dump(rep)}};
}

Artifacts run_cphase(const ExperimentConfig& c) {
    Params P{c.parameters};
    const double g = units::mhz_to_rad(P.req("g_MHz"));
    auto pr = pair_from_device(c.device, g);
    pr.phi_idle = pr.q1.phi_for_omega01(units::ghz_to_rad(P.num("idle_GHz", 5.38)));
    const std::string shape = P.str("shape", "fast_adiabatic");
    gates::TrajectoryShape sh;
    if (shape == "fast_adiabatic") sh = gates::TrajectoryShape::fast_adiabatic;
    else if (shape == "raised_cosine") sh = gates::TrajectoryShape::raised_cosine;
    else throw Error(ErrorCode::config_error, "parameters.shape: unknown shape " + shape);
    const double T = P.num("T_ns", 60.0);
    auto d = gates::cphase_trajectory(pr, P.num("target_rad", kPi), T, P.num("rise_ns", 8.0), 0.05, sh);
    auto r = gates::cphase_unitary(pr, d.trajectory, true, P.num("dt_ns", 0.01));
    std::string csv = "t_ns,phi_e\n";
    for (size_t k = 0; k < d.trajectory.phi.size(); ++k) csv += csv_row({k * d.trajectory.dt, d.trajectory.phi[k]});
    json rep{{"phi_idle", pr.phi_idle},
             {"phi_hold", d.phi_hold},
             {"T_ns", T},
             {"shape", shape},
             {"zeta_idle_MHz", units::rad_to_mhz(gates::zeta(pr, pr.phi_idle))},
             {"zeta_integral_rad", d.zeta_integral},
             {"conditional_phase_rad", r.phase},
             {"leakage_20", r.leakage},
             {"nonadiabatic", r.nonadiabatic}};
    return {{"cphase_report.json", dump(rep)}, {"cphase_trajectory.csv", csv}};
}

Artifacts run_cr(const ExperimentConfig& c) {
    Params P{c.parameters};
    const double g = units::mhz_to_rad(P.req("g_MHz"));
    const double D = units::mhz_to_rad(P.num("delta12_MHz", 200.0));
    const double a1 = units::mhz_to_rad(P.num("alpha1_MHz", -330.0));
    const double a2 = units::mhz_to_rad(P.num("alpha2_MHz", -330.0));
    const double A = units::mhz_to_rad(P.num("drive_MHz", 26.0));
    auto prm = gates::cr_effective_params(g, D, a1, a2, P.num("eta", 0.03), A);
    auto t = pulse::linspace(0.0, P.num("t_max_ns", 400.0), P.integer("points", 401));
    auto tr = gates::cr_simulate(prm, D, A, t);
    std::string csv = "t_ns,y2_control0,z2_control0,y2_control1,z2_control1,differential_phase_rad\n";
    for (size_t k = 0; k < t.size(); ++k)
        csv += csv_row({t[k], tr.y2[0][k], tr.z2[0][k], tr.y2[1][k], tr.z2[1][k], tr.differential_phase[k]});
    json rep{{"rabi_control0_MHz_formula", units::rad_to_mhz(prm.rabi_control0)},
             {"rabi_control1_MHz_formula", units::rad_to_mhz(prm.rabi_control1)},
             {"rabi_control0_MHz_fit", units::rad_to_mhz(tr.rabi_rate[0])},
             {"rabi_control1_MHz_fit", units::rad_to_mhz(tr.rabi_rate[1])},
             {"mu1_minus", prm.mu1_minus},
             {"nu1_minus", prm.nu1_minus},
             {"t_pi_ns", tr.t_pi >= 0 ? json(tr.t_pi) : json(nullptr)}};
    return {{"cr_trace.csv", csv}, {"cr_report.json", dump(rep)}};
}

readout::ReadoutConfig readout_config(const ExperimentConfig& c) {
    json rj = c.device.contains("readout") ? c.device.at("readout") : json::object();
    if (!rj.contains("chain")) rj["chain"] = {{"stages", json::array({{{"gain_dB", 40.0}, {"T_N_K", 4.0}}})}};
    Params P{c.parameters};
    if (P.has("coupling")) rj["resonator"]["coupling"] = P.str("coupling", "reflection");
    for (const char* k : {"tau_rd_ns", "tau_s_ns", "fs_per_ns", "omega_if_MHz", "T1_us"})
        if (P.has(k)) rj[k] = P.num(k, 0.0);
    if (rj.contains("probe") && rj.at("probe").contains("duration_ns")) return readout::readout_from_json(rj);
    const double need = rj.value("tau_rd_ns", 500.0) + rj.value("tau_s_ns", 1000.0);
    rj["probe"]["duration_ns"] = std::max(need, 2000.0);
    return readout::readout_from_json(rj);
}

Artifacts run_readout(const ExperimentConfig& c) {
    Params P{c.parameters};
    auto rc = readout_config(c);
    if (P.has("snr_target")) rc.probe.amplitude = readout::amplitude_for_snr(rc, P.num("snr_target", 0.0));
    const long shots = P.integer("shots", 10000);
    auto s = readout::shot_histogram(rc, shots, io::stream_seed(c.seed, 2), P.integer("bins", 64));
    json rep = readout::shot_report(s);
    rep["assignment_error_formula"] = s.epsilon_sep;
    rep["assignment_error_measured"] = s.assignment_error;
    rep["gaussian_overlap_error"] = std::isfinite(s.snr) ? 0.5 * std::erfc(std::sqrt(2.0) * s.snr) : 0.0;
    if (P.has("snr_target")) rep["snr_target"] = P.num("snr_target", 0.0);
    if (std::isfinite(rc.T1_us)) {
        auto d = readout::readout_decay_error(rc.tau_rd, rc.tau_s, rc.T1_us);
        rep["decay_error"] = d.error;
        rep["decay_fidelity"] = d.fidelity;
        rep["tau_ro_ns"] = d.tau_ro;
    }
    rep["phasor_noise_sigma_V"] = readout::phasor_noise_sigma(rc);
    rep["readout"] = readout::readout_to_json(rc);
    return {{"shots.csv", readout::shots_csv(s)},
            {"histogram.csv", readout::histogram_csv(s)},
            {"readout_report.json", dump(rep)}};
}

Artifacts run_purcell(const ExperimentConfig& c) {
    Params P{c.parameters};
    const double g = units::mhz_to_rad(P.req("g_MHz"));
    const double kappa = units::mhz_to_rad(P.req("kappa_MHz"));
    const double wr = units::ghz_to_rad(P.num("omega_r_GHz", 7.0));
    const double QF = P.num("Q_F", 0.0);
    auto deltas = pulse::linspace(P.num("delta_min_MHz", -2000.0), P.num("delta_max_MHz", -200.0), P.integer("points", 91));
    std::string csv = "delta_MHz,gamma_dispersive_per_us,gamma_resonant_per_us,gamma_impedance_per_us,"
                      "gamma_filtered_per_us,dispersive_valid\n";
    for (double dm : deltas) {
        const double D = units::mhz_to_rad(dm);
        const double wq = wr + D;
        if (!(wq > 0.0)) throw Error(ErrorCode::config_error, "parameters.delta_min_MHz: qubit frequency must stay positive");
        const double imp = readout::purcell_rate(g, D, kappa, wq, wr, readout::PurcellForm::impedance) * 1e3;
        const double res = readout::purcell_rate(g, D, kappa, wq, wr, readout::PurcellForm::resonant) * 1e3;
        double disp = std::numeric_limits<double>::infinity(), filt = disp;
        if (D != 0.0) {
            disp = readout::purcell_rate(g, D, kappa, wq, wr) * 1e3;
            filt = QF > 0.0 ? readout::purcell_rate(g, D, kappa, wq, wr, readout::PurcellForm::dispersive, QF) * 1e3 : disp;
        }
        csv += io::fmt(dm) + ',' + io::fmt(disp) + ',' + io::fmt(res) + ',' + io::fmt(imp) + ',' + io::fmt(filt) + ',' +
               (readout::purcell_dispersive_valid(g, D) ? "1" : "0") + '\n';
    }
    return {{"purcell.csv", csv}};
}

Artifacts run_paramp(const ExperimentConfig& c) {
    Params P{c.parameters};
    const double G = P.has("gain_dB") ? std::pow(10.0, P.num("gain_dB", 0.0) / 10.0) : P.num("gain", 100.0);
    const std::string mode = P.str("mode", "phase_insensitive");
    readout::ParampMode m;
    if (mode == "phase_insensitive") m = readout::ParampMode::phase_insensitive;
    else if (mode == "phase_sensitive") m = readout::ParampMode::phase_sensitive;
    else throw Error(ErrorCode::config_error, "parameters.mode: unknown mode " + mode);
    const auto n = static_cast<std::size_t>(P.integer("samples", 100000));
    if (n < 2) throw Error(ErrorCode::config_error, "parameters.samples: need >= 2");
    const double phi = P.num("phi_rad", 0.0);
    auto in = readout::vacuum_ensemble(n, io::stream_seed(c.seed, 3));
    auto out = readout::paramp_transform(in, G, m, phi, io::stream_seed(c.seed, 4));
    auto var = [](const std::vector<cd>& v, bool re) {
        double mu = 0.0, acc = 0.0;
        for (auto z : v) mu += re ? z.real() : z.imag();
        mu /= double(v.size());
        for (auto z : v) acc += std::pow((re ? z.real() : z.imag()) - mu, 2);
        return acc / double(v.size() - 1);
    };
    const double vin = 0.5 * (var(in, true) + var(in, false));
    const double vout_x = var(out, true), vout_p = var(out, false);
    json rep{{"gain", G}, {"mode", mode}, {"samples", n}, {"input_variance", vin},
             {"output_variance_X", vout_x}, {"output_variance_P", vout_p}};
    if (m == readout::ParampMode::phase_insensitive) {
        const double added = 0.5 * (vout_x + vout_p) / G - vin;
        rep["added_noise_input_referred"] = added;
        rep["added_photons"] = 2.0 * added;
    } else {
        auto q = readout::phase_sensitive_gains(G);
        rep["amplified_gain"] = q.amplified;
        rep["deamplified_gain"] = q.deamplified;
        rep["gain_product"] = q.amplified * q.deamplified;
    }
    return {{"paramp_report.json", dump(rep)}};
}

} // namespace

// ---- validation ----

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
    std::vector<Diagnostic> out;
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end())
        out.push_back({"experiment", "unknown experiment '" + c.experiment + "'"});
    if (!c.device.is_object()) {
        out.push_back({"device", "expected an object"});
    } else {
        auto check_qubit = [&](const json& q, const std::string& path) {
            if (!q.is_object()) {
                out.push_back({path, "expected an object"});
                return;
            }
            for (const char* k : {"E_C_GHz", "E_J_GHz", "d", "gamma", "n_g"})
                if (q.contains(k) && !q.at(k).is_number()) out.push_back({path + "." + k, "expected a number"});
            try {
                qubit_from_json(q).validate();
            } catch (const Error& e) {
                std::string field = path;
                const std::string msg = e.what();
                if (msg.find("|d|") != std::string::npos) field += ".d";
                else if (msg.find("E_C") != std::string::npos) field += ".E_C_GHz";
                else if (msg.find("E_J") != std::string::npos) field += ".E_J_GHz";
                else if (msg.find("gamma") != std::string::npos) field += ".gamma";
                else if (msg.find("kind") != std::string::npos) field += ".kind";
                out.push_back({field, msg});
            } catch (const std::exception& e) {
                out.push_back({path, e.what()});
            }
        };
        if (c.device.contains("qubit")) check_qubit(c.device.at("qubit"), "device.qubit");
        if (c.device.contains("qubits")) {
            const auto& qs = c.device.at("qubits");
            if (!qs.is_array()) out.push_back({"device.qubits", "expected an array"});
            else
                for (size_t i = 0; i < qs.size(); ++i) check_qubit(qs[i], "device.qubits[" + std::to_string(i) + "]");
        }
        if (c.device.contains("readout")) {
            try {
                json rj = c.device.at("readout");
                if (!rj.contains("chain")) rj["chain"] = {{"stages", json::array({{{"gain", 1e4}, {"T_N_K", 4.0}}})}};
                readout::readout_from_json(rj);
            } catch (const std::exception& e) {
                out.push_back({"device.readout", e.what()});
            }
        }
    }
    if (!c.parameters.is_object()) {
        out.push_back({"parameters", "expected an object"});
        return out;
    }
    auto it = required_fields().find(c.experiment);
    if (it != required_fields().end()) {
        for (const auto& f : it->second) {
            const std::string path = "parameters." + f.name;
            if (!c.parameters.contains(f.name)) out.push_back({path, "required field missing"});
            else if (!c.parameters.at(f.name).is_number()) out.push_back({path, "expected a number"});
            else if (f.positive && !(c.parameters.at(f.name).get<double>() > 0.0)) out.push_back({path, "must be > 0"});
        }
    }
    for (auto& [k, v] : c.parameters.items()) {
        const bool unit_suffixed = k.ends_with("_GHz") || k.ends_with("_MHz") || k.ends_with("_ns") ||
                                   k.ends_with("_us") || k.ends_with("_K") || k.ends_with("_V");
        if (unit_suffixed && !v.is_number()) out.push_back({"parameters." + k, "expected a number"});
    }
    if (c.parameters.contains("shots") &&
        !(c.parameters.at("shots").is_number_integer() && c.parameters.at("shots").get<long>() > 0))
        out.push_back({"parameters.shots", "expected a positive integer"});
    return out;
}

// ---- running ----

Artifacts compute(const ExperimentConfig& c) {
    auto diags = validate(c);
    if (!diags.empty()) throw Error(ErrorCode::config_error, diags.front().path + ": " + diags.front().message);
    const std::string& e = c.experiment;
    try {
        if (e == "spectrum") return run_spectrum(c);
        if (e == "rabi") return run_rabi(c);
        if (e == "drag-scan") return run_drag(c);
        if (e == "t1" || e == "ramsey" || e == "hahn" || e == "cpmg") return run_decay(c);
        if (e == "iswap-chevron") return run_chevron(c);
        if (e == "cphase-cal") return run_cphase(c);
        if (e == "cr-scan") return run_cr(c);
        if (e == "readout-histogram") return run_readout(c);
        if (e == "purcell") return run_purcell(c);
        if (e == "paramp") return run_paramp(c);
    } catch (const Error& err) {
        std::string msg = err.what();
        const std::string prefix = std::string(to_string(err.code)) + ": ";
        if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
        throw Error(err.code, e + ": " + msg);
    }
    throw Error(ErrorCode::config_error, "experiment: unknown experiment '" + e + "'");
}

json manifest_to_json(const RunManifest& m) {
    return {{"config_hash", m.config_hash},
            {"tool_version", m.tool_version},
            {"seed", m.seed},
            {"wall_time_s", m.wall_time_s},
            {"files", m.files}};
}

RunManifest run(const ExperimentConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Artifacts art = compute(c);
    RunManifest m;
    m.config_hash = io::sha256_hex(config_to_json(c).dump());
    m.seed = c.seed;
    std::vector<std::filesystem::path> written;
    try {
        for (const auto& [name, content] : art) {
            io::atomic_write(c.output / name, content);
            written.push_back(c.output / name);
            m.files.push_back(name);
        }
        m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        io::atomic_write(c.output / "run_manifest.json", dump(manifest_to_json(m)));
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) std::filesystem::remove(p, ec);
        throw;
    }
    return m;
}

} // namespace sqsim::exp

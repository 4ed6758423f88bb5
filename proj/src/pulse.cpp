// pulse.cpp — envelopes, drive Hamiltonians and the fixed-step integrator

#include "sqsim/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqsim/linalg.hpp"

namespace sqsim::pulse {

// ---- envelopes ----

void Envelope::validate() const {
    if (kind == EnvelopeKind::samples) {
        if (samples.size() < 2) throw Error(ErrorCode::invalid_params, "sampled envelope needs >= 2 points");
        for (size_t i = 1; i < samples.size(); ++i)
            if (!(samples[i].first > samples[i - 1].first))
                throw Error(ErrorCode::invalid_params, "sample times must be strictly increasing");
        for (auto& [t, v] : samples)
            if (std::abs(v) > 1.0 + 1e-12) throw Error(ErrorCode::invalid_params, "|s(t)| must not exceed 1");
        return;
    }
    if (!(duration > 0)) throw Error(ErrorCode::invalid_params, "duration must be positive");
    if (kind == EnvelopeKind::gaussian && !(sigma > 0)) throw Error(ErrorCode::invalid_params, "sigma must be positive");
    if (kind == EnvelopeKind::flattop && !(rise > 0 && 2 * rise <= duration))
        throw Error(ErrorCode::invalid_params, "flattop rise must fit twice in the duration");
}

namespace {

double sample_interp(const std::vector<std::pair<double, double>>& v, double t) {
    if (t < v.front().first || t > v.back().first) return 0.0;
    auto it = std::upper_bound(v.begin(), v.end(), t, [](double x, const auto& p) { return x < p.first; });
    if (it == v.end()) return v.back().second;
    if (it == v.begin()) return v.front().second;
    auto lo = it - 1;
    double w = (t - lo->first) / (it->first - lo->first);
    return lo->second + w * (it->second - lo->second);
}

// central differences at the nodes, one-sided at the ends
std::vector<double> node_derivatives(const std::vector<std::pair<double, double>>& v) {
    const size_t n = v.size();
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) {
        if (i == 0) d[i] = (v[1].second - v[0].second) / (v[1].first - v[0].first);
        else if (i == n - 1) d[i] = (v[n - 1].second - v[n - 2].second) / (v[n - 1].first - v[n - 2].first);
        else d[i] = (v[i + 1].second - v[i - 1].second) / (v[i + 1].first - v[i - 1].first);
    }
    return d;
}

} // namespace

double Envelope::s(double t) const {
    if (kind == EnvelopeKind::samples) return sample_interp(samples, t);
    if (t < 0 || t > duration) return 0.0;
    switch (kind) {
    case EnvelopeKind::gaussian: {
        double c = 0.5 * duration;
        double g0 = std::exp(-c * c / (2 * sigma * sigma));
        double g = std::exp(-(t - c) * (t - c) / (2 * sigma * sigma));
        return (g - g0) / (1.0 - g0);
    }
    case EnvelopeKind::cosine:
        return 0.5 * (1.0 - std::cos(kTwoPi * t / duration));
    case EnvelopeKind::flattop:
        if (t < rise) return 0.5 * (1.0 - std::cos(kPi * t / rise));
        if (t > duration - rise) return 0.5 * (1.0 - std::cos(kPi * (duration - t) / rise));
        return 1.0;
    default:
        return 0.0;
    }
}

double Envelope::sdot(double t) const {
    if (kind == EnvelopeKind::samples) {
        if (t < samples.front().first || t > samples.back().first) return 0.0;
        auto d = node_derivatives(samples);
        std::vector<std::pair<double, double>> dv(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) dv[i] = {samples[i].first, d[i]};
        return sample_interp(dv, t);
    }
    if (t < 0 || t > duration) return 0.0;
    switch (kind) {
    case EnvelopeKind::gaussian: {
        double c = 0.5 * duration;
        double g0 = std::exp(-c * c / (2 * sigma * sigma));
        double g = std::exp(-(t - c) * (t - c) / (2 * sigma * sigma));
        return -(t - c) / (sigma * sigma) * g / (1.0 - g0);
    }
    case EnvelopeKind::cosine:
        return 0.5 * kTwoPi / duration * std::sin(kTwoPi * t / duration);
    case EnvelopeKind::flattop:
        if (t < rise) return 0.5 * kPi / rise * std::sin(kPi * t / rise);
        if (t > duration - rise) return -0.5 * kPi / rise * std::sin(kPi * (duration - t) / rise);
        return 0.0;
    default:
        return 0.0;
    }
}

double Envelope::integral(double t0, double t1, double dt) const {
    if (t1 <= t0) return 0.0;
    int n = std::max(1, int(std::ceil((t1 - t0) / dt - 1e-12)));
    double h = (t1 - t0) / n, acc = 0.0;
    for (int k = 0; k < n; ++k) {
        double a = t0 + k * h;
        acc += h / 6.0 * (s(a) + 4.0 * s(a + 0.5 * h) + s(a + h));
    }
    return acc;
}

double DrivePulse::I() const { return std::cos(phase); }
double DrivePulse::Q() const { return std::sin(phase); }

cd complex_envelope(const DrivePulse& p, double t, double alpha) {
    double sv = p.env.s(t);
    double q = 0.0;
    if (p.drag_lambda != 0.0) {
        if (alpha == 0.0) throw Error(ErrorCode::invalid_params, "DRAG needs a non-zero anharmonicity");
        // quadrature sign matched to the rotation-axis convention of this frame
        q = -p.drag_lambda * p.env.sdot(t) / alpha;
    }
    cd e = p.env.amplitude * cd(sv, q);
    if (p.drag_df != 0.0) e *= std::exp(kI * kTwoPi * p.drag_df * t);
    return e * std::exp(kI * (p.delta_omega * t + p.phase));
}

Mat rwa_drive_hamiltonian(const DrivePulse& p, double omega_coupling, double t, double alpha) {
    cd e = complex_envelope(p, t, alpha);
    Mat H = Mat::Zero(2, 2);
    H(0, 1) = -0.5 * omega_coupling * std::conj(e);
    H(1, 0) = -0.5 * omega_coupling * e;
    return H;
}

double rabi_angle(const DrivePulse& p, double omega_coupling, double t, double dt) {
    return -omega_coupling * p.env.amplitude * p.env.integral(0.0, t, dt);
}

Waveform drag_waveform(const DrivePulse& p, double alpha, double dt) {
    if (alpha == 0.0) throw Error(ErrorCode::invalid_params, "alpha must be non-zero");
    p.env.validate();
    Waveform w;
    double T = p.env.kind == EnvelopeKind::samples ? p.env.samples.back().first : p.env.duration;
    double t0 = p.env.kind == EnvelopeKind::samples ? p.env.samples.front().first : 0.0;
    int n = int(std::floor((T - t0) / dt + 1e-9)) + 1;
    for (int k = 0; k < n; ++k) {
        double t = t0 + k * dt;
        cd z(p.env.s(t), p.drag_lambda * p.env.sdot(t) / alpha);
        if (p.drag_df != 0.0) z *= std::exp(kI * kTwoPi * p.drag_df * t);
        w.t.push_back(t);
        w.I.push_back(z.real());
        w.Q.push_back(z.imag());
    }
    return w;
}

Mat build_drive_hamiltonian_multilevel(double omega_q, double alpha, int levels, const DrivePulse& p,
                                       double omega_coupling, double t) {
    if (levels < 2) throw Error(ErrorCode::invalid_truncation, "need at least 2 levels");
    Mat a = la::destroy(levels);
    Mat H = Mat::Zero(levels, levels);
    for (int k = 0; k < levels; ++k) H(k, k) = omega_q * k + 0.5 * alpha * k * (k - 1);
    DrivePulse base = p;
    base.delta_omega = 0.0;
    cd e = complex_envelope(base, t, alpha);
    double wd = omega_q - p.delta_omega;
    double vd = e.imag() * std::cos(wd * t) - e.real() * std::sin(wd * t);
    H += omega_coupling * vd * (kI * (a - a.adjoint()));
    return H;
}

Mat rwa_multilevel_hamiltonian(double omega_q, double alpha, int levels, const DrivePulse& p,
                               double omega_coupling, double t) {
    if (levels < 2) throw Error(ErrorCode::invalid_truncation, "need at least 2 levels");
    (void)omega_q;
    Mat a = la::destroy(levels);
    Mat H = Mat::Zero(levels, levels);
    for (int k = 0; k < levels; ++k) H(k, k) = p.delta_omega * k + 0.5 * alpha * k * (k - 1);
    DrivePulse base = p;
    base.delta_omega = 0.0;
    cd e = complex_envelope(base, t, alpha);
    H += -0.5 * omega_coupling * (std::conj(e) * a + e * a.adjoint());
    return H;
}

HSource to_rotating_frame(HSource H_lab, std::vector<double> frame) {
    return [H_lab = std::move(H_lab), frame = std::move(frame)](double t) {
        Mat H = H_lab(t);
        const int n = int(H.rows());
        if (int(frame.size()) != n) throw Error(ErrorCode::invalid_params, "frame size mismatch");
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (j != k) H(j, k) *= std::exp(kI * (frame[j] - frame[k]) * t);
        for (int j = 0; j < n; ++j) H(j, j) -= frame[j];
        return H;
    };
}

// ---- integrator ----

namespace {

// bound on the spectral radius of H with its trace removed
double spectral_bound(const Mat& H) {
    const int n = int(H.rows());
    cd tr = H.trace() / double(n);
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(H(i, j) - (i == j ? tr : cd(0)));
        best = std::max(best, row);
    }
    return best;
}

void check_finite(const Mat& H) {
    if (!H.allFinite()) throw Error(ErrorCode::numeric_failure, "Hamiltonian contains NaN/Inf");
}

constexpr double kAutoPhase = 0.02;                // rho*dt per substep when chosen automatically
constexpr double kRulePhase = kTwoPi / 50.0;       // dt <= 1/(50 f_max)

} // namespace

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
    return v;
}

EvolutionResult evolve(const HSource& H, const Vec& psi0, const std::vector<double>& t_grid,
                       const EvolveOptions& opt) {
    if (t_grid.size() < 2) throw Error(ErrorCode::invalid_grid, "time grid needs >= 2 points");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorCode::invalid_grid, "time grid must increase");
    EvolutionResult res;
    const int dim = int(psi0.size());
    if (!opt.propagator && std::abs(psi0.norm() - 1.0) > 1e-10)
        throw Error(ErrorCode::invalid_params, "initial state must be normalized");
    Mat X = opt.propagator ? Mat(Mat::Identity(dim, dim)) : Mat(psi0);

    auto leak = [&](const Mat& x) {
        if (opt.computational_dim <= 0 || opt.propagator) return 0.0;
        double p = 0.0;
        for (int k = 0; k < std::min<int>(opt.computational_dim, dim); ++k) p += std::norm(x(k, 0));
        return std::clamp(1.0 - p, 0.0, 1.0);
    };
    auto record = [&](double t) {
        res.times.push_back(t);
        if (!opt.propagator) {
            if (opt.store_states) res.states.push_back(X.col(0));
            res.leakage.push_back(leak(X));
        }
    };
    record(t_grid[0]);
    for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double ta = t_grid[i], tb = t_grid[i + 1], span = tb - ta;
        Mat H0 = H(ta);
        check_finite(H0);
        int n = opt.substeps;
        if (n <= 0) {
            double rho = std::max(spectral_bound(H0), spectral_bound(H(0.5 * (ta + tb))));
            n = std::max(1, int(std::ceil(rho * span / kAutoPhase)));
        }
        const double dt = span / n;
        for (int k = 0; k < n; ++k) {
            const double t = ta + k * dt;
            if (opt.stepper == Stepper::rk4) {
                Mat h1 = k == 0 ? H0 : H(t);
                Mat h2 = H(t + 0.5 * dt);
                Mat h3 = H(t + dt);
                check_finite(h2);
                check_finite(h3);
                if (opt.substeps > 0 && spectral_bound(h2) * dt > kRulePhase)
                    throw Error(ErrorCode::invalid_grid, "step exceeds 1/(50 f_max)");
                Mat k1 = -kI * (h1 * X);
                Mat k2 = -kI * (h2 * (X + 0.5 * dt * k1));
                Mat k3 = -kI * (h2 * (X + 0.5 * dt * k2));
                Mat k4 = -kI * (h3 * (X + dt * k3));
                X += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            } else {
                Mat hm = H(t + 0.5 * dt);
                check_finite(hm);
                if (opt.substeps > 0 && spectral_bound(hm) * dt > kRulePhase)
                    throw Error(ErrorCode::invalid_grid, "step exceeds 1/(50 f_max)");
                X = la::expm_herm(hm, dt) * X;
            }
        }
        if (!X.allFinite()) throw Error(ErrorCode::numeric_failure, "state diverged");
        record(tb);
    }
    if (opt.propagator) res.propagator = X;
    else res.final_state = X.col(0);
    return res;
}

// ---- schedules ----

double PulseSchedule::channel_end(const std::string& name) const {
    auto it = channels.find(name);
    if (it == channels.end()) return 0.0;
    double end = 0.0;
    for (auto& p : it->second.pulses) end = std::max(end, p.t0 + p.env.duration);
    for (auto& f : it->second.flux) end = std::max(end, f.t0 + f.duration);
    return end;
}

void PulseSchedule::add_drive(const std::string& name, int qubit, DrivePulse p, double gap) {
    p.env.validate();
    auto& ch = channels[name];
    ch.kind = ChannelKind::drive;
    ch.qubit = qubit;
    p.t0 = channel_end(name) + gap;
    // frame angle phi0 maps onto drive phase -phi0
    p.phase -= phase_frames[qubit];
    ch.pulses.push_back(p);
    total_duration = std::max(total_duration, p.t0 + p.env.duration);
}

void PulseSchedule::add_flux(const std::string& name, int qubit, FluxPulse f) {
    auto& ch = channels[name];
    ch.kind = ChannelKind::flux;
    ch.qubit = qubit;
    ch.flux.push_back(f);
    total_duration = std::max(total_duration, f.t0 + f.duration);
}

void PulseSchedule::virtual_z(int qubit, double theta) { phase_frames[qubit] += theta; }

void PulseSchedule::validate() const {
    for (auto& [name, ch] : channels) {
        std::vector<std::pair<double, double>> spans;
        for (auto& p : ch.pulses) spans.push_back({p.t0, p.t0 + p.env.duration});
        for (auto& f : ch.flux) spans.push_back({f.t0, f.t0 + f.duration});
        std::sort(spans.begin(), spans.end());
        for (size_t i = 1; i < spans.size(); ++i)
            if (spans[i].first < spans[i - 1].second - 1e-9)
                throw Error(ErrorCode::invalid_params, "overlapping pulses on channel " + name);
        for (auto& s : spans)
            if (s.second > total_duration + 1e-9)
                throw Error(ErrorCode::invalid_params, "total_duration shorter than channel " + name);
    }
}

namespace {

const char* kind_name(EnvelopeKind k) {
    switch (k) {
    case EnvelopeKind::gaussian: return "gaussian";
    case EnvelopeKind::cosine: return "cosine";
    case EnvelopeKind::flattop: return "flattop";
    case EnvelopeKind::samples: return "samples";
    }
    return "gaussian";
}

EnvelopeKind kind_from(const std::string& s) {
    if (s == "gaussian") return EnvelopeKind::gaussian;
    if (s == "cosine") return EnvelopeKind::cosine;
    if (s == "flattop") return EnvelopeKind::flattop;
    if (s == "samples") return EnvelopeKind::samples;
    throw Error(ErrorCode::config_error, "unknown envelope kind " + s);
}

} // namespace

nlohmann::json schedule_to_json(const PulseSchedule& s) {
    using nlohmann::json;
    json j;
    j["total_duration_ns"] = s.total_duration;
    json frames = json::object();
    for (auto& [q, a] : s.phase_frames) frames[std::to_string(q)] = a;
    j["phase_frames_rad"] = frames;
    json chans = json::object();
    for (auto& [name, ch] : s.channels) {
        json c;
        c["kind"] = ch.kind == ChannelKind::drive ? "drive" : "flux";
        c["qubit"] = ch.qubit;
        json pulses = json::array();
        for (auto& p : ch.pulses) {
            json e;
            e["kind"] = kind_name(p.env.kind);
            e["amplitude_V"] = p.env.amplitude;
            e["sigma_ns"] = p.env.sigma;
            e["rise_ns"] = p.env.rise;
            e["duration_ns"] = p.env.duration;
            if (p.env.kind == EnvelopeKind::samples) e["samples_t_ns_value"] = p.env.samples;
            pulses.push_back({{"t0_ns", p.t0},
                              {"envelope", e},
                              {"detuning_MHz", units::rad_to_mhz(p.delta_omega)},
                              {"phase_rad", p.phase},
                              {"drag_lambda", p.drag_lambda},
                              {"drag_df_MHz", p.drag_df * 1e3}});
        }
        c["pulses"] = pulses;
        json flux = json::array();
        for (auto& f : ch.flux)
            flux.push_back({{"t0_ns", f.t0}, {"duration_ns", f.duration}, {"phi_e_rad", f.samples}});
        c["flux"] = flux;
        chans[name] = c;
    }
    j["channels"] = chans;
    return j;
}

PulseSchedule schedule_from_json(const nlohmann::json& j) {
    PulseSchedule s;
    s.total_duration = j.at("total_duration_ns").get<double>();
    if (j.contains("phase_frames_rad"))
        for (auto& [k, v] : j["phase_frames_rad"].items()) s.phase_frames[std::stoi(k)] = v.get<double>();
    for (auto& [name, c] : j.at("channels").items()) {
        Channel ch;
        ch.kind = c.at("kind").get<std::string>() == "flux" ? ChannelKind::flux : ChannelKind::drive;
        ch.qubit = c.at("qubit").get<int>();
        for (auto& p : c.value("pulses", nlohmann::json::array())) {
            DrivePulse d;
            auto& e = p.at("envelope");
            d.env.kind = kind_from(e.at("kind").get<std::string>());
            d.env.amplitude = e.value("amplitude_V", 1.0);
            d.env.sigma = e.value("sigma_ns", 10.0);
            d.env.rise = e.value("rise_ns", 5.0);
            d.env.duration = e.value("duration_ns", 40.0);
            if (e.contains("samples_t_ns_value"))
                d.env.samples = e["samples_t_ns_value"].get<std::vector<std::pair<double, double>>>();
            d.t0 = p.at("t0_ns").get<double>();
            d.delta_omega = units::mhz_to_rad(p.value("detuning_MHz", 0.0));
            d.phase = p.value("phase_rad", 0.0);
            d.drag_lambda = p.value("drag_lambda", 0.0);
            d.drag_df = p.value("drag_df_MHz", 0.0) * 1e-3;
            ch.pulses.push_back(d);
        }
        for (auto& f : c.value("flux", nlohmann::json::array())) {
            FluxPulse fp;
            fp.t0 = f.at("t0_ns").get<double>();
            fp.duration = f.at("duration_ns").get<double>();
            fp.samples = f.at("phi_e_rad").get<std::vector<double>>();
            ch.flux.push_back(fp);
        }
        s.channels[name] = ch;
    }
    s.validate();
    return s;
}

std::string waveform_csv(const PulseSchedule& s, const std::string& channel, double alpha, double dt) {
    auto it = s.channels.find(channel);
    if (it == s.channels.end()) throw Error(ErrorCode::invalid_params, "no channel " + channel);
    std::ostringstream os;
    os.precision(12);
    os << "t_ns,I,Q\n";
    int n = int(std::floor(s.total_duration / dt + 1e-9)) + 1;
    for (int k = 0; k < n; ++k) {
        double t = k * dt;
        cd z = 0.0;
        for (auto& p : it->second.pulses)
            if (t >= p.t0 && t <= p.t0 + p.env.duration) z += complex_envelope(p, t - p.t0, alpha);
        os << t << ',' << z.real() << ',' << z.imag() << '\n';
    }
    return os.str();
}

} // namespace sqsim::pulse

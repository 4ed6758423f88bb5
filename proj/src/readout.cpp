// readout.cpp — dispersive readout chain: resonator response, signal synthesis, demodulation, shot statistics

#include "sqsim/readout.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sqsim/io.hpp"

namespace sqsim::readout {

// ---- resonator ----

double ResonatorParams::omega_state(int state) const {
    if (state != 0 && state != 1) throw Error(ErrorCode::invalid_params, "qubit state must be 0 or 1");
    return state == 0 ? omega_r - chi : omega_r + chi;
}

void ResonatorParams::validate() const {
    if (!(kappa > 0.0)) throw Error(ErrorCode::invalid_params, "resonator: kappa must be > 0");
    if (!(omega_r > 0.0)) throw Error(ErrorCode::invalid_params, "resonator: omega_r must be > 0");
    if (!std::isfinite(chi)) throw Error(ErrorCode::invalid_params, "resonator: chi must be finite");
}

cd resonator_response(const ResonatorParams& r, int qubit_state, double omega) {
    r.validate();
    const double x = omega - r.omega_state(qubit_state);
    const double k = 0.5 * r.kappa;
    if (r.coupling == Coupling::reflection) return (kI * x + k) / (kI * x - k);
    return k / (k - kI * x);
}

cd resonator_transient(const ResonatorParams& r, int qubit_state, double omega, double t) {
    if (t <= 0.0) return r.coupling == Coupling::reflection ? cd(1.0, 0.0) : cd(0.0, 0.0);
    const cd ss = resonator_response(r, qubit_state, omega);
    const double x = omega - r.omega_state(qubit_state);
    const cd ring = 1.0 - std::exp(-(0.5 * r.kappa - kI * x) * t);
    if (r.coupling == Coupling::reflection) return 1.0 + (ss - 1.0) * ring;
    return ss * ring;
}

double optimal_probe_frequency(const ResonatorParams& r) {
    return 0.5 * (r.omega_state(0) + r.omega_state(1));
}

double state_separation(const ResonatorParams& r, double omega) {
    return std::abs(resonator_response(r, 1, omega) - resonator_response(r, 0, omega));
}

// ---- amplifier chain ----

void AmplifierChain::validate() const {
    for (const auto& s : stages) {
        if (!(s.gain >= 1.0)) throw Error(ErrorCode::invalid_params, "chain: stage gain must be >= 1");
        if (!(s.T_N >= 0.0)) throw Error(ErrorCode::invalid_params, "chain: noise temperature must be >= 0");
    }
    if (paramp && !(paramp->gain >= 1.0)) throw Error(ErrorCode::invalid_params, "chain: paramp gain must be >= 1");
}

double AmplifierChain::total_gain() const {
    double g = 1.0;
    for (const auto& s : stages) g *= s.gain;
    return g;
}

double system_noise_temperature(const AmplifierChain& chain) {
    chain.validate();
    if (chain.stages.empty()) throw Error(ErrorCode::invalid_params, "chain: no stages");
    double T = 0.0, G = 1.0;
    for (const auto& s : chain.stages) {
        T += s.T_N / G;
        G *= s.gain;
    }
    return T;
}

Efficiency quantum_efficiency(double omega_rf, double T_sys) {
    if (!(T_sys > 0.0)) throw Error(ErrorCode::invalid_params, "efficiency: T_sys must be > 0");
    Efficiency e;
    e.eta = units::rad_ns_to_kelvin(omega_rf) / T_sys;
    e.exceeds_unity = e.eta >= 1.0;
    return e;
}

namespace {

double chain_tsys(const AmplifierChain& chain) {
    return chain.stages.empty() ? 0.0 : system_noise_temperature(chain);
}

// RF per-sample noise variance over the Nyquist band fs/2 (fs in samples/ns), volts^2
double rf_noise_variance(double T_sys, double R, double fs) {
    return units::kB * T_sys * R * fs * 1e9 * 0.5;
}

} // namespace

// ---- synthesis and demodulation ----

RFRecord synthesize_readout_signal(const ResonatorParams& r, const Probe& probe, int qubit_state,
                                   const AmplifierChain& chain, double fs, std::uint64_t seed,
                                   const SynthesisOptions& opts) {
    r.validate();
    chain.validate();
    if (!(fs > 0.0) || !(probe.duration > 0.0)) throw Error(ErrorCode::invalid_params, "synthesis: need fs, duration > 0");
    const double w = probe.omega > 0.0 ? probe.omega : optimal_probe_frequency(r);
    if (!(fs > w / kPi)) throw Error(ErrorCode::invalid_params, "synthesis: fs below twice the carrier frequency");
    RFRecord rec;
    rec.fs = fs;
    rec.omega_ro = w;
    const std::size_t N = static_cast<std::size_t>(std::llround(probe.duration * fs));
    rec.s.resize(N);
    const double gv = std::sqrt(chain.total_gain());
    const double sigma = std::sqrt(rf_noise_variance(chain_tsys(chain), opts.R_ohm, fs));
    auto rng = io::make_rng(seed, 0);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (std::size_t n = 0; n < N; ++n) {
        const double t = double(n) / fs;
        const int st = (qubit_state == 1 && t >= opts.decay_time) ? 0 : qubit_state;
        const cd S = resonator_transient(r, st, w, t);
        double v = probe.amplitude * std::real(S * std::polar(1.0, w * t));
        if (sigma > 0.0) v += sigma * nd(rng);
        rec.s[n] = gv * v;
    }
    return rec;
}

IQRecord analog_mix(const RFRecord& rf, double omega_lo, double A_LO, int lowpass) {
    if (!(rf.fs > 0.0) || rf.s.size() < 4) throw Error(ErrorCode::invalid_params, "mix: empty record");
    const double dt = 1.0 / rf.fs;
    const double w_if = rf.omega_ro - omega_lo;
    const double w_sum = rf.omega_ro + omega_lo;
    auto boxcar = [](int L, double theta) {
        double den = L * std::sin(0.5 * theta);
        return std::abs(den) < 1e-300 ? 1.0 : std::sin(0.5 * L * theta) / den;
    };
    int L = lowpass;
    if (L <= 0) {
        double best = 2.0;
        for (int c = 1; c <= 64; ++c) {
            if (std::abs(boxcar(c, w_if * dt)) < 0.5) break;
            double v = std::abs(boxcar(c, w_sum * dt));
            if (v < best - 1e-12) {
                best = v;
                L = c;
            }
        }
    }
    if (L < 1 || static_cast<std::size_t>(L) >= rf.s.size())
        throw Error(ErrorCode::invalid_params, "mix: invalid low-pass length");
    const double g_if = boxcar(L, w_if * dt);

    const std::size_t N = rf.s.size();
    std::vector<double> mi(N), mq(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double t = double(n) * dt;
        mi[n] = 0.5 * rf.s[n] * 0.5 * A_LO * std::cos(omega_lo * t);
        mq[n] = 0.5 * rf.s[n] * -0.5 * A_LO * std::sin(omega_lo * t);
    }
    IQRecord rec;
    rec.fs = rf.fs;
    rec.omega_if = w_if;
    rec.t0 = 0.5 * (L - 1) * dt;
    const std::size_t M = N - static_cast<std::size_t>(L) + 1;
    rec.I.resize(M);
    rec.Q.resize(M);
    double si = 0.0, sq = 0.0;
    for (int k = 0; k < L; ++k) {
        si += mi[k];
        sq += mq[k];
    }
    for (std::size_t m = 0; m < M; ++m) {
        if (m > 0) {
            si += mi[m + L - 1] - mi[m - 1];
            sq += mq[m + L - 1] - mq[m - 1];
        }
        rec.I[m] = si / (L * g_if);
        rec.Q[m] = sq / (L * g_if);
    }
    rec.n1 = 0;
    rec.n2 = M - 1;
    return rec;
}

cd heterodyne_demodulate(IQRecord& rec) {
    if (rec.I.size() != rec.Q.size() || rec.I.empty()) throw Error(ErrorCode::invalid_params, "demod: empty record");
    if (!(rec.n1 <= rec.n2) || rec.n2 >= rec.I.size())
        throw Error(ErrorCode::insufficient_window, "demod: window outside the record");
    if (!(rec.fs > std::abs(rec.omega_if) / kPi))
        throw Error(ErrorCode::invalid_params, "demod: sampling rate below twice the IF");
    const std::size_t M = rec.n2 - rec.n1 + 1;
    if (rec.omega_if != 0.0 && double(M) / rec.fs < 2.0 * kTwoPi / std::abs(rec.omega_if))
        throw Error(ErrorCode::insufficient_window, "demod: window shorter than two IF periods");
    cd acc{0.0, 0.0};
    for (std::size_t n = rec.n1; n <= rec.n2; ++n) {
        const double t = rec.t0 + double(n) / rec.fs;
        acc += cd(rec.I[n], rec.Q[n]) * std::polar(1.0, -rec.omega_if * t);
    }
    rec.phasor = acc / double(M);
    return rec.phasor;
}

// ---- IF-level readout ----

void ReadoutConfig::validate() const {
    resonator.validate();
    chain.validate();
    if (!(fs > 0.0) || !(tau_s > 0.0) || tau_rd < 0.0 || !(probe.amplitude >= 0.0))
        throw Error(ErrorCode::invalid_params, "readout: need fs, tau_s > 0, tau_rd >= 0, amplitude >= 0");
    if (!(fs > std::abs(omega_if) / kPi)) throw Error(ErrorCode::invalid_params, "readout: fs below twice the IF");
    if (probe.duration < tau_rd + tau_s) throw Error(ErrorCode::insufficient_window, "readout: probe shorter than window");
    if (n2() < n1()) throw Error(ErrorCode::insufficient_window, "readout: empty window");
    if (omega_if != 0.0 && tau_s < 2.0 * kTwoPi / std::abs(omega_if))
        throw Error(ErrorCode::insufficient_window, "readout: window shorter than two IF periods");
    if (!(T1_us > 0.0)) throw Error(ErrorCode::invalid_rates, "readout: T1 must be > 0");
}

double ReadoutConfig::probe_omega() const {
    return probe.omega > 0.0 ? probe.omega : optimal_probe_frequency(resonator);
}

std::size_t ReadoutConfig::n1() const { return static_cast<std::size_t>(std::ceil(tau_rd * fs - 1e-9)); }

std::size_t ReadoutConfig::n2() const {
    const auto M = static_cast<std::size_t>(std::llround(tau_s * fs));
    return n1() + std::max<std::size_t>(M, 1) - 1;
}

double phasor_noise_sigma(const ReadoutConfig& c) {
    c.validate();
    const double s_rf2 = rf_noise_variance(chain_tsys(c.chain), c.R_ohm, c.fs);
    const double s_if2 = c.chain.total_gain() * std::pow(0.25 * c.A_LO, 2) * s_rf2 * 0.5;
    const double M = double(c.n2() - c.n1() + 1);
    return std::sqrt(s_if2 / M);
}

namespace {

struct IFModel {
    std::vector<cd> cum0, cum1; // prefix sums of the window transients, size M + 1
    double scale{0.0};          // sqrt(G) A A_LO / 8
    double sigma_z{0.0};        // per quadrature, demodulated
};

IFModel if_model(const ReadoutConfig& c) {
    IFModel m;
    const double w = c.probe_omega();
    m.cum0.push_back(0.0);
    m.cum1.push_back(0.0);
    for (std::size_t n = c.n1(); n <= c.n2(); ++n) {
        const double t = double(n) / c.fs;
        m.cum0.push_back(m.cum0.back() + resonator_transient(c.resonator, 0, w, t));
        m.cum1.push_back(m.cum1.back() + resonator_transient(c.resonator, 1, w, t));
    }
    m.scale = std::sqrt(c.chain.total_gain()) * c.probe.amplitude * c.A_LO / 8.0;
    m.sigma_z = phasor_noise_sigma(c);
    return m;
}

// one demodulated shot; the window sum of white isotropic IF noise rotated by the
// demodulation phase is itself complex Gaussian with variance sigma_if^2 / M per quadrature
cd draw_shot(const ReadoutConfig& c, const IFModel& m, int state, std::mt19937_64& rng, double decay_time) {
    const std::size_t M = m.cum0.size() - 1;
    std::size_t k = 0;
    if (state == 1 && !std::isfinite(decay_time)) {
        k = M;
    } else if (state == 1) {
        const double nd_ = std::ceil(decay_time * c.fs - 1e-9);
        k = nd_ <= double(c.n1()) ? 0 : std::min<std::size_t>(M, static_cast<std::size_t>(nd_) - c.n1());
    }
    cd z = m.scale * (m.cum1[k] + (m.cum0[M] - m.cum0[k])) / double(M);
    if (m.sigma_z > 0.0) {
        std::normal_distribution<double> nd(0.0, 1.0);
        const double a = nd(rng), b = nd(rng);
        z += m.sigma_z * cd(a, b);
    }
    return z;
}

} // namespace

IQRecord synthesize_if_record(const ReadoutConfig& c, int qubit_state, std::uint64_t seed, double decay_time) {
    c.validate();
    const double w = c.probe_omega();
    const auto N = static_cast<std::size_t>(std::llround(c.probe.duration * c.fs));
    IQRecord rec;
    rec.fs = c.fs;
    rec.omega_if = c.omega_if;
    rec.I.resize(N);
    rec.Q.resize(N);
    rec.n1 = c.n1();
    rec.n2 = std::min(c.n2(), N - 1);
    const double scale = std::sqrt(c.chain.total_gain()) * c.probe.amplitude * c.A_LO / 8.0;
    const double s_rf2 = rf_noise_variance(chain_tsys(c.chain), c.R_ohm, c.fs);
    const double sigma_if = std::sqrt(c.chain.total_gain() * std::pow(0.25 * c.A_LO, 2) * s_rf2 * 0.5);
    auto rng = io::make_rng(seed, 0);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (std::size_t n = 0; n < N; ++n) {
        const double t = double(n) / c.fs;
        const int st = (qubit_state == 1 && t >= decay_time) ? 0 : qubit_state;
        cd z = scale * resonator_transient(c.resonator, st, w, t) * std::polar(1.0, c.omega_if * t);
        if (sigma_if > 0.0) {
            const double a = nd(rng), b = nd(rng);
            z += sigma_if * cd(a, b);
        }
        rec.I[n] = z.real();
        rec.Q[n] = z.imag();
    }
    return rec;
}

double amplitude_for_snr(const ReadoutConfig& c, double snr) {
    if (!(snr > 0.0)) throw Error(ErrorCode::invalid_params, "amplitude_for_snr: snr must be > 0");
    ReadoutConfig unit = c;
    unit.probe.amplitude = 1.0;
    IFModel m = if_model(unit);
    const std::size_t M = m.cum0.size() - 1;
    const double sep = m.scale * std::abs(m.cum1[M] - m.cum0[M]) / double(M);
    const double sigma = phasor_noise_sigma(unit);
    if (!(sep > 0.0) || !(sigma > 0.0)) throw Error(ErrorCode::invalid_regime, "amplitude_for_snr: no separation or no noise");
    return snr * 4.0 * sigma / sep;
}

// ---- statistics ----

double separation_error(double snr) {
    if (snr < 0.0) throw Error(ErrorCode::invalid_params, "separation_error: snr must be >= 0");
    return 0.5 * std::erfc(0.5 * snr);
}

ShotStatistics shot_statistics(std::vector<cd> p0, std::vector<cd> p1, int bins) {
    if (p0.size() < 2 || p1.size() < 2) throw Error(ErrorCode::statistics_error, "statistics: need >= 2 shots per state");
    ShotStatistics s;
    s.phasors0 = std::move(p0);
    s.phasors1 = std::move(p1);
    auto mean = [](const std::vector<cd>& v) {
        cd a{0.0, 0.0};
        for (auto z : v) a += z;
        return a / double(v.size());
    };
    s.mu0 = mean(s.phasors0);
    s.mu1 = mean(s.phasors1);
    s.separation = std::abs(s.mu1 - s.mu0);
    if (!(s.separation > 0.0)) throw Error(ErrorCode::statistics_error, "statistics: coincident cluster means");
    const cd u = (s.mu1 - s.mu0) / s.separation;
    const cd mid = 0.5 * (s.mu0 + s.mu1);
    auto proj = [&](cd z) { return std::real(std::conj(u) * (z - mid)); };
    auto width = [&](const std::vector<cd>& v, cd mu) {
        double m = proj(mu), acc = 0.0;
        for (auto z : v) acc += std::pow(proj(z) - m, 2);
        return 2.0 * std::sqrt(acc / double(v.size() - 1));
    };
    s.width0 = width(s.phasors0, s.mu0);
    s.width1 = width(s.phasors1, s.mu1);
    const double w = s.width0 + s.width1;
    s.snr = w > 0.0 ? s.separation / w : std::numeric_limits<double>::infinity();
    s.epsilon_sep = std::isfinite(s.snr) ? separation_error(s.snr) : 0.0;
    long e0 = 0, e1 = 0;
    for (auto z : s.phasors0) {
        int a = proj(z) > 0.0 ? 1 : 0;
        s.assigned0.push_back(a);
        e0 += a;
    }
    for (auto z : s.phasors1) {
        int a = proj(z) > 0.0 ? 1 : 0;
        s.assigned1.push_back(a);
        e1 += 1 - a;
    }
    s.error0 = double(e0) / double(s.phasors0.size());
    s.error1 = double(e1) / double(s.phasors1.size());
    s.assignment_error = 0.5 * (s.error0 + s.error1);

    if (bins > 0) {
        double imin = 1e300, imax = -1e300, qmin = 1e300, qmax = -1e300;
        for (const auto* v : {&s.phasors0, &s.phasors1})
            for (auto z : *v) {
                imin = std::min(imin, z.real());
                imax = std::max(imax, z.real());
                qmin = std::min(qmin, z.imag());
                qmax = std::max(qmax, z.imag());
            }
        auto pad = [](double& lo, double& hi) {
            double d = hi - lo;
            if (!(d > 0.0)) d = std::max(std::abs(hi), 1e-300);
            lo -= 0.01 * d;
            hi += 0.01 * d;
        };
        pad(imin, imax);
        pad(qmin, qmax);
        for (int k = 0; k <= bins; ++k) {
            s.I_edges.push_back(imin + (imax - imin) * k / bins);
            s.Q_edges.push_back(qmin + (qmax - qmin) * k / bins);
        }
        s.counts.assign(bins, std::vector<double>(bins, 0.0));
        for (const auto* v : {&s.phasors0, &s.phasors1})
            for (auto z : *v) {
                int i = std::clamp(int((z.real() - imin) / (imax - imin) * bins), 0, bins - 1);
                int q = std::clamp(int((z.imag() - qmin) / (qmax - qmin) * bins), 0, bins - 1);
                s.counts[q][i] += 1.0;
            }
    }
    return s;
}

ShotStatistics shot_histogram(const ReadoutConfig& c, long n_shots, std::uint64_t seed, int bins) {
    c.validate();
    if (n_shots < 100) throw Error(ErrorCode::invalid_params, "shot_histogram: need >= 100 shots");
    const IFModel m = if_model(c);
    std::vector<cd> p0(n_shots), p1(n_shots);
    const bool decays = std::isfinite(c.T1_us);
    for (long k = 0; k < n_shots; ++k) {
        auto r0 = io::make_rng(seed, 2 * std::uint64_t(k));
        p0[k] = draw_shot(c, m, 0, r0, std::numeric_limits<double>::infinity());
        auto r1 = io::make_rng(seed, 2 * std::uint64_t(k) + 1);
        double td = std::numeric_limits<double>::infinity();
        if (decays) {
            std::exponential_distribution<double> ed(1.0 / (c.T1_us * 1e3));
            td = ed(r1);
        }
        p1[k] = draw_shot(c, m, 1, r1, td);
    }
    return shot_statistics(std::move(p0), std::move(p1), bins);
}

std::string shots_csv(const ShotStatistics& s) {
    std::string out = "shot,I,Q,state_prepared,state_assigned\n";
    long k = 0;
    auto emit = [&](const std::vector<cd>& v, const std::vector<int>& a, int st) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += std::to_string(k++) + ',' + io::fmt(v[i].real()) + ',' + io::fmt(v[i].imag()) + ',' +
                   std::to_string(st) + ',' + std::to_string(a[i]) + '\n';
        }
    };
    emit(s.phasors0, s.assigned0, 0);
    emit(s.phasors1, s.assigned1, 1);
    return out;
}

std::string histogram_csv(const ShotStatistics& s) { return io::csv_matrix(s.counts); }

nlohmann::json shot_report(const ShotStatistics& s) {
    nlohmann::json j;
    j["shots_per_state"] = s.phasors0.size();
    j["mu0"] = {s.mu0.real(), s.mu0.imag()};
    j["mu1"] = {s.mu1.real(), s.mu1.imag()};
    j["width0_2sigma"] = s.width0;
    j["width1_2sigma"] = s.width1;
    j["separation"] = s.separation;
    j["snr"] = std::isfinite(s.snr) ? nlohmann::json(s.snr) : nlohmann::json("inf");
    j["epsilon_sep_formula"] = s.epsilon_sep;
    j["error_prepared_0"] = s.error0;
    j["error_prepared_1"] = s.error1;
    j["assignment_error"] = s.assignment_error;
    j["I_edges"] = s.I_edges;
    j["Q_edges"] = s.Q_edges;
    return j;
}

DecayError readout_decay_error(double tau_rd, double tau_s, double T1_us) {
    if (tau_rd < 0.0 || tau_s < 0.0 || !(T1_us > 0.0))
        throw Error(ErrorCode::invalid_params, "decay error: times must be nonnegative, T1 > 0");
    DecayError d;
    d.tau_ro = tau_rd + 0.5 * tau_s;
    d.fidelity = std::exp(-d.tau_ro / (T1_us * 1e3));
    d.error = -std::expm1(-d.tau_ro / (T1_us * 1e3));
    return d;
}

// ---- Purcell ----

double purcell_rate(double g, double delta, double kappa, double omega_q, double omega_r, PurcellForm form,
                    double Q_F) {
    if (!(kappa > 0.0)) throw Error(ErrorCode::invalid_params, "purcell: kappa must be > 0");
    switch (form) {
    case PurcellForm::resonant:
        return g * g / kappa;
    case PurcellForm::impedance: {
        if (!(omega_q > 0.0) || !(omega_r > 0.0)) throw Error(ErrorCode::invalid_params, "purcell: frequencies must be > 0");
        const double Q = omega_r / kappa;
        const double x = delta / kappa;
        return g * g / omega_q * Q / (1.0 + 2.0 * x * x);
    }
    case PurcellForm::dispersive: {
        if (delta == 0.0) throw Error(ErrorCode::invalid_regime, "purcell: dispersive form at zero detuning");
        double gamma = std::pow(g / delta, 2) * kappa;
        if (Q_F > 0.0) {
            if (!(omega_q > 0.0) || !(omega_r > 0.0))
                throw Error(ErrorCode::invalid_params, "purcell: frequencies must be > 0");
            gamma *= (omega_q / omega_r) * (omega_r / (2.0 * Q_F * std::abs(delta)));
        }
        return gamma;
    }
    }
    return 0.0;
}

bool purcell_dispersive_valid(double g, double delta) { return std::abs(delta) >= 5.0 * std::abs(g); }

// ---- paramp ----

std::vector<cd> vacuum_ensemble(std::size_t n, std::uint64_t seed) {
    auto rng = io::make_rng(seed, 0);
    std::normal_distribution<double> nd(0.0, 0.5);
    std::vector<cd> v(n);
    for (auto& z : v) {
        const double x = nd(rng), p = nd(rng);
        z = cd(x, p);
    }
    return v;
}

std::vector<cd> paramp_transform(const std::vector<cd>& in, double G, ParampMode mode, double phi,
                                 std::uint64_t seed) {
    if (!(G >= 1.0)) throw Error(ErrorCode::invalid_params, "paramp: gain must be >= 1");
    const double a = std::sqrt(G), b = std::sqrt(G - 1.0);
    std::vector<cd> out(in.size());
    if (mode == ParampMode::phase_sensitive) {
        const cd e = std::polar(1.0, -phi);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = a * in[i] + e * b * std::conj(in[i]);
        return out;
    }
    const auto idler = vacuum_ensemble(in.size(), io::stream_seed(seed, 1));
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = a * in[i] + b * std::conj(idler[i]);
    return out;
}

QuadratureGains phase_sensitive_gains(double G) {
    if (!(G >= 1.0)) throw Error(ErrorCode::invalid_params, "paramp: gain must be >= 1");
    return {std::sqrt(G) + std::sqrt(G - 1.0), std::sqrt(G) - std::sqrt(G - 1.0)};
}

// ---- config ----

namespace {

double gain_of(const nlohmann::json& j) {
    if (j.contains("gain_dB")) return std::pow(10.0, j.at("gain_dB").get<double>() / 10.0);
    return j.value("gain", 1.0);
}

} // namespace

AmplifierChain chain_from_json(const nlohmann::json& j) {
    AmplifierChain c;
    for (const auto& s : j.value("stages", nlohmann::json::array())) c.stages.push_back({gain_of(s), s.value("T_N_K", 0.0)});
    if (j.contains("paramp")) {
        const auto& p = j.at("paramp");
        ParampSpec ps;
        ps.gain = gain_of(p);
        std::string mode = p.value("mode", "phase_insensitive");
        if (mode == "phase_insensitive") ps.mode = ParampMode::phase_insensitive;
        else if (mode == "phase_sensitive") ps.mode = ParampMode::phase_sensitive;
        else throw Error(ErrorCode::config_error, "paramp: unknown mode " + mode);
        ps.phi = p.value("phi_rad", 0.0);
        c.paramp = ps;
    }
    c.validate();
    return c;
}

ReadoutConfig readout_from_json(const nlohmann::json& j) {
    ReadoutConfig c;
    if (j.contains("resonator")) {
        const auto& r = j.at("resonator");
        c.resonator.omega_r = units::ghz_to_rad(r.value("omega_r_GHz", 7.0));
        c.resonator.kappa = units::mhz_to_rad(r.value("kappa_MHz", 2.0));
        c.resonator.chi = units::mhz_to_rad(r.value("chi_MHz", 1.0));
        std::string cp = r.value("coupling", "reflection");
        if (cp == "reflection") c.resonator.coupling = Coupling::reflection;
        else if (cp == "transmission") c.resonator.coupling = Coupling::transmission;
        else throw Error(ErrorCode::config_error, "resonator: unknown coupling " + cp);
    }
    if (j.contains("probe")) {
        const auto& p = j.at("probe");
        c.probe.amplitude = p.value("amplitude_V", c.probe.amplitude);
        c.probe.omega = p.contains("omega_GHz") ? units::ghz_to_rad(p.at("omega_GHz").get<double>()) : 0.0;
        c.probe.duration = p.value("duration_ns", c.probe.duration);
    }
    if (j.contains("chain")) c.chain = chain_from_json(j.at("chain"));
    c.A_LO = j.value("A_LO_V", c.A_LO);
    c.omega_if = units::mhz_to_rad(j.value("omega_if_MHz", units::rad_to_mhz(c.omega_if)));
    c.fs = j.value("fs_per_ns", c.fs);
    c.tau_rd = j.value("tau_rd_ns", c.tau_rd);
    c.tau_s = j.value("tau_s_ns", c.tau_s);
    if (j.contains("T1_us") && !j.at("T1_us").is_null()) c.T1_us = j.at("T1_us").get<double>();
    c.R_ohm = j.value("R_ohm", c.R_ohm);
    c.validate();
    return c;
}

nlohmann::json readout_to_json(const ReadoutConfig& c) {
    nlohmann::json j;
    j["resonator"] = {{"omega_r_GHz", units::rad_to_ghz(c.resonator.omega_r)},
                      {"kappa_MHz", units::rad_to_mhz(c.resonator.kappa)},
                      {"chi_MHz", units::rad_to_mhz(c.resonator.chi)},
                      {"coupling", c.resonator.coupling == Coupling::reflection ? "reflection" : "transmission"}};
    j["probe"] = {{"amplitude_V", c.probe.amplitude}, {"duration_ns", c.probe.duration}};
    if (c.probe.omega > 0.0) j["probe"]["omega_GHz"] = units::rad_to_ghz(c.probe.omega);
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : c.chain.stages) st.push_back({{"gain", s.gain}, {"T_N_K", s.T_N}});
    j["chain"] = {{"stages", st}};
    j["A_LO_V"] = c.A_LO;
    j["omega_if_MHz"] = units::rad_to_mhz(c.omega_if);
    j["fs_per_ns"] = c.fs;
    j["tau_rd_ns"] = c.tau_rd;
    j["tau_s_ns"] = c.tau_s;
    if (std::isfinite(c.T1_us)) j["T1_us"] = c.T1_us;
    j["R_ohm"] = c.R_ohm;
    return j;
}

} // namespace sqsim::readout

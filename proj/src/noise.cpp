// noise.cpp — noise spectra, decoherence rates, decay laws, filter functions and decay experiments

#include "sqsim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/FFT>

namespace sqsim::noise {

using boost::math::quadrature::gauss_kronrod;

// ---- spectra ----

NoisePSD NoisePSD::one_over_f(double A2, double gamma) {
    NoisePSD p;
    p.kind = PSDKind::one_over_f;
    p.amplitude = A2;
    p.exponent = gamma;
    return p;
}

NoisePSD NoisePSD::ohmic(double B2) {
    NoisePSD p;
    p.kind = PSDKind::ohmic;
    p.amplitude = B2;
    return p;
}

NoisePSD NoisePSD::lorentzian(double chi, double kappa, double eta, double nbar) {
    NoisePSD p;
    p.kind = PSDKind::lorentzian;
    p.chi = chi;
    p.kappa = kappa;
    p.eta = eta;
    p.nbar = nbar;
    return p;
}

NoisePSD NoisePSD::white(double S0) {
    NoisePSD p;
    p.kind = PSDKind::white;
    p.amplitude = S0;
    return p;
}

NoisePSD NoisePSD::composite(std::vector<NoisePSD> parts) {
    NoisePSD p;
    p.kind = PSDKind::composite;
    p.parts = std::move(parts);
    return p;
}

void NoisePSD::validate() const {
    if (!(f_low_Hz >= 0.0) || !(f_high_Hz > f_low_Hz))
        throw Error(ErrorCode::invalid_params, "psd: need 0 <= f_low < f_high");
    switch (kind) {
    case PSDKind::one_over_f:
        if (!(amplitude >= 0.0) || !std::isfinite(exponent) || exponent < 0.0)
            throw Error(ErrorCode::invalid_params, "psd: 1/f needs A^2 >= 0 and gamma >= 0");
        break;
    case PSDKind::ohmic:
    case PSDKind::white:
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
            throw Error(ErrorCode::invalid_params, "psd: amplitude must be finite and >= 0");
        break;
    case PSDKind::lorentzian:
        if (!(kappa > 0.0) || !(eta >= 0.0) || !(nbar >= 0.0) || !std::isfinite(chi))
            throw Error(ErrorCode::invalid_params, "psd: lorentzian needs kappa > 0, eta, nbar >= 0");
        break;
    case PSDKind::composite:
        if (parts.empty()) throw Error(ErrorCode::invalid_params, "psd: empty composite");
        for (const auto& q : parts) q.validate();
        break;
    }
}

double NoisePSD::operator()(double omega) const {
    const double w = std::abs(omega);
    const double f = w / kTwoPi;
    if (kind != PSDKind::composite && (f < f_low_Hz || f > f_high_Hz)) return 0.0;
    switch (kind) {
    case PSDKind::one_over_f:
        if (w == 0.0) throw Error(ErrorCode::singularity, "psd: 1/f evaluated at omega = 0");
        return amplitude * std::pow(kTwoPi / w, exponent);
    case PSDKind::ohmic:
        return amplitude * f;
    case PSDKind::lorentzian:
        return 4.0 * chi * chi * 2.0 * eta * nbar * kappa / (w * w + kappa * kappa);
    case PSDKind::white:
        return amplitude;
    case PSDKind::composite: {
        double s = 0.0;
        for (const auto& q : parts) s += q(omega);
        return s;
    }
    }
    return 0.0;
}

double psd_eval(const NoisePSD& psd, double omega) { return psd(omega); }

namespace {

const char* kind_name(PSDKind k) {
    switch (k) {
    case PSDKind::one_over_f: return "one_over_f";
    case PSDKind::ohmic: return "ohmic";
    case PSDKind::lorentzian: return "lorentzian";
    case PSDKind::white: return "white";
    case PSDKind::composite: return "composite";
    }
    return "?";
}

PSDKind kind_from(const std::string& s) {
    if (s == "one_over_f") return PSDKind::one_over_f;
    if (s == "ohmic") return PSDKind::ohmic;
    if (s == "lorentzian") return PSDKind::lorentzian;
    if (s == "white") return PSDKind::white;
    if (s == "composite") return PSDKind::composite;
    throw Error(ErrorCode::config_error, "psd: unknown kind " + s);
}

// breakpoints where the integrand has kinks or scale changes
void add_breaks(const NoisePSD& p, std::vector<double>& b) {
    if (p.f_low_Hz > 0) b.push_back(kTwoPi * p.f_low_Hz);
    if (std::isfinite(p.f_high_Hz)) b.push_back(kTwoPi * p.f_high_Hz);
    if (p.kind == PSDKind::lorentzian) b.push_back(p.kappa);
    for (const auto& q : p.parts) add_breaks(q, b);
}

// integral of f over [a, b] split in logarithmic decades below `lin_from` and linear
// pieces of width `lin_step` above it
template <class F>
double piecewise(F f, double a, double b, double lin_from, double lin_step, std::vector<double> breaks,
                 double rel_tol, double* err_out) {
    std::vector<double> nodes{a, b};
    for (double x = a * 10.0; x < std::min(lin_from, b); x *= 10.0) nodes.push_back(x);
    if (lin_from > a && lin_from < b) nodes.push_back(lin_from);
    for (double x = std::max(a, lin_from) + lin_step; x < b; x += lin_step) nodes.push_back(x);
    for (double x : breaks)
        if (x > a && x < b) nodes.push_back(x);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    // first pass without refinement sets the absolute scale, second pass refines only the
    // pieces whose error estimate matters at that scale
    struct Piece {
        double lo, hi, v, e;
    };
    std::vector<Piece> pieces;
    auto run = [&](double lo, double hi, unsigned depth, double tol, double& e) {
        if (hi / lo > 1.5) {
            auto g = [&](double u) {
                double x = std::exp(u);
                return f(x) * x;
            };
            return gauss_kronrod<double, 31>::integrate(g, std::log(lo), std::log(hi), depth, tol, &e);
        }
        return gauss_kronrod<double, 31>::integrate(f, lo, hi, depth, tol, &e);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double lo = nodes[i], hi = nodes[i + 1];
        if (hi <= lo) continue;
        double e = 0.0;
        double v = run(lo, hi, 0, rel_tol, e);
        pieces.push_back({lo, hi, v, e});
        total += v;
    }
    const double budget = rel_tol * std::abs(total) / double(std::max<std::size_t>(pieces.size(), 1));
    double err = 0.0;
    total = 0.0;
    for (auto& pc : pieces) {
        if (pc.e > budget && std::abs(pc.v) > 0.0) {
            double tol = std::clamp(budget / std::abs(pc.v), 1e-14, 1e-2);
            pc.v = run(pc.lo, pc.hi, 12, tol, pc.e);
        }
        total += pc.v;
        err += pc.e;
    }
    if (err_out) *err_out = err;
    return total;
}

} // namespace

nlohmann::json psd_to_json(const NoisePSD& p) {
    nlohmann::json j;
    j["kind"] = kind_name(p.kind);
    if (p.kind == PSDKind::composite) {
        j["parts"] = nlohmann::json::array();
        for (const auto& q : p.parts) j["parts"].push_back(psd_to_json(q));
        return j;
    }
    j["amplitude"] = p.amplitude;
    j["exponent"] = p.exponent;
    j["f_low_Hz"] = p.f_low_Hz;
    if (std::isfinite(p.f_high_Hz)) j["f_high_Hz"] = p.f_high_Hz;
    if (p.kind == PSDKind::lorentzian) {
        j["chi_rad_s"] = p.chi;
        j["kappa_rad_s"] = p.kappa;
        j["eta"] = p.eta;
        j["nbar"] = p.nbar;
    }
    return j;
}

NoisePSD psd_from_json(const nlohmann::json& j) {
    NoisePSD p;
    p.kind = kind_from(j.at("kind").get<std::string>());
    if (p.kind == PSDKind::composite) {
        for (const auto& q : j.at("parts")) p.parts.push_back(psd_from_json(q));
    } else {
        p.amplitude = j.value("amplitude", 0.0);
        p.exponent = j.value("exponent", 1.0);
        p.f_low_Hz = j.value("f_low_Hz", 0.0);
        p.f_high_Hz = j.value("f_high_Hz", kInf);
        p.chi = j.value("chi_rad_s", 0.0);
        p.kappa = j.value("kappa_rad_s", 0.0);
        p.eta = j.value("eta", 1.0);
        p.nbar = j.value("nbar", 0.0);
    }
    p.validate();
    return p;
}

double band_variance(const NoisePSD& psd, double f_lo_Hz, double f_hi_Hz) {
    psd.validate();
    if (!(f_lo_Hz > 0.0) || !(f_hi_Hz > f_lo_Hz)) throw Error(ErrorCode::invalid_params, "band: need 0 < f_lo < f_hi");
    std::vector<double> breaks;
    add_breaks(psd, breaks);
    double a = kTwoPi * f_lo_Hz, b = kTwoPi * f_hi_Hz;
    double err = 0.0;
    double v = piecewise([&](double w) { return psd(w); }, a, b, b, b, breaks, 1e-10, &err);
    return 2.0 * v / kTwoPi;
}

std::vector<double> synthesize_noise(const NoisePSD& psd, double fs_Hz, std::size_t n, std::uint64_t seed) {
    psd.validate();
    if (n < 4 || n % 2 != 0 || !(fs_Hz > 0.0))
        throw Error(ErrorCode::invalid_params, "synthesize_noise: need even n >= 4 and fs > 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double df = fs_Hz / double(n);
    std::vector<std::complex<double>> X(n, {0.0, 0.0});
    for (std::size_t k = 1; k < n / 2; ++k) {
        double s = std::sqrt(2.0 * psd(kTwoPi * df * double(k)) * df);
        double a = s * nd(rng), b = s * nd(rng);
        X[k] = 0.5 * double(n) * std::complex<double>(a, -b);
        X[n - k] = std::conj(X[k]);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> x;
    fft.inv(x, X);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i].real();
    return out;
}

// ---- rates ----

double gamma1_from_psd(double matrix_element, double S_at_omega_q) {
    if (matrix_element < 0.0 || S_at_omega_q < 0.0)
        throw Error(ErrorCode::invalid_params, "gamma1_from_psd: inputs must be nonnegative");
    return matrix_element * matrix_element * S_at_omega_q;
}

ThermalRates thermal_rates(double omega_q, double T_K, double gamma_down) {
    if (T_K < 0.0) throw Error(ErrorCode::invalid_params, "thermal_rates: T < 0");
    ThermalRates r;
    if (T_K == 0.0) {
        r.boltzmann = kInf;
        return r;
    }
    r.boltzmann = units::rad_ns_to_kelvin(omega_q) / T_K;
    r.gamma_up = std::exp(-r.boltzmann) * gamma_down;
    r.polarization = std::tanh(0.5 * r.boltzmann);
    return r;
}

DecoherenceRates DecoherenceRates::from_times(double T1_us, double T_phi_us, double T_phi_G_us,
                                              double Gamma1_up) {
    if (!(T1_us > 0.0) || !(T_phi_us > 0.0) || !(T_phi_G_us > 0.0) || Gamma1_up < 0.0)
        throw Error(ErrorCode::invalid_rates, "rates: times must be positive");
    DecoherenceRates r;
    r.Gamma1 = 1.0 / T1_us;
    r.Gamma1_up = Gamma1_up;
    r.Gamma1_down = r.Gamma1 - Gamma1_up;
    r.Gamma_phi = 1.0 / T_phi_us;
    r.Gamma2 = 0.5 * r.Gamma1 + r.Gamma_phi;
    r.T1 = T1_us;
    r.T2 = 1.0 / r.Gamma2;
    r.T_phi_G = T_phi_G_us;
    r.validate();
    return r;
}

void DecoherenceRates::validate() const {
    if (!(Gamma1 >= 0.0) || !(Gamma_phi >= 0.0) || Gamma1_up < 0.0 || Gamma1_down < 0.0)
        throw Error(ErrorCode::invalid_rates, "rates: negative rate");
    if (Gamma2 < 0.5 * Gamma1 * (1.0 - 1e-12))
        throw Error(ErrorCode::invalid_rates, "rates: Gamma2 < Gamma1/2 is unphysical");
}

// ---- filter functions ----

PulseSequenceSpec PulseSequenceSpec::ramsey(double tau_us) {
    PulseSequenceSpec s;
    s.tau = tau_us;
    return s;
}

PulseSequenceSpec PulseSequenceSpec::hahn(double tau_us, double tau_pi_us) { return cpmg(1, tau_us, tau_pi_us); }

PulseSequenceSpec PulseSequenceSpec::cpmg(int N, double tau_us, double tau_pi_us) {
    PulseSequenceSpec s;
    s.N = N;
    s.tau = tau_us;
    s.tau_pi = tau_pi_us;
    for (int j = 1; j <= N; ++j) s.delta.push_back((j - 0.5) / N);
    return s;
}

void PulseSequenceSpec::validate() const {
    if (N < 0 || static_cast<int>(delta.size()) != N)
        throw Error(ErrorCode::invalid_params, "sequence: N must equal the number of pulse centres");
    if (!(tau > 0.0) || tau_pi < 0.0) throw Error(ErrorCode::invalid_params, "sequence: need tau > 0, tau_pi >= 0");
    for (int j = 0; j < N; ++j) {
        if (!(delta[j] > 0.0 && delta[j] < 1.0))
            throw Error(ErrorCode::invalid_params, "sequence: pulse centres must lie in (0, 1)");
        if (j > 0 && !(delta[j] > delta[j - 1]))
            throw Error(ErrorCode::invalid_params, "sequence: pulse centres must increase");
    }
}

namespace {

// g_N(x) with x = omega tau written as |sum_m c_m e^{i k_m x}|^2 / x^2, cos split into two exponentials
struct FilterTerms {
    std::vector<std::pair<double, double>> terms; // (c, k)

    explicit FilterTerms(const PulseSequenceSpec& seq) {
        const double r = seq.tau_pi / seq.tau;
        terms.emplace_back(1.0, 0.0);
        terms.emplace_back(seq.N % 2 == 0 ? -1.0 : 1.0, 1.0);
        for (int j = 1; j <= seq.N; ++j) {
            double c = (j % 2 == 0) ? 1.0 : -1.0;
            terms.emplace_back(c, seq.delta[j - 1] + 0.5 * r);
            terms.emplace_back(c, seq.delta[j - 1] - 0.5 * r);
        }
    }

    double operator()(double x) const {
        if (std::abs(x) < 1e-3) {
            // F(0) = 0; g = |sum_{n>=1} F^(n)(0) x^(n-1)/n!|^2
            cd acc{0.0, 0.0};
            double fact = 1.0;
            for (int n = 1; n <= 8; ++n) {
                fact *= n;
                cd d{0.0, 0.0};
                for (auto [c, k] : terms) d += c * std::pow(kI * k, n);
                acc += d * std::pow(x, n - 1) / fact;
            }
            return std::norm(acc);
        }
        cd F{0.0, 0.0};
        for (auto [c, k] : terms) F += c * std::polar(1.0, k * x);
        return std::norm(F) / (x * x);
    }
};

} // namespace

double filter_function(const PulseSequenceSpec& seq, double omega) {
    seq.validate();
    return FilterTerms(seq)(omega * seq.tau * 1e-6);
}

Coherence coherence_decay(const NoisePSD& psd, const PulseSequenceSpec& seq, double dOmega_dLambda,
                          const CoherenceOptions& opts) {
    psd.validate();
    seq.validate();
    Coherence out;
    const double tau_s = seq.tau * 1e-6;
    const double f_ir = opts.ir_Hz > 0.0 ? opts.ir_Hz : 1.0 / (10.0 * opts.wall_time_s);
    out.omega_ir = kTwoPi * f_ir;
    out.omega_uv = kTwoPi * opts.uv_factor / tau_s;
    if (!(out.omega_uv > out.omega_ir)) throw Error(ErrorCode::invalid_params, "coherence: empty band");
    if (dOmega_dLambda == 0.0) return out;

    std::vector<double> breaks;
    add_breaks(psd, breaks);
    double err = 0.0;
    const FilterTerms g(seq);
    auto f = [&](double w) { return g(w * tau_s) * psd(w); };
    const double step = kPi / tau_s;
    double I = piecewise(f, out.omega_ir, out.omega_uv, step, step, breaks, opts.rel_tol, &err);
    if (!std::isfinite(I) || err > 1e-6 * std::abs(I) + 1e-300) {
        std::ostringstream os;
        os << "coherence: integral " << I << " with error estimate " << err;
        throw Error(ErrorCode::quadrature_failure, os.str());
    }
    const double pref = 0.5 * tau_s * tau_s * dOmega_dLambda * dOmega_dLambda / kTwoPi;
    out.chi = pref * 2.0 * I;
    out.error_estimate = pref * 2.0 * err;
    out.decay = std::exp(-out.chi);
    return out;
}

// ---- density matrices ----

namespace {

void check_state(cd alpha, cd beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
        throw Error(ErrorCode::invalid_params, "rho: |alpha|^2 + |beta|^2 must be 1");
}

Mat rho_from(cd alpha, cd beta, double g1t, double offdiag, double delta_omega, double t) {
    Mat rho(2, 2);
    double p = std::exp(-g1t);
    rho(0, 0) = 1.0 + (std::norm(alpha) - 1.0) * p;
    rho(1, 1) = std::norm(beta) * p;
    rho(0, 1) = alpha * std::conj(beta) * std::polar(1.0, delta_omega * t) * offdiag;
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
}

} // namespace

Mat bloch_redfield_rho(cd alpha, cd beta, const DecoherenceRates& rates, double delta_omega, double t) {
    check_state(alpha, beta);
    rates.validate();
    if (t < 0.0) throw Error(ErrorCode::invalid_params, "rho: t < 0");
    return rho_from(alpha, beta, rates.Gamma1 * t, std::exp(-rates.Gamma2 * t), delta_omega, t);
}

Mat rho_with_1f(cd alpha, cd beta, double Gamma1, const std::function<double(double)>& chi_N,
                double delta_omega, double t) {
    check_state(alpha, beta);
    if (Gamma1 < 0.0) throw Error(ErrorCode::invalid_rates, "rho: Gamma1 < 0");
    if (t < 0.0) throw Error(ErrorCode::invalid_params, "rho: t < 0");
    double chi = chi_N ? chi_N(t) : 0.0;
    if (chi < 0.0) throw Error(ErrorCode::invalid_rates, "rho: negative coherence function");
    return rho_from(alpha, beta, Gamma1 * t, std::exp(-0.5 * Gamma1 * t - chi), delta_omega, t);
}

std::function<double(double)> gaussian_chi(double T_phi_G_us) {
    return [T_phi_G_us](double t) {
        double u = t / T_phi_G_us;
        return u * u;
    };
}

// ---- decay experiments ----

const char* to_string(DecayKind k) {
    switch (k) {
    case DecayKind::t1: return "t1";
    case DecayKind::ramsey: return "ramsey";
    case DecayKind::hahn: return "hahn";
    case DecayKind::cpmg: return "cpmg";
    }
    return "?";
}

DecayKind decay_kind_from_string(const std::string& s) {
    if (s == "t1") return DecayKind::t1;
    if (s == "ramsey") return DecayKind::ramsey;
    if (s == "hahn") return DecayKind::hahn;
    if (s == "cpmg") return DecayKind::cpmg;
    throw Error(ErrorCode::config_error, "unknown decay experiment " + s);
}

namespace {

int pulses_of(const DecayExperiment& ex) {
    switch (ex.kind) {
    case DecayKind::ramsey: return 0;
    case DecayKind::hahn: return 1;
    case DecayKind::cpmg: return ex.n_pulses;
    default: return 0;
    }
}

double chi_of(const DecayExperiment& ex, const DecayTruth& truth, double t) {
    if (t <= 0.0) return 0.0;
    const int N = pulses_of(ex);
    double chi = 0.0;
    if (std::isfinite(truth.T_phi_us)) chi += t / truth.T_phi_us;
    // quasi-static Gaussian dephasing is refocused by any echo pulse
    if (N == 0 && std::isfinite(truth.T_phi_G_us)) chi += gaussian_chi(truth.T_phi_G_us)(t);
    if (truth.psd) {
        auto seq = PulseSequenceSpec::cpmg(N, t, ex.tau_pi_us);
        chi += coherence_decay(*truth.psd, seq, truth.dOmega_dLambda, truth.coherence).chi;
    }
    return chi;
}

Mat x_half_pi() {
    Mat X(2, 2);
    const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
    X << c, -kI * s, -kI * s, c;
    return X;
}

} // namespace

double decay_signal(const DecayExperiment& ex, const DecayTruth& truth, double t) {
    const double G1 = std::isfinite(truth.T1_us) ? 1.0 / truth.T1_us : 0.0;
    switch (ex.kind) {
    case DecayKind::t1:
        return rho_with_1f(0.0, 1.0, G1, nullptr, 0.0, t)(1, 1).real();
    case DecayKind::ramsey: {
        const double r = 1.0 / std::sqrt(2.0);
        double chi = chi_of(ex, truth, t);
        Mat rho = rho_with_1f(r, cd(0.0, -r), G1, [chi](double) { return chi; }, ex.detuning, t);
        Mat X = x_half_pi();
        Mat out = X * rho * X.adjoint();
        return out(1, 1).real();
    }
    case DecayKind::hahn:
    case DecayKind::cpmg: {
        const int N = pulses_of(ex);
        double c = std::exp(-0.5 * G1 * t - chi_of(ex, truth, t));
        return 0.5 * (1.0 + (N % 2 == 0 ? 1.0 : -1.0) * c);
    }
    }
    return 0.0;
}

namespace {

fit::FitResult best_of(const fit::Model& m, const std::vector<double>& t, const std::vector<double>& y,
                       const std::vector<double>& s, const std::vector<fit::Params>& seeds,
                       const std::vector<std::string>& names) {
    std::optional<fit::FitResult> best;
    std::string last;
    for (const auto& p0 : seeds) {
        try {
            auto r = fit::least_squares(m, t, y, s, p0, names);
            if (!best || r.rss < best->rss) best = std::move(r);
        } catch (const Error& e) {
            last = e.what();
        }
    }
    if (!best) throw Error(ErrorCode::fit_failure, "decay fit failed for every seed: " + last);
    return *best;
}

double crossing_time(const std::vector<double>& t, const std::vector<double>& y) {
    const double y0 = y.front(), yinf = y.back();
    const double target = yinf + (y0 - yinf) / std::exp(1.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        if ((y[i] - target) * (y0 - target) <= 0.0) return std::max(t[i], 1e-12);
    return t.back();
}

DecayFit fit_decay(const DecayExperiment& ex, const std::vector<double>& t, const std::vector<double>& y,
                   const std::vector<double>& s) {
    DecayFit out;
    const double tmax = t.back();
    const double B0 = y.back();
    const double A0 = y.front() - B0;

    fit::Model expm = [](double x, const fit::Params& p) { return p[0] * std::exp(-x / p[1]) + p[2]; };
    const double Tc = crossing_time(t, y);
    std::vector<fit::Params> exp_seeds;
    for (double T0 : {Tc, 0.5 * Tc, 2.0 * Tc}) {
        fit::Params p(3);
        p << A0, T0, B0;
        exp_seeds.push_back(p);
    }

    if (ex.kind != DecayKind::ramsey) {
        out.model = "exponential";
        out.result = best_of(expm, t, y, s, exp_seeds, {"A", "T", "B"});
        out.T = out.result.value("T");
        out.T_err = out.result.error("T");
        out.aicc_exponential = out.result.aicc;
        return out;
    }

    const double T1 = ex.known_T1_us;
    auto env_g = [T1](double x, double Tg) {
        double u = x / Tg;
        double e = std::exp(-u * u);
        return T1 > 0.0 ? e * std::exp(-0.5 * x / T1) : e;
    };

    fit::FitResult re, rg;
    std::string exp_name, gauss_name;
    if (ex.detuning == 0.0) {
        exp_name = "exponential";
        gauss_name = "gaussian";
        re = best_of(expm, t, y, s, exp_seeds, {"A", "T", "B"});
        fit::Model gm = [env_g](double x, const fit::Params& p) { return p[0] * env_g(x, p[1]) + p[2]; };
        rg = best_of(gm, t, y, s, exp_seeds, {"A", "T", "B"});
    } else {
        exp_name = "damped_cosine";
        gauss_name = "gaussian_cosine";
        const double w0 = fit::dft_peak_frequency(t, y);
        fit::Model dc = [](double x, const fit::Params& p) {
            return p[0] * std::exp(-x / p[1]) * std::cos(p[2] * x + p[3]) + p[4];
        };
        fit::Model gc = [env_g](double x, const fit::Params& p) {
            return p[0] * env_g(x, p[1]) * std::cos(p[2] * x + p[3]) + p[4];
        };
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= double(y.size());
        const double amp = std::max(std::abs(y.front() - mean), 1e-3);
        std::vector<fit::Params> seeds;
        for (double T0 : {tmax / 4.0, tmax / 2.0, tmax})
            for (double ph : {0.0, kPi / 2, kPi, -kPi / 2}) {
                fit::Params p(5);
                p << amp, T0, w0, ph, mean;
                seeds.push_back(p);
            }
        re = best_of(dc, t, y, s, seeds, {"A", "T", "omega", "phi", "B"});
        rg = best_of(gc, t, y, s, seeds, {"A", "T", "omega", "phi", "B"});
    }
    out.aicc_exponential = re.aicc;
    out.aicc_gaussian = rg.aicc;
    if (rg.aicc < re.aicc) {
        out.model = gauss_name;
        out.result = rg;
    } else {
        out.model = exp_name;
        out.result = re;
    }
    out.T = std::abs(out.result.value("T"));
    out.T_err = out.result.error("T");
    return out;
}

} // namespace

DecayResult simulate_decay_experiment(const DecayExperiment& ex, const DecayTruth& truth) {
    if (ex.t_us.size() < 8) throw Error(ErrorCode::invalid_grid, "decay: need at least 8 time points");
    for (std::size_t i = 0; i < ex.t_us.size(); ++i) {
        if (ex.t_us[i] < 0.0 || (i > 0 && !(ex.t_us[i] > ex.t_us[i - 1])))
            throw Error(ErrorCode::invalid_grid, "decay: time grid must be nonnegative and ascending");
    }
    if (ex.shots < 0) throw Error(ErrorCode::invalid_params, "decay: shots must be >= 0");
    if (ex.kind == DecayKind::cpmg && ex.n_pulses < 1)
        throw Error(ErrorCode::invalid_params, "decay: cpmg needs n_pulses >= 1");
    if (!(truth.T1_us > 0.0)) throw Error(ErrorCode::invalid_rates, "decay: T1 must be positive");

    DecayResult r;
    r.t_us = ex.t_us;
    std::mt19937_64 rng(ex.seed);
    for (double t : ex.t_us) {
        double p = std::clamp(decay_signal(ex, truth, t), 0.0, 1.0);
        if (ex.shots > 0) {
            std::binomial_distribution<long> bd(ex.shots, p);
            double ph = double(bd(rng)) / double(ex.shots);
            r.polarization.push_back(ph);
            double pe = std::clamp(ph, 0.5 / double(ex.shots), 1.0 - 0.5 / double(ex.shots));
            r.stderr_.push_back(std::sqrt(pe * (1.0 - pe) / double(ex.shots)));
        } else {
            r.polarization.push_back(p);
            r.stderr_.push_back(0.0);
        }
    }
    std::vector<double> sigma;
    if (ex.shots > 0) sigma = r.stderr_;
    r.fit = fit_decay(ex, r.t_us, r.polarization, sigma);
    return r;
}

nlohmann::json decay_report(const DecayResult& r) {
    nlohmann::json j;
    j["model"] = r.fit.model;
    j["T_us"] = r.fit.T;
    j["T_stderr_us"] = r.fit.T_err;
    auto ci = r.fit.result.ci("T");
    j["T_ci95_us"] = {std::abs(ci.first), std::abs(ci.second)};
    j["aicc_exponential"] = std::isfinite(r.fit.aicc_exponential) ? nlohmann::json(r.fit.aicc_exponential) : nlohmann::json(nullptr);
    j["aicc_gaussian"] = std::isfinite(r.fit.aicc_gaussian) ? nlohmann::json(r.fit.aicc_gaussian) : nlohmann::json(nullptr);
    j["reduced_chi2"] = r.fit.result.red_chi2;
    nlohmann::json params;
    for (std::size_t i = 0; i < r.fit.result.names.size(); ++i)
        params[r.fit.result.names[i]] = {{"value", r.fit.result.params(i)}, {"stderr", r.fit.result.stderr_(i)}};
    j["params"] = params;
    return j;
}

std::string decay_csv(const DecayResult& r) {
    std::ostringstream os;
    os.precision(17);
    os << "t_us,polarization,stderr\n";
    for (std::size_t i = 0; i < r.t_us.size(); ++i)
        os << r.t_us[i] << ',' << r.polarization[i] << ',' << r.stderr_[i] << '\n';
    return os.str();
}

} // namespace sqsim::noise

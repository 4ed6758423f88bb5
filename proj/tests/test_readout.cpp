// test_readout.cpp — resonator response, chain noise, demodulation, shot statistics, paramp and Purcell

#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "sqsim/readout.hpp"

using namespace sqsim;
using namespace sqsim::readout;

namespace {

ReadoutConfig base_config() {
    ReadoutConfig c;
    c.chain.stages = {{1e4, 4.0}};
    c.tau_rd = 500.0;
    c.tau_s = 400.0;
    c.probe.duration = 1000.0;
    return c;
}

} // namespace

TEST_CASE("reflection response is lossless and the transient relaxes to it") {
    ResonatorParams r;
    for (double dw : {-0.02, -0.005, 0.0, 0.004, 0.03}) {
        const double w = r.omega_r + dw;
        CHECK(std::abs(resonator_response(r, 0, w)) == doctest::Approx(1.0));
        CHECK(std::abs(resonator_transient(r, 1, w, 1e5) - resonator_response(r, 1, w)) < 1e-9);
    }
    CHECK(r.omega_state(1) - r.omega_state(0) == doctest::Approx(2 * r.chi));
    // at the midpoint the two phasors are mirror images with maximal separation
    const double w = optimal_probe_frequency(r);
    CHECK(state_separation(r, w) >= state_separation(r, w + 0.3 * r.kappa));
    CHECK(state_separation(r, w) >= state_separation(r, w - 0.3 * r.kappa));
}

TEST_CASE("cascaded noise temperature and efficiency") {
    AmplifierChain c;
    c.stages = {{100.0, 0.1}, {1e4, 4.0}, {10.0, 300.0}};
    CHECK(system_noise_temperature(c) == doctest::Approx(0.1 + 4.0 / 100.0 + 300.0 / 1e6));
    CHECK(c.total_gain() == doctest::Approx(1e7));
    auto e = quantum_efficiency(units::ghz_to_rad(7.0), 0.1403);
    CHECK(e.eta == doctest::Approx(units::rad_ns_to_kelvin(units::ghz_to_rad(7.0)) / 0.1403));
    CHECK(quantum_efficiency(units::ghz_to_rad(7.0), 0.1).exceeds_unity);
    c.stages[0].gain = -1.0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("digital demodulation recovers the complex amplitude of a clean IF tone") {
    IQRecord rec;
    rec.fs = 1.0;
    rec.omega_if = kTwoPi * 0.05;
    const cd z0 = std::polar(0.7, 0.9);
    for (int n = 0; n < 400; ++n) {
        const cd v = z0 * std::polar(1.0, rec.omega_if * n);
        rec.I.push_back(v.real());
        rec.Q.push_back(v.imag());
    }
    rec.n1 = 100;
    rec.n2 = 299;
    CHECK(std::abs(heterodyne_demodulate(rec) - z0) < 1e-12);
    rec.n2 = 120;
    CHECK_THROWS_AS(heterodyne_demodulate(rec), Error);
}

TEST_CASE("analog mixing chain reproduces the resonator phasor ratio") {
    ResonatorParams r;
    r.kappa = units::mhz_to_rad(10.0);
    Probe p;
    p.amplitude = 1.0;
    p.duration = 800.0;
    p.omega = optimal_probe_frequency(r);
    const double fs = 20.0, w_if = kTwoPi * 0.05;
    cd z[2];
    for (int s : {0, 1}) {
        auto rf = synthesize_readout_signal(r, p, s, AmplifierChain{}, fs, 1);
        auto iq = analog_mix(rf, p.omega - w_if);
        iq.n1 = std::size_t(400.0 * fs);
        iq.n2 = std::size_t(700.0 * fs);
        z[s] = heterodyne_demodulate(iq);
    }
    const cd ref = resonator_response(r, 1, p.omega) / resonator_response(r, 0, p.omega);
    CHECK(std::abs(z[1] / z[0] - ref) < 2e-3);
}

TEST_CASE("per-sample IF record and phasor-level shots have the same distribution") {
    auto c = base_config();
    c.probe.amplitude = amplitude_for_snr(c, 1.0);
    const double sig = phasor_noise_sigma(c);
    const int n = 400;
    auto fast = shot_histogram(c, n, 3, 0);
    for (int s : {0, 1}) {
        cd mean{0, 0};
        double var = 0.0;
        std::vector<cd> z;
        for (int k = 0; k < n; ++k) {
            auto rec = synthesize_if_record(c, s, 1000 + 2 * k + s);
            z.push_back(heterodyne_demodulate(rec));
            mean += z.back();
        }
        mean /= double(n);
        for (auto v : z) var += std::norm(v - mean);
        var /= 2.0 * (n - 1);
        const cd ref = s == 0 ? fast.mu0 : fast.mu1;
        CHECK(std::abs(mean - ref) < 5.0 * sig / std::sqrt(double(n)));
        CHECK(std::sqrt(var) == doctest::Approx(sig).epsilon(0.1));
    }
}

TEST_CASE("measured misassignment equals the Gaussian overlap of the clusters") {
    auto c = base_config();
    for (double snr : {0.5, 1.0}) {
        c.probe.amplitude = amplitude_for_snr(c, snr);
        auto s = shot_histogram(c, 20000, 77, 16);
        CHECK(s.snr == doctest::Approx(snr).epsilon(0.03));
        const double ref = oracle::gaussian_overlap_error(s.separation, 0.5 * s.width0);
        CHECK(std::abs(s.assignment_error - ref) < 4.0 * oracle::binomial_sigma(ref, 40000));
        CHECK(s.epsilon_sep == doctest::Approx(0.5 * std::erfc(s.snr / 2)));
        double total = 0.0;
        for (auto& row : s.counts)
            for (double v : row) total += v;
        CHECK(total == doctest::Approx(40000.0));
    }
}

TEST_CASE("shot statistics edge cases") {
    std::vector<cd> a{{1, 0}, {1, 0}, {1, 0}}, b{{1, 0}, {1, 0}};
    try {
        shot_statistics(a, b);
        FAIL("expected statistics_error");
    } catch (const Error& e) {
        CHECK(e.code == ErrorCode::statistics_error);
    }
    std::vector<cd> c0{{0, 0}, {0, 0}}, c1{{2, 0}, {2, 0}};
    auto s = shot_statistics(c0, c1, 4);
    CHECK(std::isinf(s.snr));
    CHECK(s.assignment_error == 0.0);
    CHECK(s.epsilon_sep == 0.0);
    CHECK_THROWS_AS(shot_histogram(base_config(), 10, 1), Error);
}

TEST_CASE("shots are reproducible and outputs are well formed") {
    auto c = base_config();
    c.probe.amplitude = amplitude_for_snr(c, 2.0);
    auto a = shot_histogram(c, 200, 5, 8), b = shot_histogram(c, 200, 5, 8);
    CHECK(a.phasors1 == b.phasors1);
    CHECK(shots_csv(a) == shots_csv(b));
    CHECK(histogram_csv(a).find('\n') != std::string::npos);
    auto rep = shot_report(a);
    CHECK(rep.contains("snr"));
    auto back = readout_from_json(readout_to_json(c));
    CHECK(back.probe.amplitude == doctest::Approx(c.probe.amplitude));
    CHECK(back.tau_s == doctest::Approx(c.tau_s));
}

TEST_CASE("in-flight decay error uses the window midpoint") {
    auto d = readout_decay_error(500.0, 400.0, 10.0);
    CHECK(d.tau_ro == doctest::Approx(700.0));
    CHECK(d.error == doctest::Approx(1.0 - std::exp(-0.07)));
    CHECK(d.error + d.fidelity == doctest::Approx(1.0));
}

TEST_CASE("in-flight decay raises the |1> error by about the decay probability") {
    auto c = base_config();
    c.probe.amplitude = amplitude_for_snr(c, 2.0);
    auto clean = shot_histogram(c, 20000, 8, 0);
    c.T1_us = 10.0;
    auto dec = shot_histogram(c, 20000, 9, 0);
    const double eps = readout_decay_error(c.tau_rd, c.tau_s, c.T1_us).error;
    CHECK(dec.error1 - clean.error1 == doctest::Approx(eps).epsilon(0.25));
    CHECK(dec.error0 == doctest::Approx(clean.error0).epsilon(0.5).scale(1e-3));
}

TEST_CASE("phase-insensitive amplification adds half a quantum at high gain") {
    const std::size_t n = 100000;
    auto in = vacuum_ensemble(n, 1);
    double vin = 0.0;
    for (auto z : in) vin += z.real() * z.real();
    vin /= double(n);
    CHECK(vin == doctest::Approx(0.25).epsilon(0.02));
    auto out = paramp_transform(in, 50.0, ParampMode::phase_insensitive, 0.0, 2);
    double vout = 0.0;
    for (auto z : out) vout += z.real() * z.real();
    vout /= double(n);
    const double added = vout / 50.0 - vin;
    CHECK(added == doctest::Approx(0.25 * (1 - 1 / 50.0)).epsilon(0.05));
}

TEST_CASE("phase-sensitive amplification squeezes one quadrature") {
    auto g = phase_sensitive_gains(10.0);
    CHECK(g.amplified * g.deamplified == doctest::Approx(1.0));
    CHECK(g.amplified * g.amplified == doctest::Approx(std::pow(std::sqrt(10.0) + 3.0, 2)));
    auto in = vacuum_ensemble(50000, 3);
    auto out = paramp_transform(in, 10.0, ParampMode::phase_sensitive, 0.0, 4);
    double vx = 0.0, vp = 0.0;
    for (auto z : out) {
        vx += z.real() * z.real();
        vp += z.imag() * z.imag();
    }
    vx /= 50000.0;
    vp /= 50000.0;
    CHECK(vx * vp == doctest::Approx(1.0 / 16.0).epsilon(0.03));
    CHECK(std::max(vx, vp) / std::min(vx, vp) > 100.0);
    CHECK_THROWS_AS(phase_sensitive_gains(0.5), Error);
}

TEST_CASE("Purcell rates") {
    const double g = units::mhz_to_rad(50), D = units::mhz_to_rad(-1000), k = units::mhz_to_rad(2);
    const double wq = units::ghz_to_rad(6.0), wr = units::ghz_to_rad(7.0);
    const double disp = purcell_rate(g, D, k, wq, wr);
    CHECK(disp == doctest::Approx(k * g * g / (D * D)));
    CHECK(purcell_rate(g, 0.0, k, wq, wr, PurcellForm::resonant) == doctest::Approx(g * g / k));
    const double QF = 30.0;
    const double filt = purcell_rate(g, D, k, wq, wr, PurcellForm::dispersive, QF);
    CHECK(filt / disp == doctest::Approx((wq / wr) * (wr / (2 * QF * std::abs(D)))).epsilon(1e-12));
    CHECK(purcell_dispersive_valid(g, D));
    CHECK_FALSE(purcell_dispersive_valid(g, 2 * g));
    CHECK_THROWS_AS(purcell_rate(g, 0.0, k, wq, wr), Error);
}

// test_noise.cpp — spectra, rates, filter functions, coherence integrals and decay experiments

#include <cmath>
#include <numeric>

#include <doctest.h>

#include "oracles.hpp"
#include "sqsim/noise.hpp"

using namespace sqsim;
using namespace sqsim::noise;

TEST_CASE("spectral densities follow their closed forms") {
    auto f = NoisePSD::one_over_f(2e-12, 1.0);
    CHECK(f(kTwoPi * 1.0) == doctest::Approx(2e-12));
    CHECK(f(-kTwoPi * 10.0) == doctest::Approx(2e-13));
    CHECK_THROWS_AS(f(0.0), Error);
    auto w = NoisePSD::white(3.0);
    CHECK(w(123.0) == 3.0);
    auto o = NoisePSD::ohmic(1e-3);
    CHECK(o(kTwoPi * 50.0) == doctest::Approx(5e-2));
    auto c = NoisePSD::composite({w, o});
    CHECK(c(kTwoPi * 50.0) == doctest::Approx(3.05));
}

TEST_CASE("band variance integrates both signs of frequency") {
    CHECK(band_variance(NoisePSD::white(2.0), 10.0, 110.0) == doctest::Approx(2.0 * 2.0 * 100.0).epsilon(1e-8));
    CHECK(band_variance(NoisePSD::one_over_f(1e-10), 1.0, 1e3) ==
          doctest::Approx(2.0 * 1e-10 * std::log(1e3)).epsilon(1e-6));
}

TEST_CASE("PSD JSON round trip") {
    auto p = NoisePSD::composite({NoisePSD::one_over_f(1e-12, 0.9), NoisePSD::white(1e-15)});
    p.parts[0].f_low_Hz = 1e-3;
    auto q = psd_from_json(psd_to_json(p));
    for (double w : {1.0, 1e3, 1e6}) CHECK(q(w) == doctest::Approx(p(w)).epsilon(1e-14));
}

TEST_CASE("synthesized white noise has the band variance") {
    const double S0 = 1e-3, fs = 1e6;
    auto x = synthesize_noise(NoisePSD::white(S0), fs, 1 << 16, 42);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= double(x.size());
    CHECK(var == doctest::Approx(S0 * fs).epsilon(0.03));
    CHECK(synthesize_noise(NoisePSD::white(S0), fs, 64, 7) == synthesize_noise(NoisePSD::white(S0), fs, 64, 7));
}

TEST_CASE("thermal rates obey detailed balance") {
    const double wq = units::ghz_to_rad(5.0), T = 0.05;
    auto r = thermal_rates(wq, T, 1.0);
    const double x = units::hbar * wq * 1e9 / (units::kB * T);
    CHECK(r.boltzmann == doctest::Approx(x));
    CHECK(r.gamma_up == doctest::Approx(std::exp(-x)));
    CHECK(r.polarization == doctest::Approx((1 - r.gamma_up) / (1 + r.gamma_up)));
    CHECK(thermal_rates(wq, 0.0, 1.0).gamma_up == 0.0);
    CHECK(gamma1_from_psd(2.0, 3.0) == doctest::Approx(12.0));
}

TEST_CASE("decoherence rates combine and reject unphysical inputs") {
    auto r = DecoherenceRates::from_times(50.0, 100.0);
    CHECK(r.Gamma2 == doctest::Approx(0.5 / 50.0 + 1.0 / 100.0));
    CHECK(r.T2 == doctest::Approx(50.0));
    CHECK_THROWS_AS(DecoherenceRates::from_times(-1.0, 10.0), Error);
    DecoherenceRates bad;
    bad.Gamma1 = 1.0;
    bad.Gamma1_down = 1.0;
    bad.Gamma2 = 0.2;
    try {
        bad.validate();
        FAIL("expected invalid_rates");
    } catch (const Error& e) {
        CHECK(e.code == ErrorCode::invalid_rates);
    }
}

TEST_CASE("free-induction and echo filter functions match closed forms") {
    const double tau = 4.0;
    for (double x : {1e-3, 0.3, 1.0, 3.7, 12.0, 250.0}) {
        const double w = x / (tau * 1e-6);
        CHECK(filter_function(PulseSequenceSpec::ramsey(tau), w) == doctest::Approx(oracle::filter_g0(x)).epsilon(1e-10));
        CHECK(std::abs(filter_function(PulseSequenceSpec::hahn(tau), w) - oracle::filter_g1(x)) < 1e-12);
    }
    // dynamical decoupling suppresses the low-frequency response
    const double w = 0.5 / (tau * 1e-6);
    CHECK(filter_function(PulseSequenceSpec::cpmg(4, tau), w) < filter_function(PulseSequenceSpec::hahn(tau), w));
    auto bad = PulseSequenceSpec::cpmg(2, tau);
    bad.delta[1] = 1.2;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("white dephasing noise gives an exponential decay, linear in time") {
    const double S0 = 1e-14, d = 1e8;
    auto psd = NoisePSD::white(S0);
    for (double tau : {1.0, 5.0, 20.0}) {
        auto c = coherence_decay(psd, PulseSequenceSpec::ramsey(tau), d);
        const double ref = 0.5 * d * d * S0 * tau * 1e-6;
        CHECK(c.chi == doctest::Approx(ref).epsilon(0.01));
        CHECK(c.decay == doctest::Approx(std::exp(-c.chi)));
    }
    // echo does not refocus white noise
    auto r = coherence_decay(psd, PulseSequenceSpec::ramsey(10.0), d);
    auto h = coherence_decay(psd, PulseSequenceSpec::hahn(10.0), d);
    CHECK(h.chi == doctest::Approx(r.chi).epsilon(0.02));
}

TEST_CASE("1/f noise: echo extends coherence") {
    auto psd = NoisePSD::one_over_f(1e-12);
    auto r = coherence_decay(psd, PulseSequenceSpec::ramsey(5.0), 2e11);
    auto h = coherence_decay(psd, PulseSequenceSpec::hahn(5.0), 2e11);
    CHECK(h.chi < 0.5 * r.chi);
}

TEST_CASE("Bloch-Redfield density matrix: T1 relaxation and T2 coherence decay") {
    auto rates = DecoherenceRates::from_times(40.0, 60.0);
    const double t = 25.0;
    Mat rho = bloch_redfield_rho(0.0, 1.0, rates, 0.0, t);
    CHECK(rho.trace().real() == doctest::Approx(1.0));
    CHECK(rho(1, 1).real() == doctest::Approx(std::exp(-t / 40.0)));
    const double s = 1.0 / std::sqrt(2.0);
    Mat sup = bloch_redfield_rho(s, s, rates, 0.0, t);
    CHECK(std::abs(sup(0, 1)) == doctest::Approx(0.5 * std::exp(-rates.Gamma2 * t)));
}

TEST_CASE("noiseless decay experiments recover their truths") {
    DecayExperiment ex;
    ex.kind = DecayKind::t1;
    ex.t_us.resize(40);
    for (int i = 0; i < 40; ++i) ex.t_us[i] = 5.0 * i;
    DecayTruth truth;
    truth.T1_us = 30.0;
    auto r = simulate_decay_experiment(ex, truth);
    CHECK(r.fit.T == doctest::Approx(30.0).epsilon(1e-4));
    CHECK(r.polarization.front() == doctest::Approx(1.0));

    ex.kind = DecayKind::hahn;
    truth.T_phi_us = 50.0;
    r = simulate_decay_experiment(ex, truth);
    CHECK(r.fit.T == doctest::Approx(1.0 / (0.5 / 30.0 + 1.0 / 50.0)).epsilon(1e-3));

    CHECK(decay_kind_from_string(to_string(DecayKind::cpmg)) == DecayKind::cpmg);
    CHECK(decay_csv(r).find("\n") != std::string::npos);
    CHECK(decay_report(r)["T_us"].get<double>() == doctest::Approx(r.fit.T));
}

TEST_CASE("sampled decay experiments are reproducible per seed") {
    DecayExperiment ex;
    ex.kind = DecayKind::t1;
    ex.shots = 500;
    ex.seed = 9;
    for (int i = 0; i < 20; ++i) ex.t_us.push_back(10.0 * i);
    DecayTruth truth;
    truth.T1_us = 60.0;
    auto a = simulate_decay_experiment(ex, truth), b = simulate_decay_experiment(ex, truth);
    CHECK(a.polarization == b.polarization);
    ex.seed = 10;
    CHECK(simulate_decay_experiment(ex, truth).polarization != a.polarization);
}

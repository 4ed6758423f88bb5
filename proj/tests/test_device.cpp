// test_device.cpp — circuit spectra, flux tuning and dispersive parameters

#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "sqsim/device.hpp"

using namespace sqsim;
using namespace sqsim::device;

TEST_CASE("transmon charge-basis levels match an independent Cooper-pair box diagonalization") {
    for (double ng : {0.0, 0.25, 0.5}) {
        QubitCircuitParams p;
        p.E_C = 0.3;
        p.E_J = 12.0;
        p.n_g = ng;
        auto s = spectrum(build_transmon_hamiltonian(p, 25), 4);
        auto ref = oracle::cooper_pair_box_levels(p.E_J, p.E_C, ng, 25, 4);
        for (int k = 0; k < 4; ++k) CHECK(s.energies[k] == doctest::Approx(ref[k]).epsilon(1e-10));
        CHECK(units::rad_to_ghz(s.omega_01) == doctest::Approx(ref[1] - ref[0]).epsilon(1e-10));
        CHECK(units::rad_to_ghz(s.alpha) == doctest::Approx((ref[2] - ref[1]) - (ref[1] - ref[0])).epsilon(1e-8));
    }
}

TEST_CASE("deep transmon approaches the asymptotic omega01 and alpha ~ -E_C") {
    QubitCircuitParams p;
    p.E_C = 0.2;
    p.E_J = 0.2 * 100;
    auto s = qubit_spectrum(p, {});
    const double w = units::rad_to_ghz(s.omega_01);
    CHECK(w == doctest::Approx(oracle::transmon_omega01_asymptotic(p.E_J, p.E_C)).epsilon(0.01));
    CHECK(units::rad_to_ghz(s.alpha) < 0.0);
    CHECK(std::abs(units::rad_to_ghz(s.alpha) / -p.E_C - 1) < 0.15);
}

TEST_CASE("charge dispersion is exponentially suppressed with E_J/E_C") {
    auto spread = [](double ratio) {
        QubitCircuitParams p;
        p.E_C = 0.3;
        p.E_J = ratio * p.E_C;
        p.n_g = 0.0;
        const double a = qubit_spectrum(p, {}).omega_01;
        p.n_g = 0.5;
        return std::abs(qubit_spectrum(p, {}).omega_01 - a);
    };
    CHECK(spread(20) < 0.1 * spread(5));
    CHECK(spread(50) < 1e-3 * spread(5));
}

TEST_CASE("split transmon: effective E_J and a frequency maximum at zero flux") {
    const double EJs = 20.0, d = 0.3;
    for (double phi : {0.0, 0.4, 1.0, kPi / 2}) {
        const double ref = EJs * std::sqrt(std::pow(std::cos(phi), 2) + d * d * std::pow(std::sin(phi), 2));
        CHECK(effective_josephson_energy(EJs, d, {phi}) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(asymmetry_from_ratio(3.0) == doctest::Approx(0.5));

    QubitCircuitParams p;
    p.kind = QubitKind::split_transmon;
    p.E_C = 0.25;
    p.E_J = EJs;
    p.d = d;
    const double w0 = qubit_spectrum(p, {0.0}).omega_01;
    for (double phi : {-0.6, -0.2, 0.2, 0.6}) CHECK(qubit_spectrum(p, {phi}).omega_01 < w0);
    CHECK(qubit_spectrum(p, {0.3}).omega_01 == doctest::Approx(qubit_spectrum(p, {-0.3}).omega_01).epsilon(1e-10));
}

TEST_CASE("invalid circuit parameters are rejected") {
    QubitCircuitParams p;
    p.kind = QubitKind::split_transmon;
    p.d = 1.2;
    CHECK_THROWS_AS(p.validate(), Error);
    p.d = 0.1;
    p.E_C = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("flux qubit grid and charge bases agree") {
    QubitCircuitParams p;
    p.kind = QubitKind::flux_qubit;
    p.E_C = 1.0;
    p.E_J = 40.0;
    p.gamma = 0.8;
    for (double phi : {0.0, kPi}) {
        auto a = spectrum(build_flux_qubit_charge_hamiltonian(p, {phi}, 40), 3);
        auto b = spectrum(build_flux_qubit_hamiltonian(p, {phi}, {-4 * kPi, 4 * kPi, 801}), 3);
        CHECK(a.omega_01 == doctest::Approx(b.omega_01).epsilon(0.02));
    }
}

TEST_CASE("fluxonium spectrum is finite and symmetric in flux") {
    QubitCircuitParams p;
    p.kind = QubitKind::fluxonium;
    p.E_C = 1.0;
    p.E_J = 4.0;
    p.gamma = 1.0;
    p.N = 4;
    const double a = qubit_spectrum(p, {0.3}).omega_01, b = qubit_spectrum(p, {-0.3}).omega_01;
    CHECK(std::isfinite(a));
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("dispersive shift agrees with a ladder-resonator diagonalization away from the poles") {
    const double alpha = units::mhz_to_rad(-300), wr = units::ghz_to_rad(7.0), g = units::mhz_to_rad(50);
    for (double dm : {-2000.0, -1200.0, 1500.0, 2400.0}) {
        const double D = units::mhz_to_rad(dm);
        const double chi = dispersive_params(g, D, alpha).chi;
        const double ref = oracle::ladder_chi(wr + D, alpha, wr, g);
        CHECK(chi / ref == doctest::Approx(1.0).epsilon(0.05));
    }
    // straddling regime: positive between the poles
    const double inside = dispersive_params(g, units::mhz_to_rad(150), alpha).chi;
    CHECK(inside > 0.0);
    CHECK(oracle::ladder_chi(wr + units::mhz_to_rad(150), alpha, wr, g) > 0.0);
    CHECK(dispersive_params(g, units::mhz_to_rad(-800), alpha).chi < 0.0);
}

TEST_CASE("dispersive critical photon number and Lamb shift") {
    const double g = units::mhz_to_rad(100), D = units::mhz_to_rad(-1000), alpha = units::mhz_to_rad(-300);
    auto d = dispersive_params(g, D, alpha);
    CHECK(d.n_crit == doctest::Approx(D * D / (4 * g * g)).epsilon(1e-12));
    CHECK(d.lamb_shift == doctest::Approx(g * g / D).epsilon(1e-12));
    CHECK(d.stark_per_photon == doctest::Approx(2 * g * g / D).epsilon(1e-12));
    CHECK_THROWS_AS(dispersive_params(g, 0.0, alpha), Error);
    CHECK_THROWS_AS(dispersive_params(g, -alpha, alpha), Error);
}

TEST_CASE("capacitive coupling flags the dispersive regime for resonator-mediated coupling") {
    CouplingSpec s;
    s.kind = CouplingKind::via_resonator;
    s.g1 = s.g2 = units::mhz_to_rad(100);
    s.delta1 = s.delta2 = units::mhz_to_rad(-500);
    const double g = coupling_strength(s, 0, 0, 0, 0);
    CHECK(std::isfinite(g));
    CHECK(s.regime_warning);
    s.delta1 = s.delta2 = units::mhz_to_rad(-2000);
    coupling_strength(s, 0, 0, 0, 0);
    CHECK_FALSE(s.regime_warning);
}

// test_gates.cpp — gate algebra, virtual Z, identities, iSWAP, CPHASE and cross resonance

#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "sqsim/linalg.hpp"
#include "sqsim/pulse.hpp"
#include "sqsim/twoqubit.hpp"

using namespace sqsim;
using namespace sqsim::gates;

namespace {

TransmonPair test_pair(double g_mhz) {
    device::QubitCircuitParams q1;
    q1.kind = device::QubitKind::split_transmon;
    q1.E_C = 0.25;
    q1.E_J = 19.5;
    device::QubitCircuitParams q2;
    q2.E_C = 0.25;
    q2.E_J = 13.78;
    return make_transmon_pair(q1, q2, units::mhz_to_rad(g_mhz));
}

} // namespace

TEST_CASE("single-qubit rotations follow cos(theta/2) I - i sin(theta/2) n.sigma") {
    const Mat X = la::pauli_x(), Z = la::pauli_z();
    CHECK(la::op_norm(x_gate(kPi).unitary - cd(0, -1) * X) < 1e-14);
    CHECK(la::op_norm(z_gate(kPi / 2).unitary - la::expm_herm(0.5 * Z, kPi / 2)) < 1e-14);
    CHECK(la::phase_distance(hadamard().unitary * hadamard().unitary, la::eye(2)) < 1e-14);
    CHECK(la::phase_distance(s_gate().unitary * s_gate().unitary, z_gate(kPi).unitary) < 1e-14);
    CHECK(la::phase_distance(t_gate().unitary * t_gate().unitary, s_gate().unitary) < 1e-14);
}

TEST_CASE("compose applies the first element first") {
    std::vector<GateOp> seq{x_gate(kPi / 2), z_gate(kPi / 3)};
    CHECK(la::op_norm(compose(seq, 1) - z_gate(kPi / 3).unitary * x_gate(kPi / 2).unitary) < 1e-14);
    // qubit 0 is the most significant bit
    const Mat E = embed(x_gate(kPi, 0), 2);
    CHECK(la::op_norm(E - la::kron(x_gate(kPi).unitary, la::eye(2))) < 1e-14);
}

TEST_CASE("ZXZ Euler angles round-trip and the two-pulse sequence reproduces them") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const double th = kPi * U(rng), ph = kTwoPi * U(rng) - kPi, la_ = kTwoPi * U(rng) - kPi;
        const Mat M = euler_zxz(th, ph, la_);
        auto a = euler_zxz_angles(M);
        CHECK(la::phase_distance(euler_zxz(a[0], a[1], a[2]), M) < 1e-10);
        CHECK(la::phase_distance(compose(any_su2_sequence(th, ph, la_), 1), M) < 1e-10);
    }
}

TEST_CASE("virtual Z compilation removes every Z and preserves the operator") {
    std::vector<GateOp> seq{z_gate(0.3, 0), x_gate(kPi / 2, 0), cz_phi(1.1), z_gate(-0.7, 1), y_gate(0.4, 1),
                            cnot(0, 1), z_gate(1.9, 0), x_gate(0.8, 0)};
    auto c = virtual_z_compile(seq);
    CHECK(c.physical_z_count == 0);
    for (const auto& op : c.ops) CHECK(op.name != "Z");
    CHECK(la::phase_distance(compiled_unitary(c, 2), compose(seq, 2)) < 1e-12);
}

TEST_CASE("gate identities hold up to a global phase") {
    CHECK(synthesize_identity(Identity::cnot_from_cphase).distance < 1e-12);
    CHECK(synthesize_identity(Identity::cnot_from_iswap).distance < 1e-12);
    for (double phi : {0.3, 1.2, kPi}) {
        CHECK(synthesize_identity(Identity::uzz_from_czphi_v1, phi).distance < 1e-12);
        CHECK(synthesize_identity(Identity::uzz_from_czphi_v2, phi).distance < 1e-12);
    }
    for (int n : {2, 3, 4}) CHECK(synthesize_identity(Identity::ghz_circuit, n).distance < 1e-12);
}

TEST_CASE("gate fidelity is one for equal operators and phase-insensitive") {
    const Mat U = cnot().unitary;
    CHECK(gate_fidelity(U, U) == doctest::Approx(1.0));
    CHECK(gate_fidelity(std::exp(kI * 0.7) * U, U) == doctest::Approx(1.0));
    CHECK(gate_fidelity(la::eye(4), cphase().unitary) < 1.0);
}

TEST_CASE("iSWAP: swap period pi/g on resonance and phase-corrected propagator") {
    auto pr = test_pair(20.0);
    const double phi = iswap_bias(pr);
    CHECK(pr.q1.omega01(phi) == doctest::Approx(pr.w2).epsilon(1e-8));
    auto tau = pulse::linspace(0.0, 2.0 * kPi / pr.g, 41);
    auto ch = iswap_chevron(pr, {phi}, tau, 4);
    for (size_t k = 0; k < tau.size(); ++k)
        CHECK(ch.p01[0][k] == doctest::Approx(std::pow(std::sin(pr.g * tau[k]), 2)).epsilon(1e-3).scale(1.0));
    // full transfer at pi/2g, return at pi/g
    const Mat U = iswap_gate(pr, kPi / (2 * pr.g), phi, true);
    CHECK(gate_fidelity(U, iswap_unitary(pr.g, kPi / (2 * pr.g)).unitary) > 1 - 1e-6);
    // detuned excursion swaps only partially
    auto far = iswap_chevron(pr, {phi - 0.1}, {kPi / (2 * pr.g)}, 4);
    CHECK(far.p01[0][0] < 0.5);
}

TEST_CASE("CPHASE: accumulated phase is additive and matches the zeta integral away from the crossing") {
    auto pr = test_pair(20.0);
    pr.phi_idle = pr.q1.phi_for_omega01(units::ghz_to_rad(5.6));
    const double phc = cphase_crossing(pr);
    // a bias where |11> and |20> are still detuned by many g
    const double phi_p = pr.phi_idle + 0.5 * (phc - pr.phi_idle);
    auto a = raised_cosine_trajectory(pr.phi_idle, phi_p, 40.0, 8.0);
    auto b = raised_cosine_trajectory(pr.phi_idle, phi_p, 80.0, 8.0);
    const double za = zeta_integral(pr, a), zb = zeta_integral(pr, b), zab = zeta_integral(pr, concatenate(a, b));
    CHECK(zab == doctest::Approx(za + zb).epsilon(1e-3));
    auto ra = cphase_unitary(pr, a), rb = cphase_unitary(pr, b), rab = cphase_unitary(pr, concatenate(a, b));
    CHECK(std::remainder(rab.phase - ra.phase - rb.phase, kTwoPi) == doctest::Approx(0.0).epsilon(0.02));
    CHECK(std::abs(ra.phase) == doctest::Approx(std::abs(za)).epsilon(0.03));
    CHECK(ra.leakage < 1e-3);
}

TEST_CASE("CPHASE design reaches a pi conditional phase with small leakage") {
    auto pr = test_pair(20.0);
    pr.phi_idle = pr.q1.phi_for_omega01(units::ghz_to_rad(5.38));
    auto d = cphase_trajectory(pr, kPi, 60.0, 8.0, 0.05, TrajectoryShape::fast_adiabatic);
    CHECK(std::abs(d.zeta_integral) == doctest::Approx(kPi).epsilon(1e-3));
    auto r = cphase_unitary(pr, d.trajectory);
    CHECK(std::abs(std::remainder(r.phase - kPi, kTwoPi)) < 0.02);
    CHECK(r.leakage < 0.01);
    CHECK(gate_fidelity(r.gate.unitary, cphase().unitary) > 0.999);
}

TEST_CASE("cross-resonance rates agree with a nine-level dressed-state computation") {
    const double D = units::mhz_to_rad(200), a = units::mhz_to_rad(-330), A = units::mhz_to_rad(20);
    for (double ratio : {0.01, 0.03}) {
        const double g = ratio * D;
        auto p = cr_effective_params(g, D, a, a, 0.0, A);
        auto [r0, r1] = oracle::cr_rabi_rates(g, D, a, a, A);
        CHECK(std::abs(p.rabi_control0) == doctest::Approx(r0).epsilon(0.03));
        CHECK(std::abs(p.rabi_control1) == doctest::Approx(r1).epsilon(0.03));
        CHECK(std::abs(p.rabi_control0) != doctest::Approx(std::abs(p.rabi_control1)));
    }
}

TEST_CASE("cross-resonance Hamiltonian is Hermitian and the simulation yields a differential phase") {
    const double D = units::mhz_to_rad(200), a = units::mhz_to_rad(-330), A = units::mhz_to_rad(26);
    auto p = cr_effective_params(units::mhz_to_rad(3.8), D, a, a, 0.03, A);
    CHECK(la::is_hermitian(cr_hamiltonian(p, D, A)));
    auto tr = cr_simulate(p, D, A, pulse::linspace(0.0, 400.0, 2001));
    CHECK(tr.t_pi > 150.0);
    CHECK(tr.t_pi < 250.0);
}

TEST_CASE("bSWAP rate vanishes without drive and scales quadratically with the drive") {
    const double g = units::mhz_to_rad(5), D = units::mhz_to_rad(500), a = units::mhz_to_rad(-300);
    CHECK(bswap_rate(0.0, g, D, a, a, 1.0) == doctest::Approx(0.0));
    const double r1 = bswap_rate(0.01, g, D, a, a, 1.0), r2 = bswap_rate(0.02, g, D, a, a, 1.0);
    CHECK(std::abs(r2 / r1) == doctest::Approx(4.0).epsilon(1e-10));
}

// gates.cpp — ideal gates, virtual-Z compilation, gate identities, CR and bSWAP models

#include "sqsim/gates.hpp"

#include <cmath>

#include "sqsim/linalg.hpp"

namespace sqsim::gates {

namespace {

GateOp one(const std::string& name, int q, Mat U, std::map<std::string, double> params = {}) {
    return GateOp{name, {q}, std::move(U), std::move(params)};
}

GateOp two(const std::string& name, int q0, int q1, Mat U, std::map<std::string, double> params = {}) {
    return GateOp{name, {q0, q1}, std::move(U), std::move(params)};
}

Mat diag4(cd a, cd b, cd c, cd d) {
    Mat U = Mat::Zero(4, 4);
    U(0, 0) = a;
    U(1, 1) = b;
    U(2, 2) = c;
    U(3, 3) = d;
    return U;
}

} // namespace

GateOp su2_gate(const std::array<double, 3>& n, double theta, int qubit) {
    double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(norm - 1.0) > 1e-9) throw Error(ErrorCode::invalid_params, "rotation axis must be a unit vector");
    Mat ns = n[0] * la::pauli_x() + n[1] * la::pauli_y() + n[2] * la::pauli_z();
    Mat U = std::cos(theta / 2) * la::eye(2) - kI * std::sin(theta / 2) * ns;
    return one("R", qubit, U, {{"theta", theta}, {"nx", n[0]}, {"ny", n[1]}, {"nz", n[2]}});
}

GateOp x_gate(double theta, int q) {
    auto g = su2_gate({1, 0, 0}, theta, q);
    return one("X", q, g.unitary, {{"theta", theta}});
}

GateOp y_gate(double theta, int q) {
    auto g = su2_gate({0, 1, 0}, theta, q);
    return one("Y", q, g.unitary, {{"theta", theta}});
}

GateOp z_gate(double theta, int q) {
    auto g = su2_gate({0, 0, 1}, theta, q);
    return one("Z", q, g.unitary, {{"theta", theta}});
}

GateOp hadamard(int q) {
    Mat U(2, 2);
    U << 1, 1, 1, -1;
    return one("H", q, U / std::sqrt(2.0));
}

GateOp s_gate(int q) {
    Mat U = Mat::Identity(2, 2);
    U(1, 1) = kI;
    return one("S", q, U);
}

GateOp t_gate(int q) {
    Mat U = Mat::Identity(2, 2);
    U(1, 1) = std::exp(kI * kPi / 4.0);
    return one("T", q, U);
}

GateOp phase_gate(double gamma, int q) {
    return one("Ph", q, std::exp(kI * gamma) * la::eye(2), {{"gamma", gamma}});
}

GateOp cnot(int c, int t) {
    Mat U = Mat::Zero(4, 4);
    U(0, 0) = U(1, 1) = 1;
    U(2, 3) = U(3, 2) = 1;
    return two("CNOT", c, t, U);
}

GateOp cz_phi(double phi, int q0, int q1) {
    return two("CZ", q0, q1, diag4(1, 1, 1, std::exp(-kI * phi)), {{"phi", phi}});
}

GateOp cphase(int q0, int q1) { return cz_phi(kPi, q0, q1); }

GateOp iswap_unitary(double g, double t, int q0, int q1) {
    if (!(g > 0)) throw Error(ErrorCode::invalid_params, "g must be positive");
    Mat U = diag4(1, std::cos(g * t), std::cos(g * t), 1);
    U(1, 2) = U(2, 1) = -kI * std::sin(g * t);
    return two("iSWAP", q0, q1, U, {{"g", g}, {"t", t}});
}

GateOp zx_unitary(double theta, int q0, int q1) {
    Mat U = la::expm_herm(la::kron(la::pauli_z(), la::pauli_x()), theta / 2);
    return two("ZX", q0, q1, U, {{"theta", theta}});
}

GateOp bswap_unitary(double theta, double phi, int q0, int q1) {
    Mat U = diag4(std::cos(theta), 1, 1, std::cos(theta));
    U(0, 3) = U(3, 0) = -kI * std::exp(-2.0 * kI * phi) * std::sin(theta);
    return two("bSWAP", q0, q1, U, {{"theta", theta}, {"phi", phi}});
}

Mat euler_zxz(double theta, double phi, double lambda) {
    return z_gate(phi).unitary * x_gate(theta).unitary * z_gate(lambda).unitary;
}

std::array<double, 3> euler_zxz_angles(const Mat& U) {
    if (U.rows() != 2 || U.cols() != 2) throw Error(ErrorCode::invalid_params, "expected a 2x2 unitary");
    Mat V = U / std::sqrt(U.determinant());
    double theta = 2.0 * std::atan2(std::abs(V(1, 0)), std::abs(V(0, 0)));
    double sum = 2.0 * std::arg(V(1, 1));
    double diff = std::abs(V(1, 0)) > 1e-14 ? 2.0 * std::arg(kI * V(1, 0)) : 0.0;
    if (std::abs(V(0, 0)) < 1e-14) sum = 0.0;
    return {theta, 0.5 * (sum + diff), 0.5 * (sum - diff)};
}

std::vector<GateOp> any_su2_sequence(double theta, double phi, double lambda, int q) {
    return {z_gate(lambda - kPi / 2, q), x_gate(kPi / 2, q), z_gate(kPi - theta, q), x_gate(kPi / 2, q),
            z_gate(phi - kPi / 2, q)};
}

Mat embed(const GateOp& g, int n) {
    const int k = int(g.qubits.size());
    if (g.unitary.rows() != (1 << k)) throw Error(ErrorCode::invalid_params, "gate size does not match qubits");
    for (int q : g.qubits)
        if (q < 0 || q >= n) throw Error(ErrorCode::invalid_params, "qubit index out of range");
    const int dim = 1 << n;
    Mat U = Mat::Zero(dim, dim);
    auto bit = [n](int idx, int q) { return (idx >> (n - 1 - q)) & 1; };
    for (int col = 0; col < dim; ++col) {
        int sub_in = 0;
        for (int j = 0; j < k; ++j) sub_in = (sub_in << 1) | bit(col, g.qubits[j]);
        for (int sub_out = 0; sub_out < (1 << k); ++sub_out) {
            int row = col;
            for (int j = 0; j < k; ++j) {
                int mask = 1 << (n - 1 - g.qubits[j]);
                int b = (sub_out >> (k - 1 - j)) & 1;
                row = b ? (row | mask) : (row & ~mask);
            }
            U(row, col) += g.unitary(sub_out, sub_in);
        }
    }
    return U;
}

Mat compose(const std::vector<GateOp>& seq, int n) {
    Mat U = Mat::Identity(1 << n, 1 << n);
    for (auto& g : seq) U = embed(g, n) * U;
    return U;
}

CompiledSequence virtual_z_compile(const std::vector<GateOp>& seq) {
    CompiledSequence out;
    for (auto& g : seq) {
        if (g.qubits.size() == 1) {
            int q = g.qubits[0];
            if (g.name == "Z") {
                out.frames[q] += g.params.at("theta");
                continue;
            }
            if (g.name != "X" && g.name != "Y")
                throw Error(ErrorCode::compile_error, "unsupported single-qubit gate " + g.name);
            double f = out.frames[q];
            GateOp p = g;
            p.unitary = z_gate(-f).unitary * g.unitary * z_gate(f).unitary;
            p.params["phase_offset"] = f;
            out.ops.push_back(p);
        } else if (g.qubits.size() == 2) {
            Mat F = la::kron(z_gate(out.frames[g.qubits[0]]).unitary, z_gate(out.frames[g.qubits[1]]).unitary);
            GateOp p = g;
            p.unitary = F.adjoint() * g.unitary * F;
            out.ops.push_back(p);
        } else {
            throw Error(ErrorCode::compile_error, "unsupported gate arity for " + g.name);
        }
    }
    return out;
}

Mat compiled_unitary(const CompiledSequence& c, int n, bool include_frames) {
    Mat U = compose(c.ops, n);
    if (include_frames)
        for (auto& [q, f] : c.frames) U = embed(z_gate(f, q), n) * U;
    return U;
}

IdentityReport synthesize_identity(Identity which, double param) {
    IdentityReport r;
    switch (which) {
    case Identity::cnot_from_cphase:
        r.name = "cnot_from_cphase";
        r.sequence = {hadamard(1), cphase(0, 1), hadamard(1)};
        r.target = cnot(0, 1).unitary;
        break;
    case Identity::cnot_from_iswap: {
        // circuit read left to right in time; single-qubit angles in the mirrored rotation sense
        r.name = "cnot_from_iswap";
        GateOp sw = iswap_unitary(1.0, kPi / 2);
        r.sequence = {x_gate(-kPi / 2, 1), z_gate(kPi / 2, 0), z_gate(-kPi / 2, 1), sw, x_gate(-kPi / 2, 0), sw,
                      z_gate(-kPi / 2, 1)};
        r.target = cnot(0, 1).unitary;
        break;
    }
    case Identity::uzz_from_czphi_v1:
        r.name = "uzz_from_czphi_v1";
        // with CZ_phi = diag(1,1,1,e^{-i phi}) the circuit yields U_ZZ(-phi), so CZ_{-phi} is emitted
        r.sequence = {x_gate(kPi, 0), cz_phi(-param), x_gate(kPi, 0), x_gate(kPi, 1), cz_phi(-param), x_gate(kPi, 1)};
        r.target = la::expm_herm(la::kron(la::pauli_z(), la::pauli_z()), param / 2);
        break;
    case Identity::uzz_from_czphi_v2: {
        r.name = "uzz_from_czphi_v2";
        // target rotation angle phi for Z_theta = exp(-i theta sigma_z / 2)
        r.sequence = {cnot(0, 1), z_gate(param, 1), cnot(0, 1)};
        r.target = la::expm_herm(la::kron(la::pauli_z(), la::pauli_z()), param / 2);
        break;
    }
    case Identity::ghz_circuit: {
        int n = std::max(2, int(std::lround(param)));
        r.name = "ghz_circuit";
        r.n_qubits = n;
        r.sequence.push_back(hadamard(0));
        for (int q = 0; q + 1 < n; ++q) {
            r.sequence.push_back(hadamard(q + 1));
            r.sequence.push_back(cphase(q, q + 1));
            r.sequence.push_back(hadamard(q + 1));
        }
        Vec ghz = Vec::Zero(1 << n);
        ghz(0) = ghz((1 << n) - 1) = 1.0 / std::sqrt(2.0);
        r.composed = compose(r.sequence, n);
        r.target = ghz;
        Vec out = r.composed.col(0);
        cd ov = ghz.dot(out);
        r.distance = (out - std::exp(kI * std::arg(ov)) * ghz).norm();
        return r;
    }
    }
    r.composed = compose(r.sequence, r.n_qubits);
    r.distance = la::phase_distance(r.composed, r.target);
    return r;
}

double gate_fidelity(const Mat& Ua, const Mat& Ui) {
    if (Ua.rows() != Ui.rows() || Ua.cols() != Ui.cols() || Ua.rows() != Ua.cols())
        throw Error(ErrorCode::invalid_params, "dimension mismatch");
    const double d = double(Ua.rows());
    double tr = std::norm((Ui.adjoint() * Ua).trace());
    return (tr + d) / (d * (d + 1));
}

// ---- cross resonance ----

CREffectiveParams cr_effective_params(double g, double D, double a1, double a2, double eta, double drive) {
    if (D == 0.0) throw Error(ErrorCode::invalid_regime, "Delta12 = 0");
    auto guard = [D](double a) {
        if (std::abs(a - D) < 1e-12 * std::abs(D) || std::abs(a + D) < 1e-12 * std::abs(D))
            throw Error(ErrorCode::invalid_regime, "pole alpha = +/-Delta12");
    };
    guard(a1);
    guard(a2);
    CREffectiveParams p;
    double r = g / D;
    // upper sign: mu^+ = +(g/D) a/(a - D); lower sign: mu^- = -(g/D) a/(a + D)
    p.mu1_plus = r * a1 / (a1 - D);
    p.mu1_minus = -r * a1 / (a1 + D);
    p.nu1_plus = r * (-D) / (a1 - D);
    p.nu1_minus = -r * D / (a1 + D);
    p.mu2_plus = r * a2 / (a2 - D);
    p.mu2_minus = -r * a2 / (a2 + D);
    p.nu2_plus = r * (-D) / (a2 - D);
    p.nu2_minus = -r * D / (a2 + D);
    p.eta = eta;
    p.rabi_control0 = drive * (p.nu1_minus + p.mu1_minus);
    p.rabi_control1 = drive * (p.nu1_minus - p.mu1_minus);
    return p;
}

Mat cr_hamiltonian(const CREffectiveParams& p, double delta12, double A) {
    Mat I = la::eye(2), X = la::pauli_x(), Z = la::pauli_z();
    return -0.5 * delta12 * la::kron(Z, I) +
           0.5 * A * (la::kron(X, I) + (p.nu1_minus + p.eta) * la::kron(I, X) + p.mu1_minus * la::kron(Z, X));
}

CRTrace cr_simulate(const CREffectiveParams& p, double delta12, double A, const std::vector<double>& t) {
    if (t.size() < 3) throw Error(ErrorCode::invalid_grid, "need at least 3 time points");
    CRTrace tr;
    tr.t = t;
    auto e = la::eigh(cr_hamiltonian(p, delta12, A));
    Mat I = la::eye(2);
    Mat Y2 = la::kron(I, la::pauli_y()), Z2 = la::kron(I, la::pauli_z());
    for (int c = 0; c < 2; ++c) {
        Vec psi0 = Vec::Zero(4);
        psi0(2 * c) = 1.0;
        Vec coef = e.vectors.adjoint() * psi0;
        double prev = 0.0, offset = 0.0;
        for (size_t k = 0; k < t.size(); ++k) {
            Vec ph(4);
            for (int j = 0; j < 4; ++j) ph(j) = std::exp(-kI * e.values(j) * t[k]) * coef(j);
            Vec psi = e.vectors * ph;
            double y = psi.dot(Y2 * psi).real(), z = psi.dot(Z2 * psi).real();
            double a = std::atan2(y, z);
            if (k > 0) {
                double d = a - prev;
                if (d > kPi) offset -= kTwoPi;
                if (d < -kPi) offset += kTwoPi;
            }
            prev = a;
            tr.y2[c].push_back(y);
            tr.z2[c].push_back(z);
            tr.angle[c].push_back(a + offset);
        }
        // least-squares slope of the unwrapped angle; rotation about +x moves the angle negatively
        double n = double(t.size()), st = 0, sa = 0, stt = 0, sta = 0;
        for (size_t k = 0; k < t.size(); ++k) {
            st += t[k];
            sa += tr.angle[c][k];
            stt += t[k] * t[k];
            sta += t[k] * tr.angle[c][k];
        }
        tr.rabi_rate[c] = -(n * sta - st * sa) / (n * stt - st * st);
    }
    for (size_t k = 0; k < t.size(); ++k) {
        tr.differential_phase.push_back(tr.angle[1][k] - tr.angle[0][k]);
        if (tr.t_pi < 0 && k > 0 && std::abs(tr.differential_phase[k]) >= kPi) {
            double a = std::abs(tr.differential_phase[k - 1]), b = std::abs(tr.differential_phase[k]);
            tr.t_pi = t[k - 1] + (kPi - a) / (b - a) * (t[k] - t[k - 1]);
        }
    }
    return tr;
}

double bswap_rate(double W, double g, double D, double a1, double a2, double gam) {
    if (D == 0.0 || a1 + D == 0.0 || a2 - D == 0.0) throw Error(ErrorCode::invalid_regime, "bSWAP rate pole");
    double as = a1 + a2;
    return -2.0 * g * W * W * (-g * gam * as + gam * gam * a2 * (a1 + D) + a1 * (a2 - D)) /
           ((a1 + D) * (a2 - D) * D * D);
}

} // namespace sqsim::gates

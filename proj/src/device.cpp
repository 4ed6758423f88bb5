// device.cpp — qubit Hamiltonian builders and derived parameters

#include "sqsim/device.hpp"

#include <algorithm>
#include <cmath>

#include "sqsim/linalg.hpp"

namespace sqsim::device {

void QubitCircuitParams::validate() const {
    if (!(E_C > 0)) throw Error(ErrorCode::invalid_params, "E_C must be positive");
    if (!(E_J >= 0)) throw Error(ErrorCode::invalid_params, "E_J must be non-negative");
    if (std::abs(d) > 1) throw Error(ErrorCode::invalid_params, "|d| must not exceed 1");
    if (!(gamma > 0)) throw Error(ErrorCode::invalid_params, "gamma must be positive");
    if (N < 1) throw Error(ErrorCode::invalid_params, "N must be >= 1");
}

namespace {

Mat charge_hamiltonian(double E_C, double E_J, double n_g, int cutoff) {
    const int dim = 2 * cutoff + 1;
    Mat H = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        double n = k - cutoff;
        H(k, k) = 4.0 * E_C * (n - n_g) * (n - n_g);
        if (k + 1 < dim) {
            H(k, k + 1) = -0.5 * E_J;
            H(k + 1, k) = -0.5 * E_J;
        }
    }
    return H;
}

double omega01_of(const Mat& H) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
    return kTwoPi * (es.eigenvalues()(1) - es.eigenvalues()(0));
}

} // namespace

HermitianOperator build_transmon_hamiltonian(const QubitCircuitParams& p, int cutoff) {
    if (cutoff < 5) throw Error(ErrorCode::invalid_truncation, "charge cutoff must be >= 5");
    p.validate();
    HermitianOperator op;
    op.H = charge_hamiltonian(p.E_C, p.E_J, p.n_g, cutoff);
    op.basis.kind = BasisKind::charge;
    op.basis.charge_cutoff = cutoff;
    return op;
}

double effective_josephson_energy(double E_J_sum, double d, FluxBias bias) {
    if (std::abs(d) > 1) throw Error(ErrorCode::invalid_params, "|d| must not exceed 1");
    double c = std::cos(bias.phi_e), s = std::sin(bias.phi_e);
    return E_J_sum * std::sqrt(c * c + d * d * s * s);
}

double asymmetry_from_ratio(double gamma) { return (gamma - 1.0) / (gamma + 1.0); }

HermitianOperator build_split_transmon_hamiltonian(const QubitCircuitParams& p, FluxBias bias, int cutoff) {
    QubitCircuitParams q = p;
    q.kind = QubitKind::transmon;
    q.E_J = effective_josephson_energy(p.E_J, p.d, bias);
    return build_transmon_hamiltonian(q, cutoff);
}

// ---- flux qubit ----

double flux_qubit_potential(const QubitCircuitParams& p, FluxBias bias, double phi) {
    return -p.E_J * std::cos(2.0 * phi + bias.phi_e) - 2.0 * p.gamma * p.E_J * std::cos(phi);
}

namespace {

int sector_points(const PhaseGrid& g) {
    if (g.points < 201 || g.min > -2 * kPi + 1e-12 || g.max < 2 * kPi - 1e-12)
        throw Error(ErrorCode::invalid_truncation, "phase grid must cover [-2pi, 2pi] with >= 201 points");
    double h = (g.max - g.min) / (g.points - 1);
    double m = kTwoPi / h;
    int mi = int(std::lround(m));
    if (std::abs(m - mi) > 1e-9 * m)
        throw Error(ErrorCode::invalid_grid, "grid spacing must divide 2pi");
    return mi;
}

Mat flux_grid_matrix(const QubitCircuitParams& p, FluxBias bias, int m) {
    const double h = kTwoPi / m;
    const double kin = 4.0 * p.E_C / (h * h);
    Mat H = Mat::Zero(m, m);
    for (int k = 0; k < m; ++k) {
        double phi = -kPi + k * h;
        H(k, k) = 2.0 * kin + flux_qubit_potential(p, bias, phi);
        H(k, (k + 1) % m) += -kin;
        H((k + 1) % m, k) += -kin;
    }
    return H;
}

} // namespace

std::vector<double> flux_qubit_grid(const PhaseGrid& g) {
    int m = sector_points(g);
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k) out[k] = -kPi + k * kTwoPi / m;
    return out;
}

HermitianOperator build_flux_qubit_hamiltonian(const QubitCircuitParams& p, FluxBias bias, PhaseGrid grid) {
    p.validate();
    int m = sector_points(grid);
    HermitianOperator op;
    op.H = flux_grid_matrix(p, bias, m);
    // grid-doubling check
    double w = omega01_of(op.H);
    double w2 = omega01_of(flux_grid_matrix(p, bias, 2 * m));
    if (std::abs(w - w2) > 1e-2 * std::abs(w2))
        throw Error(ErrorCode::invalid_truncation, "phase grid too coarse (omega01 changes > 1e-2 under refinement)");
    op.basis.kind = BasisKind::phase_grid;
    op.basis.grid_min = grid.min;
    op.basis.grid_max = grid.max;
    op.basis.grid_points = grid.points;
    return op;
}

HermitianOperator build_flux_qubit_charge_hamiltonian(const QubitCircuitParams& p, FluxBias bias, int cutoff) {
    p.validate();
    if (cutoff < 5) throw Error(ErrorCode::invalid_truncation, "charge cutoff must be >= 5");
    const int dim = 2 * cutoff + 1;
    Mat H = Mat::Zero(dim, dim);
    const cd ph = std::exp(kI * bias.phi_e);
    for (int k = 0; k < dim; ++k) {
        double n = k - cutoff;
        H(k, k) = 4.0 * p.E_C * n * n;
        if (k + 1 < dim) {
            H(k + 1, k) += -p.gamma * p.E_J;
            H(k, k + 1) += -p.gamma * p.E_J;
        }
        // e^{i(2phi+phi_e)} = e^{i phi_e} |n+2><n|
        if (k + 2 < dim) {
            H(k + 2, k) += -0.5 * p.E_J * ph;
            H(k, k + 2) += -0.5 * p.E_J * std::conj(ph);
        }
    }
    HermitianOperator op;
    op.H = H;
    op.basis.kind = BasisKind::charge;
    op.basis.charge_cutoff = cutoff;
    return op;
}

// ---- fluxonium ----

namespace {

Mat fluxonium_matrix(const QubitCircuitParams& p, FluxBias bias, int levels) {
    const double E_L = p.E_L();
    const double wp = std::sqrt(8.0 * p.E_C * E_L);
    const double phi0 = std::pow(2.0 * p.E_C / E_L, 0.25);
    const int big = levels + 40;
    Mat a = la::destroy(big);
    Mat phi = phi0 * (a + a.adjoint());
    la::Eig e = la::eigh(phi);
    Vec ph(big);
    for (int k = 0; k < big; ++k) ph(k) = std::exp(kI * e.values(k));
    Mat eiphi = e.vectors * ph.asDiagonal() * e.vectors.adjoint();
    Mat eiphi_t = eiphi.topLeftCorner(levels, levels);
    Mat cosp = 0.5 * (std::exp(kI * bias.phi_e) * eiphi_t + std::exp(-kI * bias.phi_e) * eiphi_t.adjoint());
    Mat H = -p.E_J * cosp;
    for (int k = 0; k < levels; ++k) H(k, k) += wp * (k + 0.5);
    return 0.5 * (H + H.adjoint());
}

} // namespace

HermitianOperator build_fluxonium_hamiltonian(const QubitCircuitParams& p, FluxBias bias, int levels) {
    if (levels < 20) throw Error(ErrorCode::invalid_truncation, "fluxonium needs >= 20 oscillator levels");
    p.validate();
    HermitianOperator op;
    op.H = fluxonium_matrix(p, bias, levels);
    double w = omega01_of(op.H);
    double w2 = omega01_of(fluxonium_matrix(p, bias, levels + 10));
    if (std::abs(w - w2) > 1e-6 * std::abs(w2))
        throw Error(ErrorCode::invalid_truncation, "fluxonium omega01 not converged at this level count");
    op.basis.kind = BasisKind::oscillator;
    op.basis.osc_levels = levels;
    return op;
}

// ---- spectra ----

Spectrum spectrum(const HermitianOperator& H, int k) {
    if (!la::is_hermitian(H.H)) throw Error(ErrorCode::invalid_operator, "operator is not Hermitian");
    if (k < 1 || k > H.dim()) throw Error(ErrorCode::invalid_params, "k out of range");
    Eigen::SelfAdjointEigenSolver<Mat> es(H.H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::numeric_failure, "eigensolver failed");
    Spectrum s;
    for (int i = 0; i < k; ++i) s.energies.push_back(es.eigenvalues()(i));
    if (k >= 2) s.omega_01 = kTwoPi * (s.energies[1] - s.energies[0]);
    if (k >= 3) {
        s.omega_12 = kTwoPi * (s.energies[2] - s.energies[1]);
        s.alpha = s.omega_12 - s.omega_01;
    }
    return s;
}

Mat eigenvectors(const HermitianOperator& H, int k) {
    if (!la::is_hermitian(H.H)) throw Error(ErrorCode::invalid_operator, "operator is not Hermitian");
    la::Eig e = la::eigh(H.H);
    return e.vectors.leftCols(k);
}

double transmon_charge_matrix_element(const QubitCircuitParams& p, int cutoff) {
    HermitianOperator op = build_transmon_hamiltonian(p, cutoff);
    Mat v = eigenvectors(op, 2);
    Mat n = Mat::Zero(op.dim(), op.dim());
    for (int k = 0; k < op.dim(); ++k) n(k, k) = double(k - cutoff);
    return std::abs((v.col(0).adjoint() * n * v.col(1))(0, 0));
}

Spectrum qubit_spectrum(const QubitCircuitParams& p, FluxBias bias, int k) {
    switch (p.kind) {
    case QubitKind::transmon: return spectrum(build_transmon_hamiltonian(p), k);
    case QubitKind::split_transmon: return spectrum(build_split_transmon_hamiltonian(p, bias), k);
    case QubitKind::flux_qubit: return spectrum(build_flux_qubit_hamiltonian(p, bias), k);
    case QubitKind::fluxonium: return spectrum(build_fluxonium_hamiltonian(p, bias), k);
    }
    throw Error(ErrorCode::invalid_params, "unknown qubit kind");
}

// ---- couplings ----

double coupling_strength(CouplingSpec& spec, double w1, double w2, double C1, double C2) {
    if (spec.kind == CouplingKind::direct_capacitive) {
        if (!(C1 > 0 && C2 > 0) || spec.C_qq < 0)
            throw Error(ErrorCode::invalid_params, "capacitances must be positive");
        spec.g = 0.5 * std::sqrt(w1 * w2) * spec.C_qq / (std::sqrt(spec.C_qq + C1) * std::sqrt(spec.C_qq + C2));
    } else {
        if (spec.delta1 == 0 || spec.delta2 == 0)
            throw Error(ErrorCode::invalid_regime, "zero qubit-bus detuning");
        spec.regime_warning = std::abs(spec.delta1) < 10 * std::abs(spec.g1) ||
                              std::abs(spec.delta2) < 10 * std::abs(spec.g2);
        spec.g = spec.g1 * spec.g2 * (spec.delta1 + spec.delta2) / (2.0 * spec.delta1 * spec.delta2);
    }
    return spec.g;
}

DispersiveParams dispersive_params(double g, double delta, double alpha) {
    double scale = std::max(std::abs(delta), std::abs(alpha));
    if (std::abs(delta) < 1e-6 * scale) throw Error(ErrorCode::invalid_regime, "pole at delta = 0");
    if (std::abs(delta + alpha) < 1e-6 * scale) throw Error(ErrorCode::invalid_regime, "pole at delta = -alpha");
    DispersiveParams d;
    d.lamb_shift = g * g / delta;
    d.stark_per_photon = 2.0 * g * g / delta;
    d.chi = (g * g / delta) / (1.0 + delta / alpha);
    d.n_crit = g == 0 ? std::numeric_limits<double>::infinity() : delta * delta / (4.0 * g * g);
    return d;
}

} // namespace sqsim::device

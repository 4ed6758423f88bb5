// oracles.hpp — independent reference computations used by the tests

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
constexpr double pi = 3.14159265358979323846;

// transmon asymptotics, energies in GHz
inline double transmon_omega01_asymptotic(double EJ, double EC) { return std::sqrt(8.0 * EJ * EC) - EC; }

// charge-basis Cooper-pair box, real symmetric, lowest k levels in GHz
inline std::vector<double> cooper_pair_box_levels(double EJ, double EC, double ng, int cutoff, int k) {
    const int n = 2 * cutoff + 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double q = i - cutoff - ng;
        H(i, i) = 4.0 * EC * q * q;
        if (i + 1 < n) H(i, i + 1) = H(i + 1, i) = -0.5 * EJ;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    std::vector<double> v(k);
    for (int i = 0; i < k; ++i) v[i] = es.eigenvalues()(i);
    return v;
}

// three-level transmon ladder x resonator (nmax photons), exchange coupling g with sqrt(n)
// matrix elements; chi = [(E11 - E10) - (E01 - E00)]/2, labels (qubit, photons) by max overlap
inline double ladder_chi(double wq, double alpha, double wr, double g, int nmax = 6) {
    const int nq = 3, nr = nmax + 1, dim = nq * nr;
    auto idx = [nr](int q, int n) { return q * nr + n; };
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int q = 0; q < nq; ++q)
        for (int n = 0; n < nr; ++n) {
            H(idx(q, n), idx(q, n)) = q * wq + 0.5 * alpha * q * (q - 1) + n * wr;
            if (q + 1 < nq && n > 0) {
                const double m = g * std::sqrt(double(q + 1)) * std::sqrt(double(n));
                H(idx(q + 1, n - 1), idx(q, n)) = H(idx(q, n), idx(q + 1, n - 1)) = m;
            }
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    auto energy = [&](int q, int n) {
        int best = 0;
        double ov = -1.0;
        for (int j = 0; j < dim; ++j) {
            const double o = std::pow(es.eigenvectors()(idx(q, n), j), 2);
            if (o > ov) {
                ov = o;
                best = j;
            }
        }
        return es.eigenvalues()(best);
    };
    return 0.5 * ((energy(1, 1) - energy(1, 0)) - (energy(0, 1) - energy(0, 0)));
}

// exp(+i (Theta/2) sigma_x) for H = -(Omega/2) V0 s(t) sigma_x, Theta = Omega V0 int s
inline Mat rabi_closed_form(double Theta) {
    Mat U(2, 2);
    U << std::cos(Theta / 2), cd(0, std::sin(Theta / 2)), cd(0, std::sin(Theta / 2)), std::cos(Theta / 2);
    return U;
}

// free induction and single-echo filter functions, x = omega tau
inline double filter_g0(double x) {
    if (x == 0.0) return 1.0;
    const double s = std::sin(x / 2) / (x / 2);
    return s * s;
}
inline double filter_g1(double x) {
    if (x == 0.0) return 0.0;
    const double s = std::sin(x / 4);
    return s * s * s * s / ((x / 4) * (x / 4));
}

// two three-level transmons with exchange g in the frame of qubit 2 (RWA). The qubit-2 Rabi rate for
// control c is 2|<c1|H_d|c0>| between dressed eigenstates of the undriven Hamiltonian, with
// H_d = (A/2)(a1 + a1^dag) the drive on qubit 1: exact in g, first order in the drive.
inline std::pair<double, double> cr_rabi_rates(double g, double delta12, double a1, double a2, double A) {
    const int n = 3, dim = 9;
    auto idx = [](int q1, int q2) { return 3 * q1 + q2; };
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim), Hd = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            H(idx(i, j), idx(i, j)) = i * delta12 + 0.5 * a1 * i * (i - 1) + 0.5 * a2 * j * (j - 1);
            if (i + 1 < n && j > 0) {
                const double m = g * std::sqrt(double(i + 1)) * std::sqrt(double(j));
                H(idx(i + 1, j - 1), idx(i, j)) = H(idx(i, j), idx(i + 1, j - 1)) = m;
            }
            if (i + 1 < n) Hd(idx(i + 1, j), idx(i, j)) = Hd(idx(i, j), idx(i + 1, j)) = 0.5 * A * std::sqrt(double(i + 1));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    auto dressed = [&](int q1, int q2) {
        int b = 0;
        double o = -1.0;
        for (int j = 0; j < dim; ++j) {
            const double ov = std::pow(es.eigenvectors()(idx(q1, q2), j), 2);
            if (ov > o) {
                o = ov;
                b = j;
            }
        }
        return Eigen::VectorXd(es.eigenvectors().col(b));
    };
    auto rate = [&](int c) { return 2.0 * std::abs(dressed(c, 1).dot(Hd * dressed(c, 0))); };
    return {rate(0), rate(1)};
}

// misassignment of two isotropic Gaussian clusters with per-quadrature sigma and mean distance d
inline double gaussian_overlap_error(double d, double sigma) { return 0.5 * std::erfc(d / (2.0 * std::sqrt(2.0) * sigma)); }

inline double binomial_sigma(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n); }

} // namespace oracle

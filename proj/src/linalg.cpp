// linalg.cpp — dense helpers

#include "sqsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace sqsim {

const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::invalid_truncation: return "invalid-truncation";
    case ErrorCode::invalid_operator: return "invalid-operator";
    case ErrorCode::invalid_regime: return "invalid-regime";
    case ErrorCode::invalid_grid: return "invalid-grid";
    case ErrorCode::invalid_rates: return "invalid-rates";
    case ErrorCode::numeric_failure: return "numeric-failure";
    case ErrorCode::quadrature_failure: return "quadrature-failure";
    case ErrorCode::fit_failure: return "fit-failure";
    case ErrorCode::compile_error: return "compile-error";
    case ErrorCode::statistics_error: return "statistics-error";
    case ErrorCode::insufficient_window: return "insufficient-window";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::config_error: return "config-error";
    }
    return "error";
}

bool is_numeric(ErrorCode c) {
    switch (c) {
    case ErrorCode::numeric_failure:
    case ErrorCode::quadrature_failure:
    case ErrorCode::fit_failure:
    case ErrorCode::statistics_error:
    case ErrorCode::invalid_truncation:
        return true;
    default:
        return false;
    }
}

namespace la {

Mat pauli_x() {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat pauli_y() {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = -kI;
    m(1, 0) = kI;
    return m;
}

Mat pauli_z() {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Mat eye(int n) { return Mat::Identity(n, n); }

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

Mat destroy(int n) {
    Mat a = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

double max_abs(const Mat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

bool is_hermitian(const Mat& H, double rel) {
    if (H.rows() != H.cols()) return false;
    double scale = max_abs(H);
    double dev = max_abs(H - H.adjoint());
    return dev <= rel * (scale > 0 ? scale : 1.0);
}

double op_norm(const Mat& A) {
    Eigen::JacobiSVD<Mat> svd(A);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Eig eigh(const Mat& H) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::numeric_failure, "eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

Mat expm_herm(const Mat& H, double t) {
    Eig e = eigh(H);
    Vec ph(e.values.size());
    for (int k = 0; k < e.values.size(); ++k) ph(k) = std::exp(-kI * e.values(k) * t);
    return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

double phase_distance(const Mat& U, const Mat& V) {
    cd tr = (V.adjoint() * U).trace();
    cd ph = std::abs(tr) > 0 ? tr / std::abs(tr) : cd(1.0);
    return op_norm(U - ph * V);
}

std::vector<int> bare_to_dressed(const Mat& vecs) {
    const int n = int(vecs.rows());
    std::vector<int> map(n, -1);
    std::vector<bool> used(vecs.cols(), false);
    // greedy on largest overlaps first
    std::vector<std::tuple<double, int, int>> cand;
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < vecs.cols(); ++d) cand.emplace_back(std::norm(vecs(b, d)), b, d);
    std::sort(cand.begin(), cand.end(), [](auto& x, auto& y) { return std::get<0>(x) > std::get<0>(y); });
    for (auto& [w, b, d] : cand) {
        if (map[b] >= 0 || used[d]) continue;
        map[b] = d;
        used[d] = true;
    }
    return map;
}

} // namespace la
} // namespace sqsim

// linalg.hpp — small dense helpers: Paulis, Kronecker products, Hermitian exponentials

#pragma once

#include <vector>

#include "sqsim/common.hpp"

namespace sqsim::la {

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat eye(int n);
Mat kron(const Mat& a, const Mat& b);
Mat destroy(int n); // truncated ladder, a|k> = sqrt(k)|k-1>

// ||H - H^dag||_max <= rel * ||H||_max (absolute when H is zero)
bool is_hermitian(const Mat& H, double rel = 1e-12);
double max_abs(const Mat& A);
double op_norm(const Mat& A); // largest singular value

// exp(-i H t) for Hermitian H
Mat expm_herm(const Mat& H, double t);

// min over global phase of the operator-norm distance ||U - e^{i g} V||
double phase_distance(const Mat& U, const Mat& V);

// eigenpairs of a Hermitian matrix, ascending
struct Eig {
    Eigen::VectorXd values;
    Mat vectors;
};
Eig eigh(const Mat& H);

// dressed index of each bare basis state: argmax over eigenvectors of |<bare|v>|^2
std::vector<int> bare_to_dressed(const Mat& eigvecs);

} // namespace sqsim::la

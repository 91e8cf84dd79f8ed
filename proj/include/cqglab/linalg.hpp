#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace cqg {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

CMatrix kron(const CMatrix& a, const CMatrix& b);
RMatrix kron(const RMatrix& a, const RMatrix& b);
RMatrix kron_power(const RMatrix& a, int n);

// Swap of the two legs of C^a ⊗ C^b, as a map to C^b ⊗ C^a.
RMatrix flip_operator(int a, int b);

double trace_norm(const CMatrix& m);
double hs_norm(const CMatrix& m);
double operator_norm(const CMatrix& m);
double operator_norm(const RMatrix& m);

// Number of singular values above tol * max(1, largest singular value).
int numerical_rank(const CMatrix& m, double tol);

// Orthonormal basis of the column span, from the SVD.
CMatrix orthonormal_span(const CMatrix& m, double tol);

// Largest principal angle between two subspaces given by orthonormal bases of
// equal dimension. Computed from sines so that tiny angles stay resolvable.
double max_principal_angle(const CMatrix& q1, const CMatrix& q2);

// Smallest eigenvalue of (m + m*)/2.
double min_hermitian_eigenvalue(const CMatrix& m);

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// Guarded integer power, returns -1 on overflow.
std::int64_t checked_pow(std::int64_t base, int exp);

} // namespace cqg

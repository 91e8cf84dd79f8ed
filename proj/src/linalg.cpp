#include "cqglab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cqg {

namespace {

template <typename M>
M kron_impl(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

} // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) { return kron_impl(a, b); }
RMatrix kron(const RMatrix& a, const RMatrix& b) { return kron_impl(a, b); }

RMatrix kron_power(const RMatrix& a, int n) {
  RMatrix out = RMatrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, a);
  return out;
}

RMatrix flip_operator(int a, int b) {
  RMatrix f = RMatrix::Zero(a * b, a * b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) f(j * a + i, i * b + j) = 1.0;
  return f;
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

double hs_norm(const CMatrix& m) { return m.norm(); }

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<RMatrix> svd(m);
  return svd.singularValues()(0);
}

int numerical_rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

CMatrix orthonormal_span(const CMatrix& m, double tol) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

double max_principal_angle(const CMatrix& q1, const CMatrix& q2) {
  if (q1.cols() != q2.cols()) return M_PI / 2;
  if (q1.cols() == 0) return 0.0;
  // sin of the largest angle = ‖(I − Q1Q1*)Q2‖₂, taken in both directions
  CMatrix r12 = q2 - q1 * (q1.adjoint() * q2);
  CMatrix r21 = q1 - q2 * (q2.adjoint() * q1);
  double s = std::max(operator_norm(r12), operator_norm(r21));
  return std::asin(std::min(1.0, s));
}

double min_hermitian_eigenvalue(const CMatrix& m) {
  CMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int k = 0; k < exp; ++k)
    if (__builtin_mul_overflow(out, base, &out)) return -1;
  return out;
}

} // namespace cqg

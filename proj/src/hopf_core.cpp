#include "cqglab/hopf_core.hpp"

#include <algorithm>
#include <cmath>

#include "cqglab/errors.hpp"

namespace cqg {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw StructureError(what);
}


} // namespace

FiniteQuantumGroup::FiniteQuantumGroup(StructureConstants sc) : sc_(std::move(sc)) {
  const int n = sc_.dim;
  require(n > 0, "dim must be positive");
  require(sc_.mult.extent() == n, "tensor 'mult' has extent " + std::to_string(sc_.mult.extent()) +
                                      ", expected " + std::to_string(n));
  require(sc_.comult.extent() == n, "tensor 'comult' has extent " +
                                        std::to_string(sc_.comult.extent()) + ", expected " +
                                        std::to_string(n));
  require(sc_.unit.size() == n, "vector 'unit' has length " + std::to_string(sc_.unit.size()) +
                                    ", expected " + std::to_string(n));
  require(sc_.counit.size() == n, "vector 'counit' has length " +
                                      std::to_string(sc_.counit.size()) + ", expected " +
                                      std::to_string(n));
  require(sc_.antipode.rows() == n && sc_.antipode.cols() == n,
          "matrix 'antipode' is not " + std::to_string(n) + "x" + std::to_string(n));
  require(sc_.star.rows() == n && sc_.star.cols() == n,
          "matrix 'star' is not " + std::to_string(n) + "x" + std::to_string(n));

  coproduct_terms_.resize(n);
  product_terms_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (sc_.comult(i, j, k) != cplx(0)) coproduct_terms_[k].push_back({i, j, sc_.comult(i, j, k)});
        if (sc_.mult(i, j, k) != cplx(0))
          product_terms_[static_cast<std::size_t>(i) * n + j].push_back({k, sc_.mult(i, j, k)});
      }
}

CVector FiniteQuantumGroup::basis(int i) const {
  CVector e = CVector::Zero(dim());
  e(i) = 1.0;
  return e;
}

CVector FiniteQuantumGroup::multiply(const CVector& x, const CVector& y) const {
  const int n = dim();
  CVector out = CVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == cplx(0)) continue;
    for (int j = 0; j < n; ++j) {
      if (y(j) == cplx(0)) continue;
      cplx w = x(i) * y(j);
      for (const auto& t : product_terms(i, j)) out(t.k) += w * t.v;
    }
  }
  return out;
}

CMatrix FiniteQuantumGroup::left_multiplication(const CVector& x) const {
  CMatrix l(dim(), dim());
  for (int j = 0; j < dim(); ++j) l.col(j) = multiply(x, basis(j));
  return l;
}

CVector FiniteQuantumGroup::adjoint(const CVector& x) const {
  return sc_.star.transpose() * x.conjugate();
}

CVector FiniteQuantumGroup::antipode(const CVector& x) const { return sc_.antipode * x; }

CMatrix FiniteQuantumGroup::coproduct(const CVector& x) const {
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (int k = 0; k < dim(); ++k) {
    if (x(k) == cplx(0)) continue;
    for (const auto& t : coproduct_terms_[k]) out(t.a, t.b) += x(k) * t.v;
  }
  return out;
}

CMatrix FiniteQuantumGroup::multiply_tensor(const CMatrix& x, const CMatrix& y) const {
  const int n = dim();
  CMatrix out = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (x(a, b) == cplx(0)) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (y(c, d) == cplx(0)) continue;
          cplx w = x(a, b) * y(c, d);
          for (const auto& p : product_terms(a, c))
            for (const auto& q : product_terms(b, d)) out(p.k, q.k) += w * p.v * q.v;
        }
    }
  return out;
}

VerificationReport verify_hopf(const FiniteQuantumGroup& g, double tol) {
  const int n = g.dim();
  const auto& sc = g.constants();
  VerificationReport rep;
  const CVector& one = g.one();

  std::vector<CVector> e(n);
  for (int i = 0; i < n; ++i) e[i] = g.basis(i);
  std::vector<std::vector<CVector>> prod(n, std::vector<CVector>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) prod[i][j] = g.multiply(e[i], e[j]);
  std::vector<CMatrix> cop(n);
  for (int k = 0; k < n; ++k) cop[k] = g.coproduct(e[k]);

  rep.add(timed([&] {
    double r = 0;
    for (int i = 0; i < n; ++i) {
      r = std::max(r, max_abs(g.multiply(one, e[i]) - e[i]));
      r = std::max(r, max_abs(g.multiply(e[i], one) - e[i]));
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          r = std::max(r, max_abs(g.multiply(prod[i][j], e[l]) - g.multiply(e[i], prod[j][l])));
    }
    return Check::below("associativity", "associativity and unit law of m", r, tol);
  }));

  rep.add(timed([&] {
    double r = 0;
    std::vector<cplx> left(static_cast<std::size_t>(n) * n * n), right(left.size());
    for (int k = 0; k < n; ++k) {
      std::fill(left.begin(), left.end(), cplx(0));
      std::fill(right.begin(), right.end(), cplx(0));
      for (const auto& t : g.coproduct_terms(k)) {
        // (Δ⊗id): expand the first leg
        for (const auto& s : g.coproduct_terms(t.a))
          left[(static_cast<std::size_t>(s.a) * n + s.b) * n + t.b] += t.v * s.v;
        // (id⊗Δ): expand the second leg
        for (const auto& s : g.coproduct_terms(t.b))
          right[(static_cast<std::size_t>(t.a) * n + s.a) * n + s.b] += t.v * s.v;
      }
      for (std::size_t q = 0; q < left.size(); ++q) r = std::max(r, std::abs(left[q] - right[q]));
    }
    return Check::below("coassociativity", "coassociativity of Δ", r, tol);
  }));

  rep.add(timed([&] {
    double r = 0;
    for (int k = 0; k < n; ++k) {
      CVector l = sc.counit.transpose() * cop[k];
      CVector rr = cop[k] * sc.counit;
      r = std::max({r, max_abs(CVector(l - e[k])), max_abs(CVector(rr - e[k]))});
      for (int j = 0; j < n; ++j)
        r = std::max(r, std::abs(g.counit(prod[k][j]) - sc.counit(k) * sc.counit(j)));
    }
    r = std::max(r, std::abs(g.counit(one) - 1.0));
    return Check::below("counit", "(id⊗ε)Δ = (ε⊗id)Δ = id, ε multiplicative", r, tol);
  }));

  rep.add(timed([&] {
    double r = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r = std::max(r, max_abs(CMatrix(g.coproduct(prod[i][j]) - g.multiply_tensor(cop[i], cop[j]))));
    r = std::max(r, max_abs(CMatrix(g.coproduct(one) - one * one.transpose())));
    return Check::below("comult_homomorphism", "Δ is a unital homomorphism", r, tol);
  }));

  rep.add(timed([&] {
    double r = 0;
    for (int k = 0; k < n; ++k) {
      CVector l = CVector::Zero(n), rr = CVector::Zero(n);
      for (const auto& t : g.coproduct_terms(k)) {
        l += t.v * g.multiply(g.antipode(e[t.a]), e[t.b]);
        rr += t.v * g.multiply(e[t.a], g.antipode(e[t.b]));
      }
      CVector target = sc.counit(k) * one;
      r = std::max({r, max_abs(CVector(l - target)), max_abs(CVector(rr - target))});
    }
    return Check::below("antipode", "m(S⊗id)Δ = ε(·)1 = m(id⊗S)Δ", r, tol);
  }));

  rep.add(timed([&] {
    double r = max_abs(CVector(g.adjoint(one) - one));
    for (int i = 0; i < n; ++i) r = std::max(r, max_abs(CVector(g.adjoint(g.adjoint(e[i])) - e[i])));
    return Check::below("star_involution", "x** = x, 1* = 1", r, tol);
  }));

  rep.add(timed([&] {
    double r = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r = std::max(r, max_abs(CVector(g.adjoint(prod[i][j]) -
                                         g.multiply(g.adjoint(e[j]), g.adjoint(e[i])))));
    return Check::below("star_antihomomorphism", "(xy)* = y*x*", r, tol);
  }));

  rep.add(timed([&] {
    double r = 0;
    const CMatrix& st = sc.star;
    for (int i = 0; i < n; ++i) {
      CMatrix lhs = g.coproduct(g.adjoint(e[i]));
      CMatrix rhs = st.transpose() * cop[i].conjugate() * st;
      r = std::max(r, max_abs(CMatrix(lhs - rhs)));
    }
    return Check::below("comult_star", "Δ is a *-homomorphism", r, tol);
  }));

  rep.metadata["algebra"] = g.name();
  rep.metadata["dim"] = n;
  return rep;
}

double haar_invariance_residual(const FiniteQuantumGroup& g, const Functional& h) {
  const int n = g.dim();
  double r = std::abs(h(g.one()) - 1.0);
  for (int k = 0; k < n; ++k) {
    CVector l = CVector::Zero(n), rr = CVector::Zero(n);
    for (const auto& t : g.coproduct_terms(k)) {
      l(t.b) += t.v * h.coeffs(t.a);
      rr(t.a) += t.v * h.coeffs(t.b);
    }
    CVector target = h.coeffs(k) * g.one();
    r = std::max({r, max_abs(CVector(l - target)), max_abs(CVector(rr - target))});
  }
  return r;
}

Functional haar_state(const FiniteQuantumGroup& g, double tol) {
  const int n = g.dim();
  const CVector& one = g.one();
  CMatrix sys = CMatrix::Zero(2 * n * n + 1, n);
  // rows (k, j): coefficient of b_j in (h⊗id)Δ(b_k) − h(b_k)1, then (id⊗h)
  for (int k = 0; k < n; ++k) {
    for (const auto& t : g.coproduct_terms(k)) {
      sys(k * n + t.b, t.a) += t.v;
      sys(n * n + k * n + t.a, t.b) += t.v;
    }
    for (int j = 0; j < n; ++j) {
      sys(k * n + j, k) -= one(j);
      sys(n * n + k * n + j, k) -= one(j);
    }
  }
  sys.row(2 * n * n) = one.transpose();
  CVector rhs = CVector::Zero(2 * n * n + 1);
  rhs(2 * n * n) = 1.0;

  if (numerical_rank(sys, tol) < n) throw NotCqgError("not a CQG algebra: Haar state is not unique");
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(sys);
  Functional h{cod.solve(rhs)};
  double res = (sys * h.coeffs - rhs).cwiseAbs().maxCoeff();
  if (!(res < tol))
    throw NotCqgError("not a CQG algebra: no invariant normalized functional (residual " +
                      std::to_string(res) + ")");

  CMatrix gram = gram_matrix(g, h);
  Eigen::SelfAdjointEigenSolver<CMatrix> es((gram + gram.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > tol))
    throw NotCqgError("not a CQG algebra: invariant functional is not a faithful state");
  return h;
}

Functional counit_functional(const FiniteQuantumGroup& g) { return {g.constants().counit}; }

Functional convolve(const FiniteQuantumGroup& g, const Functional& omega, const Functional& phi) {
  Functional out{CVector::Zero(g.dim())};
  for (int k = 0; k < g.dim(); ++k)
    for (const auto& t : g.coproduct_terms(k))
      out.coeffs(k) += t.v * omega.coeffs(t.a) * phi.coeffs(t.b);
  return out;
}

CVector convolve_elements(const FiniteQuantumGroup& g, const Functional& h, const CVector& a,
                          const CVector& b) {
  const int n = g.dim();
  CVector out = CVector::Zero(n);
  // h(S(b_i) a) for every basis element b_i
  CVector w(n);
  for (int i = 0; i < n; ++i) w(i) = h(g.multiply(g.antipode(g.basis(i)), a));
  for (int k = 0; k < n; ++k) {
    if (b(k) == cplx(0)) continue;
    for (const auto& t : g.coproduct_terms(k)) out(t.b) += b(k) * t.v * w(t.a);
  }
  return out;
}

double kac_defect(const FiniteQuantumGroup& g, const Functional& h) {
  double r = 0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      r = std::max(r, std::abs(h(g.multiply(g.basis(i), g.basis(j))) -
                               h(g.multiply(g.basis(j), g.basis(i)))));
  return r;
}

bool is_kac(const FiniteQuantumGroup& g, const Functional& h, double tol) {
  return kac_defect(g, h) < tol;
}

FiniteQuantumGroup tensor_with_cop(const FiniteQuantumGroup& g) {
  const int n = g.dim();
  const int nn = n * n;
  if (nn > 64) throw ResourceError("tensor_with_cop: dense structure tensors", nn, 64);
  const auto& sc = g.constants();
  StructureConstants out;
  out.name = sc.name + " x " + sc.name + "^cop";
  out.dim = nn;
  out.mult = Tensor3(nn);
  out.comult = Tensor3(nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (const auto& p : g.product_terms(i, k))
            for (const auto& q : g.product_terms(j, l))
              out.mult(i * n + j, k * n + l, p.k * n + q.k) += p.v * q.v;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (const auto& s : g.coproduct_terms(k))
        for (const auto& t : g.coproduct_terms(l))
          out.comult(s.a * n + t.b, s.b * n + t.a, k * n + l) += s.v * t.v;
  out.unit = kron(CMatrix(sc.unit), CMatrix(sc.unit));
  out.counit = kron(CMatrix(sc.counit), CMatrix(sc.counit));
  CMatrix s_inv = sc.antipode.fullPivLu().inverse();
  out.antipode = kron(sc.antipode, s_inv);
  out.star = kron(sc.star, sc.star);
  return FiniteQuantumGroup(std::move(out));
}

Functional tensor_functional(const Functional& omega, const Functional& phi) {
  return {kron(CMatrix(omega.coeffs), CMatrix(phi.coeffs))};
}

CMatrix gram_matrix(const FiniteQuantumGroup& g, const Functional& phi) {
  const int n = g.dim();
  CMatrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    CVector si = g.adjoint(g.basis(i));
    for (int j = 0; j < n; ++j) gram(i, j) = phi(g.multiply(si, g.basis(j)));
  }
  return gram;
}

double state_margin(const FiniteQuantumGroup& g, const Functional& phi) {
  return min_hermitian_eigenvalue(gram_matrix(g, phi));
}

double positivity_margin(const FiniteQuantumGroup& g, const Functional& h, const CVector& x) {
  CMatrix gram = gram_matrix(g, h);
  gram = (gram + gram.adjoint()) / 2.0;
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NotCqgError("state is not faithful");
  // In h-orthonormal coordinates left multiplication becomes R L R⁻¹ with gram = R*R.
  CMatrix r = llt.matrixU();
  CMatrix l = g.left_multiplication(x);
  CMatrix op = r * l * r.inverse();
  double skew = (op - op.adjoint()).norm();
  return min_hermitian_eigenvalue(op) - skew;
}

} // namespace cqg

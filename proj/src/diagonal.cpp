#include "cqglab/diagonal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cqglab/errors.hpp"

namespace cqg {

namespace {

CVector random_element(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v;
}

} // namespace

CMatrix expectation_matrix(const FiniteQuantumGroup& g, const Functional& phi) {
  const int n = g.dim();
  CMatrix e = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (const auto& t : g.coproduct_terms(k)) e(t.a, k) += t.v * phi.coeffs(t.b);
  return e;
}

DiagonalContext build_phi_d(const FiniteQuantumGroup& g, double tol) {
  Functional h = haar_state(g, tol);
  if (!is_kac(g, h, tol)) throw KacRequiredError();
  const int n = g.dim();
  FiniteQuantumGroup dbl = tensor_with_cop(g);

  Functional phi{CVector::Zero(n * n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      phi.coeffs(i * n + j) = h(g.multiply(g.basis(i), g.antipode(g.basis(j))));

  CMatrix td(n * n, n);
  for (int k = 0; k < n; ++k) {
    CMatrix c = g.coproduct(g.basis(k));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) td(i * n + j, k) = c(i, j);
  }
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(td);
  CMatrix pinv = cod.pseudoInverse();
  CMatrix e = expectation_matrix(dbl, phi);
  return DiagonalContext{g, std::move(dbl), h, phi, std::move(e), std::move(td), std::move(pinv), tol};
}

VerificationReport check_phi_d(const DiagonalContext& ctx) {
  VerificationReport rep;
  rep.add(timed([&] {
    double margin = state_margin(ctx.doubled, ctx.phi_d);
    double unit = std::abs(ctx.phi_d(ctx.doubled.one()) - 1.0);
    // a state: φ(1) = 1 and Gram matrix PSD; residual is the worst violation
    double r = std::max(unit, std::max(0.0, -margin));
    Check c = Check::below("phi_d.state", "φ_D(a⊗b̃) = h(aSb) is a state", r, ctx.tol);
    c.note = "gram min eigenvalue " + std::to_string(margin);
    return c;
  }));
  rep.add(timed([&] {
    Functional sq = convolve(ctx.doubled, ctx.phi_d, ctx.phi_d);
    return Check::below("phi_d.idempotent", "φ_D⋆φ_D = φ_D",
                        max_abs(CVector(sq.coeffs - ctx.phi_d.coeffs)), ctx.tol);
  }));
  return rep;
}

CVector conditional_expectation(const DiagonalContext& ctx, const CVector& x) {
  return ctx.expectation * x;
}

CVector tilde_delta(const DiagonalContext& ctx, const CVector& a) { return ctx.tilde_delta * a; }

RangeComparison compare_ranges(const DiagonalContext& ctx) {
  CMatrix qe = orthonormal_span(ctx.expectation, ctx.tol);
  CMatrix qt = orthonormal_span(ctx.tilde_delta, ctx.tol);
  return {static_cast<int>(qe.cols()), static_cast<int>(qt.cols()), max_principal_angle(qe, qt)};
}

VerificationReport check_range_equality(const DiagonalContext& ctx, double angle_tol) {
  VerificationReport rep;
  rep.add(timed([&] {
    RangeComparison rc = compare_ranges(ctx);
    double r = rc.rank_expectation == rc.rank_tilde_delta ? rc.max_angle : M_PI / 2;
    Check c = Check::below("range_equality", "ran E_φD = Δ̃(A)", r, angle_tol);
    c.pass = c.pass && rc.rank_tilde_delta == ctx.group.dim();
    c.note = "rank E = " + std::to_string(rc.rank_expectation) +
             ", rank tilde_delta = " + std::to_string(rc.rank_tilde_delta);
    return c;
  }));
  return rep;
}

CVector gamma(const DiagonalContext& ctx, const CVector& a, const CVector& b) {
  CVector y = ctx.expectation * kron(CMatrix(a), CMatrix(b));
  CVector x = ctx.tilde_delta_pinv * y;
  double res = max_abs(CVector(ctx.tilde_delta * x - y));
  double scale = std::max(1.0, max_abs(y));
  if (!(res < 1e3 * ctx.tol * scale))
    throw ConsistencyError("E(a⊗b̃) is not in the range of tilde_delta (residual " +
                           std::to_string(res) + ")");
  return x;
}

VerificationReport check_gamma(const DiagonalContext& ctx) {
  VerificationReport rep;
  rep.add(timed([&] {
    const FiniteQuantumGroup& g = ctx.group;
    double r = 0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        CVector lhs = gamma(ctx, g.basis(i), g.basis(j));
        CVector rhs = convolve_elements(g, ctx.haar, g.basis(i), g.basis(j));
        r = std::max(r, (lhs - rhs).norm());
      }
    return Check::below("gamma", "γ(a⊗b̃) = a⋆b", r, ctx.tol);
  }));
  return rep;
}

VerificationReport check_expectation(const DiagonalContext& ctx, std::uint64_t seed) {
  VerificationReport rep;
  const CMatrix& e = ctx.expectation;
  const FiniteQuantumGroup& d = ctx.doubled;
  const int nn = d.dim();
  const double tol = ctx.tol;
  Functional hh = tensor_functional(ctx.haar, ctx.haar);

  rep.add(timed([&] {
    return Check::below("expectation.idempotent", "E∘E = E",
                        (e * e - e).cwiseAbs().maxCoeff(), tol);
  }));
  rep.add(timed([&] {
    return Check::below("expectation.unital", "E(1) = 1", max_abs(CVector(e * d.one() - d.one())),
                        tol);
  }));
  rep.add(timed([&] {
    CVector diff = (hh.coeffs.transpose() * e).transpose() - hh.coeffs;
    return Check::below("expectation.haar_preserving", "(h⊗h)∘E = h⊗h", max_abs(diff), tol);
  }));
  rep.add(timed([&] {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      CVector y = random_element(rng, nn);
      CVector x = d.multiply(d.adjoint(y), y);
      double m = positivity_margin(d, hh, e * x) / std::max(1.0, x.norm());
      worst = std::min(worst, m);
    }
    return Check::below("expectation.positive", "E maps positives to positives", -worst, tol);
  }));
  rep.add(timed([&] {
    const int n = ctx.group.dim();
    double r = std::abs(numerical_rank(ctx.tilde_delta, tol) - n);
    return Check::below("tilde_delta.injective", "Δ̃ is injective", r, 0.5);
  }));
  rep.add(timed([&] {
    const FiniteQuantumGroup& g = ctx.group;
    double r = 0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        CVector lhs = ctx.tilde_delta * g.multiply(g.basis(i), g.basis(j));
        CVector rhs = d.multiply(ctx.tilde_delta.col(i), ctx.tilde_delta.col(j));
        r = std::max(r, max_abs(CVector(lhs - rhs)));
      }
    return Check::below("tilde_delta.multiplicative", "Δ̃(ab) = Δ̃(a)Δ̃(b)", r, tol);
  }));
  rep.add(timed([&] {
    double defect = trace_defect(d, ctx.phi_d);
    bool abelian = true;
    for (int i = 0; i < ctx.group.dim() && abelian; ++i)
      for (int j = 0; j < ctx.group.dim(); ++j) {
        CVector a = ctx.group.basis(i), b = ctx.group.basis(j);
        if (max_abs(CVector(ctx.group.multiply(a, b) - ctx.group.multiply(b, a))) > tol) {
          abelian = false;
          break;
        }
      }
    // tracial iff abelian
    Check c = abelian ? Check::below("phi_d.trace_dichotomy", "φ_D tracial iff A abelian", defect, tol)
                      : Check::above("phi_d.trace_dichotomy", "φ_D tracial iff A abelian", defect,
                                     1e-3);
    c.note = std::string(abelian ? "abelian, defect must vanish" : "non-abelian, defect must be > tol") +
             "; trace defect " + std::to_string(defect);
    return c;
  }));
  return rep;
}

CMatrix check_identification(const FiniteQuantumGroup& g) {
  return kron(CMatrix(CMatrix::Identity(g.dim(), g.dim())), g.constants().antipode);
}

double trace_defect(const FiniteQuantumGroup& g, const Functional& phi) {
  double r = 0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      r = std::max(r, std::abs(phi(g.multiply(g.basis(i), g.basis(j))) -
                               phi(g.multiply(g.basis(j), g.basis(i)))));
  return r;
}

VerificationReport idempotent_to_expectation(const FiniteQuantumGroup& g, const Functional& h,
                                             const Functional& phi, double tol,
                                             std::uint64_t seed) {
  VerificationReport rep;
  const int n = g.dim();
  rep.add(timed([&] {
    double margin = state_margin(g, phi);
    double r = std::max(std::abs(phi(g.one()) - 1.0), std::max(0.0, -margin));
    return Check::below("state", "φ is a state", r, tol);
  }));
  rep.add(timed([&] {
    Functional sq = convolve(g, phi, phi);
    return Check::below("idempotent", "φ⋆φ = φ", max_abs(CVector(sq.coeffs - phi.coeffs)), tol);
  }));
  if (!rep.at("idempotent").pass) {
    rep.metadata["status"] = "not idempotent";
    return rep;
  }
  rep.metadata["status"] = "idempotent";

  CMatrix e = expectation_matrix(g, phi);
  CMatrix q = orthonormal_span(e, tol);
  CMatrix proj = q * q.adjoint();
  CMatrix off = CMatrix::Identity(n, n) - proj;
  rep.metadata["range_rank"] = q.cols();
  auto outside = [&](const CVector& v) { return (off * v).norm(); };

  rep.add(timed([&] {
    return Check::below("projection", "E_φ∘E_φ = E_φ", (e * e - e).cwiseAbs().maxCoeff(), tol);
  }));
  rep.add(timed([&] {
    return Check::below("unital", "E_φ(1) = 1", max_abs(CVector(e * g.one() - g.one())), tol);
  }));
  rep.add(timed([&] {
    CVector diff = (h.coeffs.transpose() * e).transpose() - h.coeffs;
    return Check::below("haar_preserving", "h∘E_φ = h", max_abs(diff), tol);
  }));
  rep.add(timed([&] {
    double r = 0;
    for (int i = 0; i < q.cols(); ++i) {
      r = std::max(r, outside(g.adjoint(q.col(i))));
      for (int j = 0; j < q.cols(); ++j) r = std::max(r, outside(g.multiply(q.col(i), q.col(j))));
    }
    return Check::below("star_subalgebra", "range of E_φ is a *-subalgebra", r, tol);
  }));
  rep.add(timed([&] {
    double r = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CVector xy = g.multiply(e.col(i), e.col(j));
        r = std::max(r, max_abs(CVector(e * xy - xy)));
      }
    return Check::below("conditional_expectation", "E_φ(E_φ(x)E_φ(y)) = E_φ(x)E_φ(y)", r, tol);
  }));
  rep.add(timed([&] {
    double r = 0;
    for (int i = 0; i < q.cols(); ++i) {
      // rows of Δ(r) index the first leg; each row must lie in the range
      CMatrix c = g.coproduct(q.col(i));
      r = std::max(r, (off * c.transpose()).cwiseAbs().maxCoeff());
    }
    return Check::below("right_coidalgebra", "Δ(B) ⊆ A⊗B", r, tol);
  }));
  rep.add(timed([&] {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      CVector y = random_element(rng, n);
      CVector x = g.multiply(g.adjoint(y), y);
      worst = std::min(worst, positivity_margin(g, h, e * x) / std::max(1.0, x.norm()));
    }
    return Check::below("positive", "E_φ is positive", -worst, tol);
  }));
  rep.add(Check::flag("closures", "norm and weak-* closures", true,
                      "finite dimension: the closed variants coincide with the *-subalgebra"));
  return rep;
}

} // namespace cqg

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cqglab/linalg.hpp"
#include "cqglab/report.hpp"

namespace cqg {

// Dense n×n×n complex tensor, index (i*n + j)*n + k.
class Tensor3 {
public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n) {}

  int extent() const { return n_; }
  cplx& operator()(int i, int j, int k) { return data_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  const cplx& operator()(int i, int j, int k) const {
    return data_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const std::vector<cplx>& data() const { return data_; }

private:
  int n_ = 0;
  std::vector<cplx> data_;
};

// Raw structure constants in a fixed basis b_0..b_{dim-1}.
//   mult(i,j,k):   b_i b_j = Σ_k mult(i,j,k) b_k
//   comult(i,j,k): Δ(b_k) = Σ_{i,j} comult(i,j,k) b_i ⊗ b_j
//   antipode:      S(b_j) = Σ_i antipode(i,j) b_i   (columns are images)
//   star:          (b_i)* = Σ_j star(i,j) b_j        (rows are images)
// Elements are coefficient vectors; * is conjugate-linear, so x* = starᵀ·conj(x).
struct StructureConstants {
  std::string name;
  int dim = 0;
  Tensor3 mult;
  Tensor3 comult;
  CVector unit;
  CVector counit;
  CMatrix antipode;
  CMatrix star;
};

// Linear functional given by its values on the basis.
struct Functional {
  CVector coeffs;
  cplx operator()(const CVector& x) const { return coeffs.transpose() * x; }
};

// Elements of A⊗A are dim×dim coefficient matrices: X(a,b) is the coefficient of b_a⊗b_b.
class FiniteQuantumGroup {
public:
  struct Term {
    int a;
    int b;
    cplx v;
  };
  struct Coeff {
    int k;
    cplx v;
  };

  // Throws StructureError naming the first tensor whose shape disagrees with dim.
  explicit FiniteQuantumGroup(StructureConstants sc);

  const StructureConstants& constants() const { return sc_; }
  int dim() const { return sc_.dim; }
  const std::string& name() const { return sc_.name; }

  CVector basis(int i) const;
  const CVector& one() const { return sc_.unit; }

  CVector multiply(const CVector& x, const CVector& y) const;
  // Matrix of y ↦ x·y.
  CMatrix left_multiplication(const CVector& x) const;
  CVector adjoint(const CVector& x) const;
  CVector antipode(const CVector& x) const;
  cplx counit(const CVector& x) const { return sc_.counit.transpose() * x; }
  CMatrix coproduct(const CVector& x) const;
  // Product in A⊗A.
  CMatrix multiply_tensor(const CMatrix& x, const CMatrix& y) const;

  // Nonzero terms of Δ(b_k) and of b_i b_j.
  const std::vector<Term>& coproduct_terms(int k) const { return coproduct_terms_[k]; }
  const std::vector<Coeff>& product_terms(int i, int j) const {
    return product_terms_[static_cast<std::size_t>(i) * sc_.dim + j];
  }

private:
  StructureConstants sc_;
  std::vector<std::vector<Term>> coproduct_terms_;
  std::vector<std::vector<Coeff>> product_terms_;
};

VerificationReport verify_hopf(const FiniteQuantumGroup& g, double tol = 1e-10);

// Throws NotCqgError if the invariance system has no solution, more than one,
// or the solution is not a faithful state.
Functional haar_state(const FiniteQuantumGroup& g, double tol = 1e-10);

// max of ‖(h⊗id)Δ(b_k) − h(b_k)1‖, ‖(id⊗h)Δ(b_k) − h(b_k)1‖ and |h(1) − 1|
double haar_invariance_residual(const FiniteQuantumGroup& g, const Functional& h);

Functional counit_functional(const FiniteQuantumGroup& g);
Functional convolve(const FiniteQuantumGroup& g, const Functional& omega, const Functional& phi);

// a⋆b = h(S(b₍₁₎)a) b₍₂₎
CVector convolve_elements(const FiniteQuantumGroup& g, const Functional& h, const CVector& a,
                          const CVector& b);

double kac_defect(const FiniteQuantumGroup& g, const Functional& h);
bool is_kac(const FiniteQuantumGroup& g, const Functional& h, double tol = 1e-10);

// The algebra A ⊙ A^cop on the basis b_i⊗b_j (index i*dim + j), with the
// coproduct Σ₂₃∘(Δ⊗ΣΔ). Dense tensors limit this to dim(G)² ≤ 64.
FiniteQuantumGroup tensor_with_cop(const FiniteQuantumGroup& g);
Functional tensor_functional(const Functional& omega, const Functional& phi);

// Gram matrix [φ(b_i* b_j)].
CMatrix gram_matrix(const FiniteQuantumGroup& g, const Functional& phi);
double state_margin(const FiniteQuantumGroup& g, const Functional& phi);

// Smallest eigenvalue of left multiplication by x in the GNS space of the
// faithful state h; nonnegative (up to rounding) iff x ≥ 0.
double positivity_margin(const FiniteQuantumGroup& g, const Functional& h, const CVector& x);

} // namespace cqg

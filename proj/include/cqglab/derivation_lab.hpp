#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqglab/dual_blocks.hpp"
#include "cqglab/report.hpp"
#include "cqglab/tl_rep.hpp"

namespace cqg {

// A_1 = e_21 − e_12 on ℂ^N: the generator of rotations in the (e_1, e_2) plane.
RMatrix torus_generator(int N);

// C_{t,n} = ρ_n(R(t)) for n = 0..n_max, a one-parameter group of group-like elements.
BlockElement grouplike_family(const IrrepCategory& cat, double t, int n_max);

// Blocks A_n = W_nᵀ (Σ_k I^{⊗(k−1)}⊗A_1⊗I^{⊗(n−k)}) W_n for n = 0..n_max. Labels
// above n_max are unknown, not zero: operations that need them throw DomainError.
struct DerivationSymbol {
  int N = 0;
  int n_max = -1;
  std::map<int, RMatrix> blocks;
  std::string provenance;

  const RMatrix& at(int n) const;
  BlockElement as_block_element() const;
};

DerivationSymbol derivation_symbol(const IrrepCategory& cat, int n_max);

// max |A_n − (C_{h,n} − C_{−h,n})/2h|
double symbol_fd_residual(const IrrepCategory& cat, const DerivationSymbol& a, int n, double h = 1e-5);

// ‖Δ̂(C_t)(β,γ) − C_{t,β}⊗C_{t,γ}‖ as one check
VerificationReport grouplike_check(const IrrepCategory& cat, double t, int beta, int gamma,
                                   double tol = 1e-8);

// max |Δ̂(A)(β,γ) − (A_β⊗I + I⊗A_γ)|; DomainError if the fusion range of (β,γ) exceeds n_max
double derivation_identity_residual(const IrrepCategory& cat, const DerivationSymbol& a, int beta,
                                    int gamma);
VerificationReport derivation_identity_check(const IrrepCategory& cat, const DerivationSymbol& a,
                                             int beta, int gamma, double tol = 1e-8);

struct CbBound {
  double value = 0;               // max_{1≤n≤n_max} ‖A_n‖_∞ / d_n
  std::map<int, double> norms;    // ‖A_n‖_∞
  double growth_excess = 0;       // max_n (‖A_n‖ − n‖A_1‖), ≤ 0 when the growth bound holds
};
CbBound cb_bound(const IrrepCategory& cat, const DerivationSymbol& a);

// T_A(B)_n = A_n B_n
BlockElement multiplier(const DerivationSymbol& a, const BlockElement& b);
// Ψ(B) = Ŝ(B), Ψ(B)_n = R_n B_nᵗ R_n with R_n the conjugation matrix of label n.
// R_0 = R_1 = 1, so on labels ≤ 1 this is the plain transpose.
BlockElement psi(const IrrepCategory& cat, const BlockElement& b);
// D = Ψ∘T_A
BlockElement derivation(const IrrepCategory& cat, const DerivationSymbol& a, const BlockElement& b);
// sup_n ‖A_n‖_∞/d_n, the cb bound of Ψ∘T_A
double psi_ta_norm_bound(const IrrepCategory& cat, const DerivationSymbol& a);

// ⟨φ, W·ĥ⟩ = ĥ(φW) for φ in the dual and W·ĥ in A_Δ (Kac).
cplx dual_pairing(const BlockElement& phi, const BlockElement& w, const IrrepCategory& cat);

// Residual of ⟨D(X⋆Y), W⟩ = ⟨D(Y), W⋆X⟩ + ⟨D(X), Y⋆W⟩, the Leibniz rule with
// ⟨X·φ, W⟩ = ⟨φ, W⋆X⟩ and ⟨φ·Y, W⟩ = ⟨φ, Y⋆W⟩. Products are truncated at `bound`.
double leibniz_residual(const IrrepCategory& cat, const DerivationSymbol& a, const BlockElement& x,
                        const BlockElement& y, const BlockElement& w, int bound);
// max of |⟨Ψ(X⋆Y), W⟩ − ⟨Ψ(Y), W⋆X⟩| and |⟨Ψ(X⋆Y), W⟩ − ⟨Ψ(X), Y⋆W⟩|
double bimodule_residual(const IrrepCategory& cat, const BlockElement& x, const BlockElement& y,
                         const BlockElement& w, int bound);

// Ỹ = Y_2 ⊕ Y_0 on ℂ^{N²}, Y_2 in the first N²−1 coordinates.
CMatrix embed_y(int N, cplx y0, const CMatrix& y2);

// Δ̂(Y)(1,1) from the four-case coefficient formula, with the exponent signs of
// U Ỹ U*. ConfigurationError on a shape mismatch.
CMatrix dhat_y_block11(int N, cplx y0, const CMatrix& y2);
// The same four cases with both exponent signs reversed, i.e. U* Ỹ U.
CMatrix dhat_y_block11_conjugate(int N, cplx y0, const CMatrix& y2);

// Z = M − Σ(M) with Σ(e_ij⊗e_kl) = e_kl⊗e_ij, i.e. Σ(M) = F M F.
CMatrix antisymmetrize(const CMatrix& m, int N);

// One term c·C⊗B of an element of M_N⊗M_N, both legs at label 1.
struct WitnessTerm {
  CMatrix c;
  CMatrix b;
  cplx coeff = 1.0;
};
// C = e_12 + e_21, B = e_11
std::vector<WitnessTerm> stated_witness(int N);
// Σ_i (e_{2i}⊗e_{1i} − e_{1i}⊗e_{2i}) = √N (e_2⊗e_1 − e_1⊗e_2) ξ*, whose
// antisymmetrization is off-diagonal with respect to ξ and so pairs to zero
// with every Δ̂(Y)(1,1).
std::vector<WitnessTerm> range_witness(int N);

struct WitnessValue {
  cplx lhs;        // d_1 Σ c Tr(Cᵗ A_1 B)
  cplx rhs;        // d_1² Σ c Tr⊗Tr(Z (C⊗B))
  cplx lhs_printed;  // 2 Σ c Tr(A_1 B Ŝ(C)_1)
  cplx rhs_printed;  // 4 Σ c Tr⊗Tr(Z (C⊗B))
};
WitnessValue inner_witness(int N, cplx y0, const CMatrix& y2, const std::vector<WitnessTerm>& terms);
// B and C must be supported exactly at label 1 (DomainError otherwise).
WitnessValue inner_witness(int N, cplx y0, const CMatrix& y2, const BlockElement& b, const BlockElement& c);

} // namespace cqg

#pragma once

#include <cstdint>

#include "cqglab/hopf_core.hpp"
#include "cqglab/report.hpp"

namespace cqg {

// Elements of G ⊙ G^cop are vectors on the basis b_i⊗b̃_j, index i*dim + j.
struct DiagonalContext {
  FiniteQuantumGroup group;
  FiniteQuantumGroup doubled;
  Functional haar;
  Functional phi_d;
  CMatrix expectation; // E = (id⊗φ_D)Δ on the doubled algebra
  CMatrix tilde_delta; // Δ̃ = (id⊗˜)Δ, dim² × dim
  CMatrix tilde_delta_pinv;
  double tol;
};

// Throws KacRequiredError unless the Haar state of g is a trace.
DiagonalContext build_phi_d(const FiniteQuantumGroup& g, double tol = 1e-10);

// φ_D is a state and φ_D⋆φ_D = φ_D.
VerificationReport check_phi_d(const DiagonalContext& ctx);

CVector conditional_expectation(const DiagonalContext& ctx, const CVector& x);
CVector tilde_delta(const DiagonalContext& ctx, const CVector& a);

struct RangeComparison {
  int rank_expectation;
  int rank_tilde_delta;
  double max_angle;
};
RangeComparison compare_ranges(const DiagonalContext& ctx);

// Single check "range_equality": equal ranks and largest principal angle < angle_tol.
VerificationReport check_range_equality(const DiagonalContext& ctx, double angle_tol = 1e-8);

// γ(a⊗b̃) = Δ̃⁻¹E(a⊗b̃). Throws ConsistencyError if E(a⊗b̃) leaves the range of Δ̃.
CVector gamma(const DiagonalContext& ctx, const CVector& a, const CVector& b);

// Single check "gamma": max over basis pairs of ‖γ(b_i⊗b̃_j) − b_i⋆b_j‖.
VerificationReport check_gamma(const DiagonalContext& ctx);

// E idempotent, unital, h⊗h-preserving, positive; Δ̃ injective and multiplicative;
// traciality of φ_D.
VerificationReport check_expectation(const DiagonalContext& ctx, std::uint64_t seed = 7);

// Basis change id⊗S on G⊗G: turns the doubled picture into functions of (g₁, g₂)
// in which E is diagonal averaging and γ is f₁∗f̌₂.
CMatrix check_identification(const FiniteQuantumGroup& g);

double trace_defect(const FiniteQuantumGroup& g, const Functional& phi);

// E_φ = (id⊗φ)Δ.
CMatrix expectation_matrix(const FiniteQuantumGroup& g, const Functional& phi);

// For a state φ: if φ⋆φ = φ, verifies that E_φ is an h-preserving conditional
// expectation onto a right coidalgebra. Otherwise the report ends after the
// failed "idempotent" check and metadata.status is "not idempotent".
VerificationReport idempotent_to_expectation(const FiniteQuantumGroup& g, const Functional& h,
                                             const Functional& phi, double tol = 1e-10,
                                             std::uint64_t seed = 7);

} // namespace cqg

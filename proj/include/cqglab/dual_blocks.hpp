#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "cqglab/linalg.hpp"
#include "cqglab/tl_rep.hpp"

namespace cqg {

// Finitely supported element of ℓ∞(𝔾̂): label α ↦ n_α×n_α block. Zero blocks
// are dropped on construction, so support() is exactly the set of stored labels.
class BlockElement {
public:
  BlockElement() = default;
  explicit BlockElement(std::map<int, CMatrix> blocks, double prune_tol = 0.0);

  static BlockElement single(int label, const CMatrix& block);
  static BlockElement matrix_unit(int label, int n, int i, int j);

  const std::map<int, CMatrix>& blocks() const { return blocks_; }
  std::vector<int> support() const;
  bool empty() const { return blocks_.empty(); }
  // zero matrix of size n when α is outside the support
  CMatrix block(int label, Eigen::Index n) const;
  const CMatrix* find(int label) const;

  BlockElement operator+(const BlockElement& o) const;
  BlockElement operator-(const BlockElement& o) const;
  BlockElement operator*(cplx s) const;
  // blockwise product
  BlockElement compose(const BlockElement& o) const;
  BlockElement adjoint() const;

private:
  std::map<int, CMatrix> blocks_;
};

double max_block_difference(const BlockElement& a, const BlockElement& b);

// Per-label data (n_α, d_α, Q_α) with Q_α positive diagonal and
// Tr Q_α = Tr Q_α⁻¹ = d_α. Labels without an entry are rejected.
class QData {
public:
  struct Entry {
    int n;
    double d;
    RVector q; // diagonal of Q_α
  };

  // Q_α = I, d_α = n_α. `dims` maps a label to n_α.
  static QData kac(std::function<std::int64_t(int)> dims, int max_label);
  static QData kac(const IrrepCategory& cat, int max_label);
  // Synthetic non-Kac data of SU_q(2) shape: n_α = α+1 and Q_α = diag(q^{α/2}, q^{α/2−1}, …, q^{−α/2}).
  // Throws ConfigurationError unless Σ_{δ⊆β⊗γ} d_δ = d_β d_γ holds for β,γ ≤ max_label.
  static QData geometric(double q, int max_label);
  // Throws ConfigurationError if a trace condition fails.
  static QData from_entries(std::map<int, Entry> entries, bool kac_mode, double tol = 1e-10);

  bool kac_mode() const { return kac_; }
  const Entry& at(int label) const;
  bool has(int label) const { return entries_.count(label) > 0; }
  int n(int label) const { return at(label).n; }
  double d(int label) const { return at(label).d; }
  int max_label() const { return entries_.empty() ? -1 : entries_.rbegin()->first; }

private:
  std::map<int, Entry> entries_;
  bool kac_ = true;
};

// max |Σ_{δ⊆β⊗γ} d_δ − d_β d_γ| over β,γ with β+γ ≤ max_label, fusion ranges of O_N⁺ type.
double fusion_dimension_defect(const QData& q, int max_label);

// α ↦ ᾱ together with an optional unitary J_α such that the entrywise adjoint of
// u^α is J_α u^ᾱ J_α*. The default is the identity on labels with J = I.
class Conjugation {
public:
  Conjugation() = default;
  explicit Conjugation(std::map<int, int> table, std::map<int, CMatrix> twists = {})
      : table_(std::move(table)), twists_(std::move(twists)), identity_(false) {}
  // O_N⁺ in the W_n bases: self-conjugate labels, J_n = conjugation_matrix(n) for n ≤ max_label.
  static Conjugation onplus(const IrrepCategory& cat, int max_label);

  // ConfigurationError when the label has no conjugate configured
  int operator()(int label) const;
  // nullptr when no twist is configured at all; ConfigurationError if twists exist but not for this label
  const CMatrix* twist(int label) const;

private:
  std::map<int, int> table_;
  std::map<int, CMatrix> twists_;
  bool identity_ = true;
};

// ĥ(X) = Σ d_α Tr(Q_α X_α)
cplx haar_weight(const BlockElement& x, const QData& q);
// ⟨X·ĥ, Y⟩ = ĥ(Y X) = Σ d_α Tr(Q_α Y_α X_α)
cplx pairing(const BlockElement& x, const BlockElement& y, const QData& q);

// Σ d_α ‖X_α Q_α‖_{S¹}
double fourier_algebra_norm(const BlockElement& x, const QData& q);
// Σ d_α^{3/2} ‖X_α Q_α^{1/2}‖_{S²}; in Kac mode Σ n_α^{3/2}‖X_α‖_{S²}
double adelta_norm(const BlockElement& x, const QData& q);
// sup d_α^{−1/2} ‖Q_α^{1/2} X_α‖_{S²}
double adelta_dual_norm(const BlockElement& x, const QData& q);

// Ŝ(X)_α = J_α (X_ᾱ)ᵗ J_α*
BlockElement dual_antipode(const BlockElement& x, const Conjugation& conj = {});

// Δ̂(X)(β,γ) = V(β,γ) (⊕_{α⊆β⊗γ} X_α) V(β,γ)*; missing blocks count as zero.
CMatrix coproduct_block(const BlockElement& x, int beta, int gamma, const IrrepCategory& cat);
// (β,γ)-component of Δ̂(e^α_{ij}); zero unless α ⊆ β⊗γ. Indices are 0-based.
CMatrix coproduct_of_matrix_unit(int alpha, int i, int j, int beta, int gamma,
                                 const IrrepCategory& cat);

// sup over β,γ ≤ window of n_β^{−1/2} n_γ^{−1/2} ‖Δ̂(X)(β,γ)‖_{S²}
double coproduct_dual_norm(const BlockElement& x, const IrrepCategory& cat, int window);

// Max entry of (Δ̂⊗id)Δ̂(X) − (id⊗Δ̂)Δ̂(X) on the (β,γ,δ) block.
double coassociativity_residual(const BlockElement& x, int beta, int gamma, int delta,
                                const IrrepCategory& cat);

// Z with Z·ĥ = (X·ĥ ⊗ Y·ĥ)∘Δ̂, i.e. Z_α(j,i) = (X·ĥ⊗Y·ĥ)(Δ̂(e^α_{ij}))/n_α (Kac).
// Every label of the fusion closure of the supports must be ≤ bound, otherwise
// TruncationError names the first offending label.
BlockElement adelta_product(const BlockElement& x, const BlockElement& y, const IrrepCategory& cat,
                            int bound);

// Element of ℓ∞(𝔾̂)⊗ℓ∞(𝔾̂): (β,γ) ↦ matrix on ℂ^{n_β}⊗ℂ^{n_γ}, row index k·n_γ+p.
using BlockTensor = std::map<std::pair<int, int>, CMatrix>;

// Φ*(e^α_{ij}) = (1/n_α) Σ_r e^α_{ir} ⊗ e^ᾱ_{jr} (Kac). Indices 0-based. The closed
// form needs a basis with J_α = I; a twisted conjugation throws ConfigurationError.
BlockTensor twisted_convolution_adjoint(int alpha, int i, int j, int n_alpha,
                                        const Conjugation& conj = {});
// ⟨T, u^β_{kl}⊗u^γ_{pq}⟩, i.e. the (k p, l q) entry of the (β,γ) block
cplx pair_with_coefficients(const BlockTensor& t, int beta, int gamma, int n_gamma, int k, int l,
                            int p, int q);
// ‖Σ_r e_r⊗e_r / n‖ in S²(ℂ^n⊗ℂ^n), the factor behind the n^{−1/2} of the dual norm
double twisted_unit_norm(int n);

// {"labels": [...], "blocks": {"α": [[[re, im], ...], ...]}}
nlohmann::json block_to_json(const BlockElement& x);
// StructureError on shape mismatch or labels disagreeing with blocks.
// If `dims` is given, blocks must have size dims(α).
BlockElement block_from_json(const nlohmann::json& doc,
                             const std::function<std::int64_t(int)>& dims = {});
BlockElement load_block(const std::filesystem::path& path,
                        const std::function<std::int64_t(int)>& dims = {});
void save_block(const std::filesystem::path& path, const BlockElement& x);

} // namespace cqg

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "cqglab/linalg.hpp"
#include "cqglab/report.hpp"

namespace cqg {

inline constexpr std::int64_t kDefaultEnvelope = 8192;

// d_0 = 1, d_1 = N, d_{n+1} = N d_n − d_{n−1}. Throws ResourceError on int64 overflow.
std::int64_t chebyshev_dim(int N, int n);

struct FusionRange {
  int beta;
  int gamma;
  std::vector<int> components; // |β−γ|, |β−γ|+2, …, β+γ
};
FusionRange fusion_range(int beta, int gamma);

// Rotation by t in the (e_1, e_2) plane, identity on the other N−2 coordinates.
RMatrix rotation(int N, double t);

// Carrier spaces of the irreducible representations u^n of O_N⁺ inside
// (ℂ^N)^{⊗n}, cut out by Jones–Wenzl projectors. Everything is real.
//
// Matrices are computed once and kept for the lifetime of the object; the
// returned references stay valid. Projectors and embeddings are additionally
// persisted under cache_dir (if non-empty) as jw_N{N}_n{n}.cqga and
// embed_N{N}_n{n}.cqga. Lookups may run concurrently; disk writes are serialized.
class IrrepCategory {
public:
  struct Stats {
    std::uint64_t memory_hits = 0;
    std::uint64_t disk_hits = 0;
    std::uint64_t computed = 0;
    std::uint64_t rejected = 0; // disk entries that failed validation and were recomputed
  };

  explicit IrrepCategory(int N, std::int64_t envelope = kDefaultEnvelope,
                         std::filesystem::path cache_dir = {});

  int N() const { return N_; }
  std::int64_t envelope() const { return envelope_; }
  const std::filesystem::path& cache_dir() const { return cache_dir_; }

  std::int64_t dim(int n) const { return chebyshev_dim(N_, n); }

  // Orthogonal projector on (ℂ^N)^{⊗n} of rank d_n. Throws ResourceError if N^n > envelope.
  const RMatrix& jones_wenzl(int n) const;
  // Isometry W_n: ℂ^{d_n} → (ℂ^N)^{⊗n} with W_n W_nᵀ = jones_wenzl(n).
  const RMatrix& embedding(int n) const;

  // Normalized intertwiner ℂ^{d_α} → ℂ^{d_β}⊗ℂ^{d_γ}, first nonzero entry positive.
  // Throws DomainError if α ∉ β⊗γ, ResourceError if N^{β+γ} > envelope.
  const RMatrix& fusion_isometry(int beta, int gamma, int alpha) const;
  // [T(β,γ,α) for α ascending]; orthogonal d_βd_γ × d_βd_γ.
  const RMatrix& fusion_unitary(int beta, int gamma) const;

  // ρ_n(R) = W_nᵀ R^{⊗n} W_n.
  RMatrix rho(int n, const RMatrix& r) const;

  // R_n = W_nᵀ J W_n with J reversing the tensor factors. The entrywise adjoint
  // of ρ_n is R_n ρ_n R_n, so R_n is the conjugation matrix of label n.
  RMatrix conjugation_matrix(int n) const;

  // ResourceError unless N^tensor_power fits the envelope.
  void require_envelope_for(int tensor_power) const { require_envelope(tensor_power, "tensor power"); }

  Stats stats() const;

private:
  void require_envelope(int tensor_power, const char* what) const;
  RMatrix compute_jones_wenzl(int n) const;
  RMatrix compute_embedding(int n) const;
  RMatrix compute_fusion_isometry(int beta, int gamma, int alpha) const;
  bool load_cached(const std::string& stem, Eigen::Index rows, Eigen::Index cols, RMatrix& out) const;
  void store_cached(const std::string& stem, const RMatrix& m) const;

  template <typename Key, typename Compute>
  const RMatrix& lookup(std::map<Key, std::unique_ptr<RMatrix>>& cache, const Key& key,
                        Compute&& compute) const;

  int N_;
  std::int64_t envelope_;
  std::filesystem::path cache_dir_;

  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<RMatrix>> jw_;
  mutable std::map<int, std::unique_ptr<RMatrix>> embed_;
  mutable std::map<std::tuple<int, int, int>, std::unique_ptr<RMatrix>> iso_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<RMatrix>> unitary_;

  mutable std::atomic<std::uint64_t> memory_hits_{0};
  mutable std::atomic<std::uint64_t> disk_hits_{0};
  mutable std::atomic<std::uint64_t> computed_{0};
  mutable std::atomic<std::uint64_t> rejected_{0};
};

// Cache directory from the CQGLAB_CACHE environment variable, else `fallback`.
std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback);

// The explicit unitary on ℂ^N⊗ℂ^N (basis index (j−1)N + (k−1), 1-based j,k):
//   U_{jk,ℓm} = (1−δ_jk)δ_jℓ δ_km + δ_jk δ_ℓm exp(2πi jℓ/N)/√N.
// Its last column is ξ = N^{−1/2} Σ_j e_j⊗e_j; Uᵀ = U.
CMatrix fourier_fusion_unitary(int N);

struct DecompositionComparison {
  CMatrix overlap; // V(1,1)ᵀ U P
  double off_block_mass;
  cplx trivial_phase;
  double block_unitarity;
};

// P moves the last column of U (the invariant vector) to the front, matching
// the ascending order (α = 0, then α = 2) of V(1,1).
DecompositionComparison compare_decompositions(const IrrepCategory& cat);
VerificationReport decomposition_report(const IrrepCategory& cat, double tol = 1e-10);

} // namespace cqg

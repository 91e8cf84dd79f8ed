#include "cqglab/tl_rep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "cqglab/array_file.hpp"
#include "cqglab/errors.hpp"

namespace cqg {

namespace {

std::mutex& disk_write_mutex() {
  static std::mutex m;
  return m;
}

std::int64_t ipow(int base, int exp) {
  std::int64_t v = checked_pow(base, exp);
  if (v < 0) throw ResourceError("tensor power overflows int64", INT64_MAX, INT64_MAX);
  return v;
}

} // namespace

std::int64_t chebyshev_dim(int N, int n) {
  if (N < 2) throw DomainError("N must be at least 2");
  if (n < 0) throw DomainError("label must be nonnegative");
  std::int64_t prev = 1, cur = N;
  if (n == 0) return 1;
  for (int k = 1; k < n; ++k) {
    std::int64_t next;
    if (__builtin_mul_overflow(cur, static_cast<std::int64_t>(N), &next) ||
        __builtin_sub_overflow(next, prev, &next))
      throw ResourceError("d_" + std::to_string(n) + " overflows int64 for N = " + std::to_string(N),
                          n, k);
    prev = cur;
    cur = next;
  }
  return cur;
}

FusionRange fusion_range(int beta, int gamma) {
  if (beta < 0 || gamma < 0) throw DomainError("labels must be nonnegative");
  FusionRange fr{beta, gamma, {}};
  for (int a = std::abs(beta - gamma); a <= beta + gamma; a += 2) fr.components.push_back(a);
  return fr;
}

RMatrix rotation(int N, double t) {
  RMatrix r = RMatrix::Identity(N, N);
  r(0, 0) = std::cos(t);
  r(0, 1) = -std::sin(t);
  r(1, 0) = std::sin(t);
  r(1, 1) = std::cos(t);
  return r;
}

std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback) {
  const char* env = std::getenv("CQGLAB_CACHE");
  if (env && *env) return env;
  return fallback;
}

IrrepCategory::IrrepCategory(int N, std::int64_t envelope, std::filesystem::path cache_dir)
    : N_(N), envelope_(envelope), cache_dir_(std::move(cache_dir)) {
  if (N < 2) throw DomainError("N must be at least 2");
}

void IrrepCategory::require_envelope(int tensor_power, const char* what) const {
  std::int64_t size = checked_pow(N_, tensor_power);
  if (size < 0 || size > envelope_)
    throw ResourceError(std::string(what) + ": N^" + std::to_string(tensor_power) +
                            " exceeds the envelope",
                        size < 0 ? INT64_MAX : size, envelope_);
}

template <typename Key, typename Compute>
const RMatrix& IrrepCategory::lookup(std::map<Key, std::unique_ptr<RMatrix>>& cache, const Key& key,
                                     Compute&& compute) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache.find(key);
    if (it != cache.end()) {
      ++memory_hits_;
      return *it->second;
    }
  }
  // computed outside the lock: compute() may recurse into other lookups
  auto value = std::make_unique<RMatrix>(compute());
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = cache.emplace(key, std::move(value));
  return *it->second;
}

bool IrrepCategory::load_cached(const std::string& stem, Eigen::Index rows, Eigen::Index cols,
                                RMatrix& out) const {
  if (cache_dir_.empty()) return false;
  auto path = cache_dir_ / (stem + ".cqga");
  if (!std::filesystem::exists(path)) return false;
  try {
    CMatrix m = read_matrix(path);
    if (m.rows() != rows || m.cols() != cols || max_abs(m.imag()) != 0.0) {
      ++rejected_;
      return false;
    }
    out = m.real();
    ++disk_hits_;
    return true;
  } catch (const ArrayFormatError&) {
    ++rejected_;
    return false;
  }
}

void IrrepCategory::store_cached(const std::string& stem, const RMatrix& m) const {
  if (cache_dir_.empty()) return;
  std::lock_guard<std::mutex> lock(disk_write_mutex());
  write_matrix(cache_dir_ / (stem + ".cqga"), m.cast<cplx>());
}

const RMatrix& IrrepCategory::jones_wenzl(int n) const {
  if (n < 0) throw DomainError("label must be nonnegative");
  require_envelope(n, "jones_wenzl");
  return lookup(jw_, n, [&] { return compute_jones_wenzl(n); });
}

RMatrix IrrepCategory::compute_jones_wenzl(int n) const {
  const std::int64_t size = ipow(N_, n);
  if (n <= 1) return RMatrix::Identity(size, size);
  const std::string stem = "jw_N" + std::to_string(N_) + "_n" + std::to_string(n);
  RMatrix p;
  if (load_cached(stem, size, size, p)) {
    // a projector of the right rank, or the entry is discarded
    if (std::abs(p.trace() - double(dim(n))) < 1e-6 && (p - p.transpose()).cwiseAbs().maxCoeff() < 1e-9)
      return p;
    ++rejected_;
  }
  ++computed_;
  // Wenzl: p_n = P − (d_{n−2}/d_{n−1}) P e P with P = p_{n−1}⊗I and e the
  // unnormalized cup-cap on the last two slots, so that P e P = B Bᵀ.
  const RMatrix& prev = jones_wenzl(n - 1);
  RMatrix big = kron(prev, RMatrix(RMatrix::Identity(N_, N_)));
  const std::int64_t outer = ipow(N_, n - 2);
  RMatrix b = RMatrix::Zero(size, outer);
  for (std::int64_t s = 0; s < outer; ++s)
    for (int j = 0; j < N_; ++j) b.col(s) += big.col(s * N_ * N_ + j * N_ + j);
  const double ratio = double(dim(n - 2)) / double(dim(n - 1));
  p = big;
  p.noalias() -= ratio * (b * b.transpose());
  p = (p + p.transpose()) / 2.0;
  store_cached(stem, p);
  return p;
}

const RMatrix& IrrepCategory::embedding(int n) const {
  if (n < 0) throw DomainError("label must be nonnegative");
  require_envelope(n, "embedding");
  return lookup(embed_, n, [&] { return compute_embedding(n); });
}

RMatrix IrrepCategory::compute_embedding(int n) const {
  const std::int64_t size = ipow(N_, n);
  const std::int64_t d = dim(n);
  if (n <= 1) return RMatrix::Identity(size, size);
  const std::string stem = "embed_N" + std::to_string(N_) + "_n" + std::to_string(n);
  RMatrix w;
  if (load_cached(stem, size, d, w)) {
    if ((w.transpose() * w - RMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9) return w;
    ++rejected_;
  }
  ++computed_;
  const RMatrix& p = jones_wenzl(n);
  Eigen::ColPivHouseholderQR<RMatrix> qr(p);
  if (qr.rank() != d)
    throw ConsistencyError("Jones-Wenzl projector for n = " + std::to_string(n) + " has rank " +
                           std::to_string(qr.rank()) + ", expected " + std::to_string(d));
  w = qr.householderQ() * RMatrix::Identity(size, d);
  store_cached(stem, w);
  return w;
}

const RMatrix& IrrepCategory::fusion_isometry(int beta, int gamma, int alpha) const {
  auto fr = fusion_range(beta, gamma);
  if (std::find(fr.components.begin(), fr.components.end(), alpha) == fr.components.end())
    throw DomainError("label " + std::to_string(alpha) + " does not occur in " +
                      std::to_string(beta) + " ⊗ " + std::to_string(gamma));
  require_envelope(beta + gamma, "fusion_isometry");
  return lookup(iso_, std::tuple{beta, gamma, alpha},
                [&] { return compute_fusion_isometry(beta, gamma, alpha); });
}

RMatrix IrrepCategory::compute_fusion_isometry(int beta, int gamma, int alpha) const {
  const int m = (beta + gamma - alpha) / 2;
  const int left = beta - m, right = gamma - m;
  const std::int64_t n_left = ipow(N_, left), n_right = ipow(N_, right), n_cup = ipow(N_, m);
  const RMatrix& wa = embedding(alpha);
  const RMatrix& wb = embedding(beta);
  const RMatrix& wc = embedding(gamma);

  // (I^{left} ⊗ Cup_m ⊗ I^{right}) W_α: copy row (x, y) of W_α to every row
  // (x, j_1…j_m j_m…j_1, y).
  std::vector<std::int64_t> cup_index(n_cup);
  for (std::int64_t t = 0; t < n_cup; ++t) {
    std::int64_t rev = 0, u = t;
    for (int k = 0; k < m; ++k) {
      rev = rev * N_ + u % N_;
      u /= N_;
    }
    cup_index[t] = t * n_cup + rev;
  }
  RMatrix inserted = RMatrix::Zero(ipow(N_, beta + gamma), wa.cols());
  for (std::int64_t x = 0; x < n_left; ++x)
    for (std::int64_t y = 0; y < n_right; ++y)
      for (std::int64_t t = 0; t < n_cup; ++t)
        inserted.row((x * n_cup * n_cup + cup_index[t]) * n_right + y) = wa.row(x * n_right + y);

  RMatrix t = kron(wb, wc).transpose() * inserted;
  RMatrix gram = t.transpose() * t;
  const double c = gram.trace() / double(t.cols());
  if (!(c > 1e-20))
    throw ConsistencyError("fusion morphism (" + std::to_string(beta) + "," + std::to_string(gamma) +
                           "," + std::to_string(alpha) + ") vanishes numerically; broken projector cache?");
  if ((gram - c * RMatrix::Identity(t.cols(), t.cols())).cwiseAbs().maxCoeff() > 1e-8 * c)
    throw ConsistencyError("fusion morphism is not a multiple of an isometry; broken projector cache?");
  t /= std::sqrt(c);

  const double cut = 1e-10 * t.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      if (std::abs(t(i, j)) > cut) {
        if (t(i, j) < 0) t = -t;
        return t;
      }
  return t;
}

const RMatrix& IrrepCategory::fusion_unitary(int beta, int gamma) const {
  require_envelope(beta + gamma, "fusion_unitary");
  return lookup(unitary_, std::pair{beta, gamma}, [&] {
    auto fr = fusion_range(beta, gamma);
    const std::int64_t rows = dim(beta) * dim(gamma);
    RMatrix v(rows, rows);
    Eigen::Index col = 0;
    for (int a : fr.components) {
      const RMatrix& t = fusion_isometry(beta, gamma, a);
      v.middleCols(col, t.cols()) = t;
      col += t.cols();
    }
    if (col != rows) throw ConsistencyError("fusion dimensions do not add up");
    return v;
  });
}

RMatrix IrrepCategory::rho(int n, const RMatrix& r) const {
  const RMatrix& w = embedding(n);
  return w.transpose() * kron_power(r, n) * w;
}

RMatrix IrrepCategory::conjugation_matrix(int n) const {
  const RMatrix& w = embedding(n);
  RMatrix jw(w.rows(), w.cols());
  for (Eigen::Index row = 0; row < w.rows(); ++row) {
    Eigen::Index rest = row, rev = 0;
    for (int k = 0; k < n; ++k) {
      rev = rev * N_ + rest % N_;
      rest /= N_;
    }
    jw.row(row) = w.row(rev);
  }
  return w.transpose() * jw;
}

IrrepCategory::Stats IrrepCategory::stats() const {
  return {memory_hits_.load(), disk_hits_.load(), computed_.load(), rejected_.load()};
}

CMatrix fourier_fusion_unitary(int N) {
  if (N < 2) throw DomainError("N must be at least 2");
  CMatrix u = CMatrix::Zero(N * N, N * N);
  const double s = 1.0 / std::sqrt(double(N));
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k)
      for (int l = 1; l <= N; ++l)
        for (int m = 1; m <= N; ++m) {
          cplx v = 0;
          if (j != k && j == l && k == m) v += 1.0;
          if (j == k && l == m) v += std::polar(s, 2.0 * M_PI * j * l / N);
          u((j - 1) * N + (k - 1), (l - 1) * N + (m - 1)) = v;
        }
  return u;
}

DecompositionComparison compare_decompositions(const IrrepCategory& cat) {
  const int n2 = cat.N() * cat.N();
  CMatrix u = fourier_fusion_unitary(cat.N());
  CMatrix up(n2, n2);
  up.col(0) = u.col(n2 - 1);
  up.rightCols(n2 - 1) = u.leftCols(n2 - 1);
  CMatrix v = cat.fusion_unitary(1, 1).cast<cplx>();
  DecompositionComparison out;
  out.overlap = v.adjoint() * up;
  const CMatrix& m = out.overlap;
  out.off_block_mass = std::sqrt(m.row(0).tail(n2 - 1).squaredNorm() + m.col(0).tail(n2 - 1).squaredNorm());
  out.trivial_phase = m(0, 0);
  CMatrix block = m.bottomRightCorner(n2 - 1, n2 - 1);
  out.block_unitarity = max_abs(CMatrix(block.adjoint() * block - CMatrix::Identity(n2 - 1, n2 - 1)));
  return out;
}

VerificationReport decomposition_report(const IrrepCategory& cat, double tol) {
  VerificationReport rep;
  const int N = cat.N();
  CMatrix u = fourier_fusion_unitary(N);
  rep.add(timed([&] {
    double r = max_abs(CMatrix(u * u.adjoint() - CMatrix::Identity(N * N, N * N)));
    return Check::below("u.unitary", "explicit U is unitary", r, 1e-12);
  }));
  rep.add(timed([&] {
    CVector xi = CVector::Zero(N * N);
    for (int j = 0; j < N; ++j) xi(j * N + j) = 1.0 / std::sqrt(double(N));
    return Check::below("u.last_column", "last column of U is the invariant vector",
                        max_abs(CVector(u.col(N * N - 1) - xi)), 1e-12);
  }));
  DecompositionComparison dc;
  rep.add(timed([&] {
    dc = compare_decompositions(cat);
    return Check::below("decomposition.off_block", "U and V(1,1) split u¹⊗u¹ alike",
                        dc.off_block_mass, tol);
  }));
  rep.add(Check::below("decomposition.trivial_phase", "trivial block is a phase",
                       std::abs(std::abs(dc.trivial_phase) - 1.0), tol));
  rep.add(Check::below("decomposition.block_unitary", "remaining block is unitary", dc.block_unitarity,
                       tol));
  rep.metadata["N"] = N;
  return rep;
}

} // namespace cqg

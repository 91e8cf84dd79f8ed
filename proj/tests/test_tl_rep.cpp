#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "cqglab/array_file.hpp"
#include "cqglab/errors.hpp"
#include "cqglab/tl_rep.hpp"

using namespace cqg;

namespace {

// Independent description of the top carrier space: vectors killed by every
// cap on adjacent slots. Projector onto that common kernel, via SVD.
RMatrix kernel_of_caps(int N, int n) {
  const int size = int(std::pow(N, n));
  if (n < 2) return RMatrix::Identity(size, size);
  const int outer = size / (N * N);
  RMatrix stacked = RMatrix::Zero((n - 1) * outer, size);
  for (int slot = 0; slot + 1 < n; ++slot) {
    const int before = int(std::pow(N, slot)), after = int(std::pow(N, n - slot - 2));
    for (int a = 0; a < before; ++a)
      for (int b = 0; b < after; ++b)
        for (int j = 0; j < N; ++j)
          stacked(slot * outer + a * after + b, (a * N * N + j * N + j) * after + b) = 1.0;
  }
  Eigen::JacobiSVD<RMatrix> svd(stacked, Eigen::ComputeFullV);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9) ++rank;
  RMatrix ker = svd.matrixV().rightCols(size - rank);
  return ker * ker.transpose();
}

RVector xi(int N) {
  RVector v = RVector::Zero(N * N);
  for (int j = 0; j < N; ++j) v(j * N + j) = 1.0 / std::sqrt(double(N));
  return v;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("cqglab_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("Chebyshev dimensions") {
  CHECK(chebyshev_dim(7, 0) == 1);
  CHECK(chebyshev_dim(7, 1) == 7);
  CHECK(chebyshev_dim(2, 5) == 6);
  for (int N = 2; N <= 6; ++N) {
    CHECK(chebyshev_dim(N, 2) == N * N - 1);
    CHECK(chebyshev_dim(N, 3) == N * N * N - 2 * N);
  }
  for (int n = 0; n < 40; ++n) CHECK(chebyshev_dim(2, n) == n + 1);
  CHECK_THROWS_AS(chebyshev_dim(1, 3), DomainError);
  CHECK_THROWS_AS(chebyshev_dim(10, 40), ResourceError);
}

TEST_CASE("fusion ranges add up") {
  auto fr = fusion_range(3, 1);
  CHECK(fr.components == std::vector<int>{2, 4});
  for (int N = 2; N <= 4; ++N)
    for (int b = 0; b <= 6; ++b)
      for (int g = 0; g <= 6; ++g) {
        std::int64_t sum = 0;
        for (int a : fusion_range(b, g).components) sum += chebyshev_dim(N, a);
        CHECK(sum == chebyshev_dim(N, b) * chebyshev_dim(N, g));
      }
}

TEST_CASE("Jones-Wenzl projectors") {
  IrrepCategory cat(3);
  CHECK(cat.jones_wenzl(0) == RMatrix::Identity(1, 1));
  CHECK(cat.jones_wenzl(1) == RMatrix::Identity(3, 3));
  RVector x = xi(3);
  RMatrix p2 = RMatrix::Identity(9, 9) - x * x.transpose();
  CHECK(max_abs(cat.jones_wenzl(2) - p2) < 1e-13);

  for (int N = 2; N <= 4; ++N) {
    IrrepCategory c(N);
    for (int n = 0; n <= 4; ++n) {
      CAPTURE(N);
      CAPTURE(n);
      const RMatrix& p = c.jones_wenzl(n);
      CHECK(std::abs(p.trace() - double(c.dim(n))) < 1e-9);
      CHECK(max_abs(p * p - p) < 1e-10);
      CHECK(max_abs(p - p.transpose()) < 1e-12);
      if (std::pow(N, n) <= 256) CHECK(max_abs(p - kernel_of_caps(N, n)) < 1e-9);
    }
  }
}

TEST_CASE("projectors and embeddings commute with rotations") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  IrrepCategory cat(3);
  for (int n = 2; n <= 4; ++n) {
    const RMatrix& p = cat.jones_wenzl(n);
    const RMatrix& w = cat.embedding(n);
    CHECK(max_abs(w.transpose() * w - RMatrix::Identity(w.cols(), w.cols())) < 1e-12);
    CHECK(max_abs(w * w.transpose() - p) < 1e-10);
    RMatrix r = kron_power(rotation(3, angle(rng)), n);
    CHECK(max_abs(r * p - p * r) < 1e-10);
    // ρ is a representation
    RMatrix r1 = rotation(3, 0.3), r2 = rotation(3, 1.1);
    CHECK(max_abs(cat.rho(n, r1 * r2) - cat.rho(n, r1) * cat.rho(n, r2)) < 1e-10);
  }
}

TEST_CASE("envelope is enforced with the offending size") {
  IrrepCategory cat(5, 1000);
  CHECK_NOTHROW(cat.jones_wenzl(4));
  try {
    cat.jones_wenzl(5);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.requested() == 3125);
    CHECK(e.limit() == 1000);
  }
  CHECK_THROWS_AS(cat.fusion_isometry(3, 2, 1), ResourceError);
}

TEST_CASE("fusion isometries") {
  for (int N = 2; N <= 4; ++N) {
    IrrepCategory cat(N);
    RMatrix t = cat.fusion_isometry(1, 1, 0);
    REQUIRE(t.cols() == 1);
    CHECK(max_abs(t.col(0) - xi(N)) < 1e-12);
    CHECK(max_abs(cat.jones_wenzl(2) * t) < 1e-12);
    for (int b = 0; b <= 3; ++b)
      CHECK(max_abs(cat.fusion_isometry(b, 0, b) - RMatrix::Identity(cat.dim(b), cat.dim(b))) < 1e-12);
  }
  IrrepCategory two(2);
  const RMatrix& t = two.fusion_isometry(1, 1, 2);
  CHECK(t.rows() == 4);
  CHECK(t.cols() == 3);
  CHECK(max_abs(t.transpose() * t - RMatrix::Identity(3, 3)) < 1e-10);
  CHECK_THROWS_AS(two.fusion_isometry(2, 1, 2), DomainError);
  CHECK_THROWS_AS(two.fusion_isometry(2, 1, 5), DomainError);
}

TEST_CASE("fusion isometries intertwine") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  for (int N : {2, 3}) {
    IrrepCategory cat(N);
    for (int b = 0; b <= 3; ++b)
      for (int g = 0; g + b <= 4; ++g)
        for (int a : fusion_range(b, g).components) {
          const RMatrix& t = cat.fusion_isometry(b, g, a);
          double worst = 0;
          for (int trial = 0; trial < 20; ++trial) {
            RMatrix r = rotation(N, angle(rng));
            RMatrix lhs = kron(cat.rho(b, r), cat.rho(g, r)) * t;
            worst = std::max(worst, max_abs(lhs - t * cat.rho(a, r)));
          }
          CAPTURE(N);
          CAPTURE(b);
          CAPTURE(g);
          CAPTURE(a);
          CHECK(worst < 1e-8);
        }
  }
}

TEST_CASE("fusion unitaries") {
  for (int N : {2, 3}) {
    IrrepCategory cat(N);
    for (int b = 0; b <= 3; ++b)
      for (int g = 0; g <= 3; ++g) {
        const RMatrix& v = cat.fusion_unitary(b, g);
        CHECK(max_abs(v.transpose() * v - RMatrix::Identity(v.cols(), v.cols())) < 1e-8);
      }
    CHECK(max_abs(cat.fusion_unitary(2, 0) - RMatrix::Identity(cat.dim(2), cat.dim(2))) < 1e-12);
  }
  IrrepCategory two(2);
  // ascending order puts the invariant vector first
  CHECK(max_abs(two.fusion_unitary(1, 1).col(0) - xi(2)) < 1e-12);
}

TEST_CASE("phase convention") {
  IrrepCategory cat(3);
  for (int b = 1; b <= 2; ++b)
    for (int g = 1; g <= 2; ++g)
      for (int a : fusion_range(b, g).components) {
        const RMatrix& t = cat.fusion_isometry(b, g, a);
        const double cut = 1e-10 * t.cwiseAbs().maxCoeff();
        bool found = false;
        for (Eigen::Index i = 0; i < t.rows() && !found; ++i)
          for (Eigen::Index j = 0; j < t.cols() && !found; ++j)
            if (std::abs(t(i, j)) > cut) {
              CHECK(t(i, j) > 0);
              found = true;
            }
        CHECK(found);
      }
}

TEST_CASE("explicit unitary U") {
  CMatrix u = fourier_fusion_unitary(2);
  CHECK(std::abs(u(0, 0) - cplx(-1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(u(1, 1) - cplx(1, 0)) < 1e-15);
  for (int N = 2; N <= 5; ++N) {
    CMatrix v = fourier_fusion_unitary(N);
    CHECK(max_abs(CMatrix(v * v.adjoint() - CMatrix::Identity(N * N, N * N))) < 1e-13);
    CHECK(max_abs(CVector(v.col(N * N - 1) - xi(N).cast<cplx>())) < 1e-14);
    CHECK(max_abs(CMatrix(v - v.transpose())) == 0.0);
  }
}

TEST_CASE("U and V(1,1) agree up to block unitaries") {
  for (int N = 2; N <= 4; ++N) {
    IrrepCategory cat(N);
    auto dc = compare_decompositions(cat);
    CHECK(dc.off_block_mass < 1e-10);
    CHECK(std::abs(std::abs(dc.trivial_phase) - 1.0) < 1e-10);
    CHECK(dc.block_unitarity < 1e-10);
    auto rep = decomposition_report(cat);
    CHECK(rep.passed());
  }
}

TEST_CASE("disk cache round trip and corruption recovery") {
  TempDir dir("tlcache");
  {
    IrrepCategory cat(3, kDefaultEnvelope, dir.path);
    cat.embedding(4);
    CHECK(cat.stats().computed >= 2);
    CHECK(std::filesystem::exists(dir.path / "jw_N3_n4.cqga"));
    CHECK(std::filesystem::exists(dir.path / "embed_N3_n4.cqga"));
  }
  RMatrix reference = IrrepCategory(3).embedding(4);
  {
    IrrepCategory cat(3, kDefaultEnvelope, dir.path);
    CHECK(max_abs(cat.embedding(4) - reference) == 0.0);
    CHECK(cat.stats().disk_hits == 1);
    CHECK(cat.stats().computed == 0);
    cat.embedding(4);
    CHECK(cat.stats().memory_hits == 1);
  }
  {
    std::ofstream(dir.path / "jw_N3_n4.cqga", std::ios::binary | std::ios::trunc) << "garbage";
    IrrepCategory cat(3, kDefaultEnvelope, dir.path);
    const RMatrix& p = cat.jones_wenzl(4);
    CHECK(cat.stats().rejected == 1);
    CHECK(std::abs(p.trace() - cat.dim(4)) < 1e-9);
  }
  {
    // well-formed file with the wrong contents
    write_matrix(dir.path / "jw_N3_n3.cqga", CMatrix::Identity(27, 27));
    IrrepCategory cat(3, kDefaultEnvelope, dir.path);
    CHECK(std::abs(cat.jones_wenzl(3).trace() - cat.dim(3)) < 1e-9);
    CHECK(cat.stats().rejected == 1);
  }
}

TEST_CASE("CQGLAB_CACHE overrides the cache directory") {
  ::setenv("CQGLAB_CACHE", "/tmp/from_env", 1);
  CHECK(resolve_cache_dir("/tmp/flag") == "/tmp/from_env");
  ::unsetenv("CQGLAB_CACHE");
  CHECK(resolve_cache_dir("/tmp/flag") == "/tmp/flag");
}

TEST_CASE("array container layout") {
  TempDir dir("array");
  auto path = dir.path / "m.cqga";
  CMatrix m(2, 3);
  m << cplx(1, 2), 3, cplx(0, -1), 4, 5, cplx(6.5, 7);
  write_matrix(path, m);
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 4 + 4 + 4 + 4 + 2 * 8 + 6 * 16);
  CHECK(bytes.substr(0, 4) == "CQGA");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 2);
  CHECK(bytes[12] == 2);
  CHECK(bytes[16] == 2);
  CHECK(bytes[24] == 3);
  double first_re;
  std::memcpy(&first_re, bytes.data() + 32, 8);
  CHECK(first_re == 1.0);
  CHECK(read_matrix(path) == m);

  write_matrix(path, m, DType::complex64);
  CHECK(std::filesystem::file_size(path) == 32 + 6 * 8);
  CHECK(max_abs(CMatrix(read_matrix(path) - m)) < 1e-6);

  ArrayData cube{{2, 1, 2}, {1, 2, 3, 4}};
  write_array(path, cube);
  CHECK(read_array(path).shape == cube.shape);
  CHECK_THROWS_AS(read_matrix(path), ArrayFormatError);
  CHECK_THROWS_AS(write_array(path, ArrayData{{3}, {1}}), ArrayFormatError);

  auto corrupt = [&](std::size_t offset, char value) {
    write_matrix(path, m);
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(static_cast<std::streamoff>(offset));
    f.put(value);
  };
  corrupt(0, 'X');
  CHECK_THROWS_AS(read_array(path), ArrayFormatError);
  corrupt(4, 9);
  CHECK_THROWS_AS(read_array(path), ArrayFormatError);
  corrupt(8, 3);
  CHECK_THROWS_AS(read_array(path), ArrayFormatError);
  corrupt(16, 9);
  CHECK_THROWS_AS(read_array(path), ArrayFormatError);
}

TEST_CASE("conjugation matrix is the reshaped invariant vector of n⊗n") {
  for (auto [N, top] : {std::pair{2, 3}, std::pair{3, 2}}) {
    IrrepCategory cat(N);
    bool nontrivial = false;
    for (int n = 0; n <= top; ++n) {
      const Eigen::Index d = cat.dim(n);
      RMatrix r = cat.conjugation_matrix(n);
      CHECK(max_abs(RMatrix(r * r.transpose() - RMatrix::Identity(d, d))) < 1e-10);
      CHECK(max_abs(RMatrix(r - r.transpose())) < 1e-10);
      const RMatrix& t = cat.fusion_isometry(n, n, 0);
      RMatrix shaped(d, d);
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) shaped(a, b) = std::sqrt(double(d)) * t(a * d + b, 0);
      const double sign = shaped.cwiseProduct(r).sum() < 0 ? -1.0 : 1.0;
      CHECK(max_abs(RMatrix(sign * shaped - r)) < 1e-10);
      if (max_abs(RMatrix(r - RMatrix::Identity(d, d))) > 1e-3) nontrivial = true;
    }
    CHECK(max_abs(RMatrix(cat.conjugation_matrix(1) - RMatrix::Identity(N, N))) < 1e-14);
    CHECK(nontrivial);
  }
}

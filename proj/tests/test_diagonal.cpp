#include <doctest.h>

#include <random>

#include "cqglab/diagonal.hpp"
#include "cqglab/errors.hpp"
#include "cqglab/structure_io.hpp"
#include "support/finite_groups.hpp"

using namespace cqg;

namespace {

FiniteQuantumGroup load(const std::string& stem) { return load_structure(oracle::data_file(stem)); }

CVector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v;
}

// M₂(C) with a degenerate coproduct x ↦ ω(x)1⊗1 for a non-tracial ω. Its
// invariance system has the unique faithful solution ω, which is not a trace.
FiniteQuantumGroup non_tracial_example() {
  StructureConstants sc;
  sc.name = "M2 with a non-tracial invariant state";
  sc.dim = 4;
  sc.mult = Tensor3(4);
  sc.comult = Tensor3(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) sc.mult(i * 2 + j, j * 2 + l, i * 2 + l) = 1.0;
  sc.unit = CVector::Zero(4);
  sc.unit(0) = sc.unit(3) = 1.0;
  CVector omega = CVector::Zero(4);
  omega(0) = 0.7;
  omega(3) = 0.3;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k) sc.comult(a, b, k) = omega(k) * sc.unit(a) * sc.unit(b);
  sc.counit = omega;
  sc.antipode = CMatrix::Identity(4, 4);
  sc.star = CMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sc.star(i * 2 + j, j * 2 + i) = 1.0;
  return FiniteQuantumGroup(sc);
}

} // namespace

TEST_CASE("phi_D on F(Z2) is the normalized diagonal") {
  auto ctx = build_phi_d(load("F_Z2"));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(std::abs(ctx.phi_d.coeffs(x * 2 + y) - (x == y ? 0.5 : 0.0)) < 1e-15);
  CHECK(std::abs(ctx.phi_d(ctx.doubled.one()) - 1.0) < 1e-15);
}

TEST_CASE("phi_D is an idempotent state on every bundled example") {
  for (const char* stem : {"F_Z2", "F_Z4", "F_S3", "CS3"}) {
    CAPTURE(std::string(stem));
    auto ctx = build_phi_d(load(stem));
    auto rep = check_phi_d(ctx);
    CHECK(rep.passed());
    CHECK(rep.at("phi_d.idempotent").residual < 1e-10);
    CHECK(std::abs(ctx.phi_d(ctx.doubled.one()) - 1.0) < 1e-14);
  }
}

TEST_CASE("non-Kac input is refused") {
  auto g = non_tracial_example();
  auto h = haar_state(g);
  CHECK_FALSE(is_kac(g, h));
  try {
    build_phi_d(g);
    FAIL("expected KacRequiredError");
  } catch (const KacRequiredError& e) {
    CHECK(std::string(e.what()) == "Kac type required");
  }
}

TEST_CASE("conditional expectation properties") {
  for (const char* stem : {"F_Z2", "F_Z4", "F_S3", "CS3"}) {
    CAPTURE(std::string(stem));
    auto ctx = build_phi_d(load(stem));
    auto rep = check_expectation(ctx);
    for (const auto& c : rep.checks()) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
    CHECK((conditional_expectation(ctx, ctx.doubled.one()) - ctx.doubled.one()).norm() < 1e-14);
  }
  auto ctx = build_phi_d(load("F_S3"));
  double r = 0;
  for (int k = 0; k < ctx.doubled.dim(); ++k) {
    CVector ek = ctx.doubled.basis(k);
    CVector once = conditional_expectation(ctx, ek);
    r = std::max(r, (conditional_expectation(ctx, once) - once).norm());
  }
  CHECK(r < 1e-10);
}

TEST_CASE("trace defect separates abelian from non-abelian") {
  auto cs3 = build_phi_d(load("CS3"));
  CHECK(trace_defect(cs3.doubled, cs3.phi_d) > 1e-3);
  for (const char* stem : {"F_Z2", "F_Z4", "F_S3"}) {
    auto ctx = build_phi_d(load(stem));
    CHECK(trace_defect(ctx.doubled, ctx.phi_d) < 1e-10);
  }
}

TEST_CASE("E is classical diagonal averaging after the check identification") {
  for (auto [stem, grp] : {std::pair{"F_Z2", oracle::cyclic(2)}, std::pair{"F_Z4", oracle::cyclic(4)},
                           std::pair{"F_S3", oracle::symmetric3()}}) {
    CAPTURE(std::string(stem));
    auto ctx = build_phi_d(load(stem));
    const int n = grp.order;
    // (E f)(g1, g2) = |G|⁻¹ Σ_g f(g1 g, g2 g)
    CMatrix brute = CMatrix::Zero(n * n, n * n);
    for (int g1 = 0; g1 < n; ++g1)
      for (int g2 = 0; g2 < n; ++g2)
        for (int g = 0; g < n; ++g) brute(g1 * n + g2, grp.mul(g1, g) * n + grp.mul(g2, g)) += 1.0 / n;
    CMatrix c = check_identification(ctx.group);
    CMatrix e_check = c.inverse() * ctx.expectation * c;
    CHECK((e_check - brute).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("tilde delta") {
  auto ctx = build_phi_d(load("F_S3"));
  CHECK((tilde_delta(ctx, ctx.group.one()) - ctx.doubled.one()).norm() < 1e-15);
  CHECK(numerical_rank(ctx.tilde_delta, 1e-10) == 6);
}

TEST_CASE("range of E equals the embedded homogeneous space") {
  for (auto [stem, rank] : {std::pair{"F_Z2", 2}, std::pair{"F_Z4", 4}, std::pair{"F_S3", 6},
                            std::pair{"CS3", 6}}) {
    CAPTURE(std::string(stem));
    auto ctx = build_phi_d(load(stem));
    auto rc = compare_ranges(ctx);
    CHECK(rc.rank_expectation == rank);
    CHECK(rc.rank_tilde_delta == rank);
    CHECK(rc.max_angle < 1e-8);
    CHECK(check_range_equality(ctx).passed());
  }
}

TEST_CASE("gamma agrees with element convolution") {
  for (const char* stem : {"F_Z2", "F_Z4", "F_S3", "CS3"}) {
    CAPTURE(std::string(stem));
    auto ctx = build_phi_d(load(stem));
    auto rep = check_gamma(ctx);
    CHECK(rep.at("gamma").residual < 1e-10);
    for (int i = 0; i < ctx.group.dim(); ++i) {
      CVector a = ctx.group.basis(i);
      CHECK((gamma(ctx, a, ctx.group.one()) - ctx.haar(a) * ctx.group.one()).norm() < 1e-12);
    }
  }
}

TEST_CASE("gamma is the classical f1 * reflected f2 after the check identification") {
  for (auto [stem, grp] : {std::pair{"F_Z4", oracle::cyclic(4)}, std::pair{"F_S3", oracle::symmetric3()}}) {
    CAPTURE(std::string(stem));
    auto ctx = build_phi_d(load(stem));
    const int n = grp.order;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
      CVector f1 = random_vector(rng, n), f2 = random_vector(rng, n);
      // (γ̌(f1⊗f2))(g) = |G|⁻¹ Σ_x f1(x) f2(g⁻¹x)
      CVector brute = CVector::Zero(n);
      for (int g = 0; g < n; ++g)
        for (int x = 0; x < n; ++x) brute(g) += f1(x) * f2(grp.mul(grp.inv(g), x)) / double(n);
      CVector s_f2 = ctx.group.antipode(f2);
      CHECK((gamma(ctx, f1, s_f2) - brute).norm() < 1e-10);
    }
  }
}

TEST_CASE("gamma reports a broken context") {
  auto ctx = build_phi_d(load("F_S3"));
  ctx.expectation = CMatrix::Identity(36, 36);
  CHECK_THROWS_AS(gamma(ctx, ctx.group.basis(1), ctx.group.basis(2)), ConsistencyError);
}

TEST_CASE("idempotent states give expected coidalgebras") {
  auto g = load("F_Z4");
  auto h = haar_state(g);

  auto eps = idempotent_to_expectation(g, h, counit_functional(g));
  CHECK(eps.passed());
  CHECK(eps.metadata["range_rank"] == 4);

  auto hr = idempotent_to_expectation(g, h, h);
  CHECK(hr.passed());
  CHECK(hr.metadata["range_rank"] == 1);

  // uniform state on the subgroup {0, 2}
  Functional sub{CVector::Zero(4)};
  sub.coeffs(0) = sub.coeffs(2) = 0.5;
  auto sr = idempotent_to_expectation(g, h, sub);
  CHECK(sr.passed());
  CHECK(sr.metadata["range_rank"] == 2);
  CMatrix e = expectation_matrix(g, sub);
  // range = functions constant on the cosets {0,2} and {1,3}
  auto z4 = oracle::cyclic(4);
  for (int x = 0; x < 4; ++x) {
    CVector brute = CVector::Zero(4);
    for (int y = 0; y < 4; ++y) {
      double avg = 0;
      for (int s : {0, 2}) avg += (z4.mul(y, s) == x ? 0.5 : 0.0);
      brute(y) = avg;
    }
    CHECK((e * g.basis(x) - brute).norm() < 1e-14);
  }

  Functional point{g.basis(1)};
  auto nr = idempotent_to_expectation(g, h, point);
  CHECK(nr.metadata["status"] == "not idempotent");
  CHECK(nr.checks().size() == 2);
  CHECK_FALSE(nr.passed());
}

TEST_CASE("phi_D through the general correspondence") {
  auto ctx = build_phi_d(load("CS3"));
  auto hh = tensor_functional(ctx.haar, ctx.haar);
  auto rep = idempotent_to_expectation(ctx.doubled, hh, ctx.phi_d);
  CHECK(rep.passed());
  CHECK(rep.metadata["range_rank"] == 6);
}

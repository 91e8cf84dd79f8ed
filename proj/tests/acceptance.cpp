// Acceptance run: one PASS/FAIL line per criterion.
// Exit status is 0 iff the set of failing criteria equals the --expect-fail set,
// so a known defect stays visible as FAIL without hiding regressions elsewhere.

#include <CLI11.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cqglab/diagonal.hpp"
#include "cqglab/structure_io.hpp"
#include "cqglab/suites.hpp"
#include "support/finite_groups.hpp"

using namespace cqg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += (failures.empty() ? "" : ", ") + what;
    }
  }
  std::string text() const { return failures.empty() ? detail.str() : detail.str() + "  failed: " + failures; }
};

const char* const kFourExamples[] = {"F_Z2", "F_Z4", "F_S3", "CS3"};

bool is_function_algebra(const std::string& stem) { return stem.rfind("F_", 0) == 0; }

FiniteQuantumGroup load(const std::string& stem) { return load_structure(oracle::data_file(stem)); }

double worst_failing_or_max(const VerificationReport& r, const std::string& prefix, bool& all_pass) {
  double worst = 0;
  for (const auto& c : r.checks())
    if (c.name.rfind(prefix, 0) == 0) {
      all_pass = all_pass && c.pass;
      worst = std::max(worst, c.residual);
    }
  return worst;
}

// d_n = Σ_k (−1)^k C(n−k, k) N^{n−2k}
std::int64_t chebyshev_oracle(int N, int n) {
  std::int64_t s = 0;
  for (int k = 0; 2 * k <= n; ++k) {
    std::int64_t binom = 1;
    for (int i = 0; i < k; ++i) binom = binom * (n - k - i) / (i + 1);
    std::int64_t p = 1;
    for (int i = 0; i < n - 2 * k; ++i) p *= N;
    s += (k % 2 ? -1 : 1) * binom * p;
  }
  return s;
}

CMatrix u_oracle(int N) {
  CMatrix u = CMatrix::Zero(N * N, N * N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      if (j != k) u(j * N + k, j * N + k) = 1.0;
      else
        for (int l = 0; l < N; ++l)
          u(j * N + j, l * N + l) = std::polar(1.0 / std::sqrt(double(N)), 2 * M_PI * (j + 1) * (l + 1) / N);
    }
  return u;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(CQGLAB_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 1: Hopf axioms and Haar closed forms
Outcome criterion1() {
  Outcome o;
  double worst = 0;
  for (const char* stem : kFourExamples) {
    auto g = load(stem);
    auto rep = verify_hopf(g, 1e-10);
    for (const auto& c : rep.checks()) worst = std::max(worst, c.residual);
    o.require(rep.passed(), std::string(stem) + " Hopf axioms");
    Functional h = haar_state(g);
    CVector expected(g.dim());
    const CVector& unit = g.one();
    for (int i = 0; i < g.dim(); ++i)
      expected(i) = is_function_algebra(stem) ? cplx(1.0 / g.dim()) : cplx(std::abs(unit(i) - 1.0) < 1e-14 ? 1.0 : 0.0);
    const double err = (h.coeffs - expected).cwiseAbs().maxCoeff();
    o.require(err < 1e-10, std::string(stem) + " Haar closed form");
    worst = std::max(worst, err);
  }
  o.detail << "max residual " << worst;
  return o;
}

// 2: φ_D positivity, idempotence, traciality dichotomy
Outcome criterion2() {
  Outcome o;
  for (const char* stem : kFourExamples) {
    auto ctx = build_phi_d(load(stem));
    const double margin = state_margin(ctx.doubled, ctx.phi_d);
    Functional sq = convolve(ctx.doubled, ctx.phi_d, ctx.phi_d);
    const double idem = (sq.coeffs - ctx.phi_d.coeffs).cwiseAbs().maxCoeff();
    const double defect = trace_defect(ctx.doubled, ctx.phi_d);
    o.require(margin >= -1e-10, std::string(stem) + " positivity");
    o.require(idem < 1e-10, std::string(stem) + " idempotence");
    if (is_function_algebra(stem))
      o.require(defect < 1e-10, std::string(stem) + " traciality");
    else
      o.require(defect > 1e-3, std::string(stem) + " non-traciality");
    o.detail << stem << ": gram " << margin << ", idem " << idem << ", trace defect " << defect << "; ";
  }
  return o;
}

// 3: rank E = dim G and ran E = ran Δ̃
Outcome criterion3() {
  Outcome o;
  double worst = 0;
  for (const char* stem : kFourExamples) {
    auto ctx = build_phi_d(load(stem));
    auto rc = compare_ranges(ctx);
    o.require(rc.rank_expectation == ctx.group.dim(), std::string(stem) + " rank");
    o.require(rc.max_angle < 1e-8, std::string(stem) + " principal angle");
    worst = std::max(worst, rc.max_angle);
  }
  o.detail << "max principal angle " << worst;
  return o;
}

// 4: γ(a⊗b̃) = a⋆b, and classical diagonal averaging
Outcome criterion4() {
  Outcome o;
  double worst_gamma = 0, worst_classical = 0;
  for (const char* stem : kFourExamples) {
    auto ctx = build_phi_d(load(stem));
    double r = check_gamma(ctx).at("gamma").residual;
    worst_gamma = std::max(worst_gamma, r);
    o.require(r < 1e-10, std::string(stem) + " gamma");
  }
  for (auto [stem, grp] : {std::pair{"F_Z4", oracle::cyclic(4)}, std::pair{"F_S3", oracle::symmetric3()}}) {
    auto ctx = build_phi_d(load(stem));
    const int n = grp.order;
    CMatrix brute = CMatrix::Zero(n * n, n * n);
    for (int g1 = 0; g1 < n; ++g1)
      for (int g2 = 0; g2 < n; ++g2)
        for (int g = 0; g < n; ++g) brute(g1 * n + g2, grp.mul(g1, g) * n + grp.mul(g2, g)) += 1.0 / n;
    CMatrix c = check_identification(ctx.group);
    double r = (c.inverse() * ctx.expectation * c - brute).cwiseAbs().maxCoeff();
    // γ(f₁⊗S f₂)(g) = |G|⁻¹ Σ_x f₁(x) f₂(g⁻¹x)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CVector f1 = CVector::Unit(n, i), f2 = CVector::Unit(n, j), want = CVector::Zero(n);
        for (int g = 0; g < n; ++g)
          for (int x = 0; x < n; ++x) want(g) += f1(x) * f2(grp.mul(grp.inv(g), x)) / double(n);
        r = std::max(r, (gamma(ctx, f1, ctx.group.antipode(f2)) - want).norm());
      }
    worst_classical = std::max(worst_classical, r);
    o.require(r < 1e-10, std::string(stem) + " classical cross-check");
  }
  o.detail << "gamma " << worst_gamma << ", classical " << worst_classical;
  return o;
}

// 5: O_N⁺ category suite with a cold cache
Outcome criterion5(const fs::path& cache) {
  Outcome o;
  RunConfig cfg;
  cfg.jobs = 4;
  for (int N : {2, 3, 4}) {
    fs::remove_all(cache);
    IrrepCategory cat(N, kDefaultEnvelope, cache);
    FusionWindow w = FusionWindow::defaults(N);
    for (int n = 0; n <= std::max(w.n_max, w.window); ++n)
      o.require(cat.dim(n) == chebyshev_oracle(N, n), "d_" + std::to_string(n) + " for N=" + std::to_string(N));
    for (int b = 0; b <= w.window; ++b)
      for (int g = 0; b + g <= w.window; ++g) {
        std::int64_t sum = 0;
        for (int a = std::abs(b - g); a <= b + g; a += 2) sum += chebyshev_oracle(N, a);
        o.require(sum == chebyshev_oracle(N, b) * chebyshev_oracle(N, g), "dimension sum");
      }
    auto rep = fusion_suite(cat, w, cfg);
    bool ok = true;
    double jw_trace = worst_failing_or_max(rep, "jw.trace", ok);
    double jw_idem = worst_failing_or_max(rep, "jw.idempotent", ok);
    double unitary = worst_failing_or_max(rep, "fusion.unitary", ok);
    worst_failing_or_max(rep, "fusion.dimension_sum", ok);
    worst_failing_or_max(rep, "dims.", ok);
    o.require(ok, "fusion suite N=" + std::to_string(N));
    o.detail << "N=" << N << " (n<=" << w.n_max << ", b+g<=" << w.window << "): trace " << jw_trace << ", idem "
             << jw_idem << ", unitary " << unitary << "; ";
  }
  return o;
}

// 6: U unitary with ξ last, and it agrees with V(1,1)
Outcome criterion6() {
  Outcome o;
  for (int N : {2, 3, 4}) {
    CMatrix u = fourier_fusion_unitary(N);
    const Eigen::Index n2 = N * N;
    o.require((u - u_oracle(N)).cwiseAbs().maxCoeff() < 1e-14, "U formula N=" + std::to_string(N));
    const double unit = (u.adjoint() * u - CMatrix::Identity(n2, n2)).cwiseAbs().maxCoeff();
    CVector xi = CVector::Zero(n2);
    for (int i = 0; i < N; ++i) xi(i * N + i) = 1.0 / std::sqrt(double(N));
    const double last = (u.col(n2 - 1) - xi).cwiseAbs().maxCoeff();
    IrrepCategory cat(N);
    const double off = compare_decompositions(cat).off_block_mass;
    o.require(unit < 1e-12 && last < 1e-12 && off < 1e-10, "N=" + std::to_string(N));
    o.detail << "N=" << N << ": unitary " << unit << ", last column " << last << ", off-block " << off << "; ";
  }
  return o;
}

// 7: coproduct norm identity, submultiplicativity, associativity
Outcome criterion7() {
  Outcome o;
  RunConfig cfg;
  cfg.jobs = 4;
  for (int N : {2, 3}) {
    IrrepCategory cat(N);
    auto rep = algebra_suite(cat, 100, cfg);
    bool ok = true;
    double hs = worst_failing_or_max(rep, "coproduct.hs_norm", ok);
    double ratio = worst_failing_or_max(rep, "product.submultiplicative", ok);
    double assoc = worst_failing_or_max(rep, "product.associativity", ok);
    o.require(ok && rep.passed(), "algebra suite N=" + std::to_string(N));
    o.detail << "N=" << N << ": hs " << hs << ", max ratio " << ratio << ", assoc " << assoc << "; ";
  }
  return o;
}

// 8: derivation identity, symbol, growth, cb bound
Outcome criterion8() {
  Outcome o;
  RunConfig cfg;
  cfg.jobs = 4;
  for (auto [N, n_max] : {std::pair{2, 6}, std::pair{3, 5}}) {
    IrrepCategory cat(N);
    auto rep = derivation_suite(cat, n_max, cfg);
    bool ok = true;
    double id = worst_failing_or_max(rep, "derivation_identity", ok);
    double fd = worst_failing_or_max(rep, "symbol.fd", ok);
    worst_failing_or_max(rep, "cb.", ok);
    o.require(ok && rep.passed(), "derivation suite N=" + std::to_string(N));
    o.detail << "N=" << N << ": identity " << id << ", fd " << fd << ", cb " << rep.metadata["cb_bound"].get<double>()
             << "; ";
  }
  return o;
}

// 9: non-innerness witness with B = e11, C = e12 + e21
Outcome criterion9() {
  Outcome o;
  RunConfig cfg;
  for (int N : {2, 3, 4}) {
    auto rep = witness_suite(N, 100, WitnessPair::Stated, cfg);
    const double lhs = rep.at("witness.lhs").residual, rhs = rep.at("witness.rhs").residual;
    const double lemma = rep.at("lemma.formula").residual;
    o.require(lhs >= 1.0, "|lhs| >= 1 for N=" + std::to_string(N));
    o.require(rhs < 1e-10, "max |rhs| < 1e-10 for N=" + std::to_string(N));
    o.require(lemma < 1e-10, "coefficient formula for N=" + std::to_string(N));
    o.detail << "N=" << N << ": |lhs| " << lhs << ", max |rhs| " << rhs << ", formula " << lemma << "; ";
  }
  return o;
}

// informational: the corrected witness √N(e2⊗e1 − e1⊗e2)ξ*
Outcome range_witness_note() {
  Outcome o;
  RunConfig cfg;
  for (int N : {2, 3, 4}) {
    auto rep = witness_suite(N, 100, WitnessPair::Range, cfg);
    o.require(rep.passed(), "N=" + std::to_string(N));
    o.detail << "N=" << N << ": |lhs| " << rep.at("witness.lhs").residual << ", max |rhs| "
             << rep.at("witness.rhs").residual << "; ";
  }
  return o;
}

// 10: identical config and seed give identical reports
Outcome criterion10(const fs::path& dir) {
  Outcome o;
  const std::vector<std::string> runs = {
      "onplus derivation --N 3 --nmax 5",
      "onplus witness --N 3 --trials 100 --seed 42 --pair range",
      "onplus witness --N 4 --trials 100 --seed 42",
      "onplus algebra --N 2 --trials 100 --seed 9",
      "fqg " + oracle::data_file("CS3") + " --full",
  };
  int k = 0;
  for (const auto& args : runs) {
    fs::path a = dir / ("a" + std::to_string(k) + ".json"), b = dir / ("b" + std::to_string(k) + ".json");
    ++k;
    run_cli("--jobs 1 --report " + a.string() + " " + args);
    run_cli("--jobs 4 --report " + b.string() + " " + args);
    if (!fs::exists(a) || !fs::exists(b)) {
      o.require(false, "no report from: " + args);
      continue;
    }
    auto ja = nlohmann::json::parse(std::ifstream(a)), jb = nlohmann::json::parse(std::ifstream(b));
    o.require(deterministic_view(ja) == deterministic_view(jb), "reports differ: " + args);
  }
  o.detail << runs.size() << " report pairs compared (jobs 1 vs 4)";
  return o;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  CLI11_PARSE(app, argc, argv);

  fs::path scratch = fs::temp_directory_path() / "cqglab_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  ::setenv("CQGLAB_CACHE", (scratch / "cli_cache").c_str(), 1);

  struct Criterion {
    int id;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 5, criterion1},
      {2, 0, criterion2},
      {3, 0, criterion3},
      {4, 0, criterion4},
      {5, 120, [&] { return criterion5(scratch / "cold_cache"); }},
      {6, 0, criterion6},
      {7, 0, criterion7},
      {8, 0, criterion8},
      {9, 30, criterion9},
      {10, 0, [&] { return criterion10(scratch); }},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0) o.require(s < c.limit_s, "runtime over " + std::to_string(int(c.limit_s)) + " s");
    if (!o.pass) failed.insert(c.id);
    std::printf("criterion %2d: %s  (%.2f s)  %s\n", c.id, o.pass ? "PASS" : "FAIL", s, o.text().c_str());
    std::fflush(stdout);
  }
  Outcome note = range_witness_note();
  std::printf("note: corrected witness sqrt(N)(e2⊗e1 − e1⊗e2)ξ*: %s  %s\n", note.pass ? "PASS" : "FAIL",
              note.text().c_str());

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  std::printf("%zu/%zu criteria pass", criteria.size() - failed.size(), criteria.size());
  if (!expected.empty()) {
    std::printf("; expected to fail:");
    for (int e : expected) std::printf(" %d", e);
  }
  std::printf("\n");
  return failed == expected && note.pass ? 0 : 1;
}

#include "cqglab/suites.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "cqglab/diagonal.hpp"
#include "cqglab/errors.hpp"

namespace cqg {

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["tol"] = tol ? nlohmann::json(*tol) : nlohmann::json(nullptr);
  j["seed"] = seed;
  j["envelope"] = envelope;
  j["suites"] = suites;
  return j;
}

ReportSink::ReportSink(std::filesystem::path report_path) : path_(std::move(report_path)) {
  if (path_.empty()) return;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  partial_.open(partial_path(), std::ios::trunc);
  if (!partial_) throw InputError("cannot write " + partial_path().string());
}

std::filesystem::path ReportSink::partial_path() const {
  return path_.empty() ? path_ : std::filesystem::path(path_.string() + ".partial.jsonl");
}

void ReportSink::record(const Check& c) {
  if (path_.empty()) return;
  std::lock_guard lock(mu_);
  partial_ << check_to_json(c).dump() << '\n';
  partial_.flush();
}

void ReportSink::finalize(const VerificationReport& report) {
  if (path_.empty()) return;
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw InputError("cannot write " + path_.string());
  out << report.to_json().dump(2) << '\n';
  out.close();
  partial_.close();
  std::filesystem::remove(partial_path());
}

std::vector<Check> run_pool(const std::vector<std::function<Check()>>& tasks, int jobs, ReportSink* sink) {
  std::vector<Check> out(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = timed(tasks[i]);
        if (sink) sink->record(out[i]);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, int(tasks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

nlohmann::json deterministic_view(const nlohmann::json& report) {
  nlohmann::json j = report;
  if (j.contains("metadata") && j["metadata"].is_object()) j["metadata"].erase("runtime");
  if (j.contains("checks"))
    for (auto& c : j["checks"]) c.erase("runtime_ms");
  return j;
}

namespace {

std::string pair_name(const std::string& stem, int a, int b) {
  return stem + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

std::string label_name(const std::string& stem, int n) { return stem + "[" + std::to_string(n) + "]"; }

// independent stream per check, so results do not depend on scheduling
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(salt),
                    std::uint32_t(salt >> 32)};
  return std::mt19937_64(seq);
}

CMatrix gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

BlockElement gaussian_element(std::mt19937_64& rng, const IrrepCategory& cat, int top) {
  std::map<int, CMatrix> b;
  for (int l = 0; l <= top; ++l) b[l] = gaussian(rng, cat.dim(l));
  return BlockElement(std::move(b));
}

void add_all(VerificationReport& rep, std::vector<Check> checks) {
  for (auto& c : checks) rep.add(std::move(c));
}

// Runs one stage; an exception becomes failed checks named `names`.
void stage(VerificationReport& rep, const std::vector<std::string>& names, ReportSink* sink,
           const std::function<VerificationReport()>& f) {
  try {
    VerificationReport part = f();
    for (const auto& c : part.checks()) {
      if (sink) sink->record(c);
      rep.add(c);
    }
  } catch (const std::exception& e) {
    for (const auto& n : names) {
      Check c = Check::flag(n, "plumbing", false, std::string("stage failed: ") + e.what());
      if (sink) sink->record(c);
      rep.add(c);
    }
  }
}

} // namespace

VerificationReport fqg_suite(const FiniteQuantumGroup& g, const RunConfig& cfg, ReportSink* sink) {
  const double tol = cfg.tol_or(1e-10);
  VerificationReport rep;
  stage(rep, {"hopf"}, sink, [&] {
    VerificationReport r;
    r.append(verify_hopf(g, tol), "hopf.");
    return r;
  });
  stage(rep, {"haar.invariance", "haar.state"}, sink, [&] {
    VerificationReport r;
    Functional h = haar_state(g, tol);
    r.add(timed([&] {
      return Check::below("haar.invariance", "(h⊗id)Δ = (id⊗h)Δ = h(·)1", haar_invariance_residual(g, h), tol);
    }));
    r.add(timed([&] {
      const double margin = state_margin(g, h);
      const double defect = std::max(0.0, -margin) + std::abs(h(g.one()) - 1.0);
      Check c = Check::below("haar.state", "h is a state", defect, tol);
      c.note = "Gram min eigenvalue " + std::to_string(margin);
      return c;
    }));
    return r;
  });
  std::optional<DiagonalContext> ctx;
  stage(rep, {"phi_d.state", "phi_d.idempotent"}, sink, [&] {
    ctx = build_phi_d(g, tol);
    return check_phi_d(*ctx);
  });
  stage(rep, {"range_equality"}, sink, [&] {
    if (!ctx) throw ConsistencyError("φ_D unavailable");
    return check_range_equality(*ctx, cfg.tol_or(1e-8));
  });
  stage(rep, {"gamma"}, sink, [&] {
    if (!ctx) throw ConsistencyError("φ_D unavailable");
    return check_gamma(*ctx);
  });
  return rep;
}

VerificationReport fqg_extended_suite(const FiniteQuantumGroup& g, const RunConfig& cfg, ReportSink* sink) {
  VerificationReport rep;
  stage(rep, {"expectation"}, sink, [&] { return check_expectation(build_phi_d(g, cfg.tol_or(1e-10)), cfg.seed); });
  return rep;
}

FusionWindow FusionWindow::defaults(int N) {
  if (N <= 2) return {6, 6};
  if (N == 3) return {6, 5};
  return {4, 4};
}

VerificationReport fusion_suite(const IrrepCategory& cat, FusionWindow w, const RunConfig& cfg, ReportSink* sink) {
  const int N = cat.N();
  cat.require_envelope_for(std::max(w.n_max, w.window));
  VerificationReport rep;

  rep.add(timed([&] {
    // d_n as exact integers: the recursion and the closed form for N = 2
    bool ok = cat.dim(0) == 1 && cat.dim(1) == N;
    for (int n = 1; n < std::max(w.n_max, w.window); ++n)
      ok = ok && cat.dim(n + 1) == std::int64_t(N) * cat.dim(n) - cat.dim(n - 1);
    if (N == 2)
      for (int n = 0; n <= w.n_max; ++n) ok = ok && cat.dim(n) == n + 1;
    return Check::flag("dims.chebyshev", "d_{n+1} = N d_n − d_{n−1}", ok);
  }));
  for (int b = 0; b <= w.window; ++b)
    for (int g = 0; b + g <= w.window; ++g)
      rep.add(timed([&] {
        std::int64_t sum = 0;
        for (int a : fusion_range(b, g).components) sum += cat.dim(a);
        return Check::flag(pair_name("fusion.dimension_sum", b, g), "Σ_{α⊆β⊗γ} d_α = d_β d_γ",
                           sum == cat.dim(b) * cat.dim(g));
      }));
  for (const auto& c : rep.checks())
    if (sink) sink->record(c);

  std::vector<std::function<Check()>> tasks;
  for (int n = 0; n <= w.n_max; ++n) {
    tasks.push_back([&, n] {
      const RMatrix& p = cat.jones_wenzl(n);
      return Check::below(label_name("jw.trace", n), "Tr p_n = d_n", std::abs(p.trace() - double(cat.dim(n))),
                          cfg.tol_or(1e-7));
    });
    tasks.push_back([&, n] {
      const RMatrix& p = cat.jones_wenzl(n);
      return Check::below(label_name("jw.idempotent", n), "p_n² = p_n", max_abs(RMatrix(p * p - p)),
                          cfg.tol_or(1e-8));
    });
  }
  for (int b = 0; b <= w.window; ++b)
    for (int g = 0; b + g <= w.window; ++g)
      tasks.push_back([&, b, g] {
        const RMatrix& v = cat.fusion_unitary(b, g);
        const Eigen::Index n = v.rows();
        return Check::below(pair_name("fusion.unitary", b, g), "V(β,γ) unitary",
                            max_abs(RMatrix(v.transpose() * v - RMatrix::Identity(n, n))), cfg.tol_or(1e-8));
      });
  add_all(rep, run_pool(tasks, cfg.jobs, sink));

  stage(rep, {"u.unitary"}, sink, [&] { return decomposition_report(cat, cfg.tol_or(1e-10)); });
  return rep;
}

VerificationReport algebra_suite(const IrrepCategory& cat, int trials, const RunConfig& cfg, ReportSink* sink) {
  cat.require_envelope_for(6);
  const QData q = QData::kac(cat, 8);
  std::vector<std::function<Check()>> tasks;
  for (int b = 0; b <= 4; ++b)
    for (int g = 0; b + g <= 4; ++g)
      tasks.push_back([&, b, g] {
        auto rng = stream(cfg.seed, 100 + 10 * b + g);
        BlockElement x = gaussian_element(rng, cat, 4);
        double expected = 0;
        for (int a : fusion_range(b, g).components) expected += std::pow(hs_norm(x.block(a, cat.dim(a))), 2);
        return Check::below(pair_name("coproduct.hs_norm", b, g), "‖Δ̂(X)(β,γ)‖₂² = Σ_{δ⊆β⊗γ} ‖X_δ‖₂²",
                            std::abs(hs_norm(coproduct_block(x, b, g, cat)) - std::sqrt(expected)),
                            cfg.tol_or(1e-8));
      });
  tasks.push_back([&] {
    auto rng = stream(cfg.seed, 1);
    double worst = 0;
    for (int k = 0; k < trials; ++k) {
      BlockElement x = gaussian_element(rng, cat, 2), y = gaussian_element(rng, cat, 2);
      worst = std::max(worst, adelta_norm(adelta_product(x, y, cat, 4), q) / (adelta_norm(x, q) * adelta_norm(y, q)));
    }
    Check c = Check::below("product.submultiplicative", "‖X⋆Y‖ ≤ ‖X‖‖Y‖ in A_Δ", worst, 1.0 + cfg.tol_or(1e-12));
    c.note = "residual is the largest ratio ‖X⋆Y‖/(‖X‖‖Y‖)";
    return c;
  });
  tasks.push_back([&] {
    // products up to label 6 dominate the suite, so the trials get their own streams and run in the pool
    std::vector<std::function<Check()>> trial_tasks;
    for (int k = 0; k < trials; ++k)
      trial_tasks.push_back([&, k] {
        auto rng = stream(cfg.seed, 10000 + std::uint64_t(k));
        BlockElement a = gaussian_element(rng, cat, 2), b = gaussian_element(rng, cat, 2),
                     c = gaussian_element(rng, cat, 2);
        BlockElement left = adelta_product(adelta_product(a, b, cat, 6), c, cat, 6);
        BlockElement right = adelta_product(a, adelta_product(b, c, cat, 6), cat, 6);
        Check t;
        t.residual = max_block_difference(left, right);
        return t;
      });
    double worst = 0;
    for (const auto& t : run_pool(trial_tasks, cfg.jobs)) worst = std::max(worst, t.residual);
    return Check::below("product.associativity", "(X⋆Y)⋆Z = X⋆(Y⋆Z)", worst, cfg.tol_or(1e-8));
  });
  VerificationReport rep;
  add_all(rep, run_pool(tasks, cfg.jobs, sink));
  return rep;
}

VerificationReport derivation_suite(const IrrepCategory& cat, int n_max, const RunConfig& cfg, ReportSink* sink) {
  const int N = cat.N();
  cat.require_envelope_for(n_max);
  const double tol = cfg.tol_or(1e-8);

  // warm the embeddings in parallel, then assemble the symbol from the cache
  std::vector<std::function<Check()>> warm;
  for (int n = 0; n <= n_max; ++n)
    warm.push_back([&, n] {
      cat.embedding(n);
      return Check{};
    });
  run_pool(warm, cfg.jobs);
  const DerivationSymbol a = derivation_symbol(cat, n_max);
  const CbBound cb = cb_bound(cat, a);

  std::vector<std::function<Check()>> tasks;
  tasks.push_back([&] { return Check::below("symbol.a0", "A_0 = 0", max_abs(a.at(0)), tol); });
  if (n_max >= 1)
    tasks.push_back([&] {
      return Check::below("symbol.a1", "A_1 = e_21 − e_12", max_abs(RMatrix(a.at(1) - torus_generator(N))), tol);
    });
  for (int n = 0; n <= n_max; ++n) {
    tasks.push_back([&, n] {
      return Check::below(label_name("symbol.antisymmetric", n), "A_nᵗ = −A_n",
                          max_abs(RMatrix(a.at(n) + a.at(n).transpose())), tol);
    });
    tasks.push_back([&, n] {
      return Check::below(label_name("symbol.fd", n), "A_n = d/dt C_{t,n} at t = 0", symbol_fd_residual(cat, a, n),
                          tol);
    });
  }
  for (int b = 0; b <= n_max; ++b)
    for (int g = 0; b + g <= n_max; ++g)
      tasks.push_back([&, b, g] {
        return Check::below(pair_name("derivation_identity", b, g), "Δ̂(A) = A⊗I + I⊗A",
                            derivation_identity_residual(cat, a, b, g), tol);
      });
  for (int b = 0; b <= std::min(2, n_max); ++b)
    for (int g = 0; b + g <= std::min(3, n_max); ++g)
      tasks.push_back([&, b, g] {
        Check c = grouplike_check(cat, 0.7, b, g, tol).checks().front();
        return c;
      });
  for (int n = 1; n <= n_max; ++n)
    tasks.push_back([&, n] {
      return Check::below(label_name("cb.growth", n), "‖A_n‖ ≤ n‖A_1‖",
                          std::max(0.0, cb.norms.at(n) - n * cb.norms.at(1)), cfg.tol_or(1e-10));
    });
  tasks.push_back([&] {
    Check c = Check::flag("cb.bound", "‖Ψ∘T_A‖_cb ≤ sup_n ‖A_n‖/d_n", std::isfinite(cb.value));
    char buf[64];
    std::snprintf(buf, sizeof buf, "value %.12g", cb.value);
    c.note = buf;
    return c;
  });
  // Leibniz needs A on the fusion closure of the supports
  const int s = std::min(2, n_max / 2);
  tasks.push_back([&, s] {
    auto rng = stream(cfg.seed, 3);
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
      BlockElement x = gaussian_element(rng, cat, s), y = gaussian_element(rng, cat, s),
                   w = gaussian_element(rng, cat, 2 * s);
      worst = std::max(worst, leibniz_residual(cat, a, x, y, w, 4 * s));
    }
    return Check::below("leibniz", "D(X⋆Y) = X·D(Y) + D(X)·Y", worst, cfg.tol_or(1e-7));
  });
  tasks.push_back([&] {
    auto rng = stream(cfg.seed, 4);
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
      BlockElement x = gaussian_element(rng, cat, 1), y = gaussian_element(rng, cat, 1),
                   w = gaussian_element(rng, cat, 2);
      worst = std::max(worst, bimodule_residual(cat, x, y, w, 4));
    }
    return Check::below("psi.bimodule", "Ψ is an A_Δ-bimodule map", worst, cfg.tol_or(1e-7));
  });

  VerificationReport rep;
  add_all(rep, run_pool(tasks, cfg.jobs, sink));
  rep.metadata["cb_bound"] = cb.value;
  return rep;
}

VerificationReport witness_suite(int N, int trials, WitnessPair pair, const RunConfig& cfg, ReportSink* sink) {
  if (N < 2) throw DomainError("N must be at least 2");
  if (trials < 1) throw ConfigurationError("at least one trial is needed");
  const int m = N * N - 1;
  const auto terms = pair == WitnessPair::Stated ? stated_witness(N) : range_witness(N);
  const CMatrix u = fourier_fusion_unitary(N);
  auto rng = stream(cfg.seed, 1000 + N);

  double lemma = 0, rhs_max = 0, rhs_printed_max = 0;
  WitnessValue first{};
  std::normal_distribution<double> g;
  for (int k = 0; k < trials; ++k) {
    CMatrix y2 = gaussian(rng, m);
    cplx y0(g(rng), g(rng));
    CMatrix yt = CMatrix::Zero(m + 1, m + 1);
    yt.topLeftCorner(m, m) = y2;
    yt(m, m) = y0;
    lemma = std::max(lemma, max_abs(CMatrix(dhat_y_block11(N, y0, y2) - u * yt * u.adjoint())));
    WitnessValue v = inner_witness(N, y0, y2, terms);
    if (k == 0) first = v;
    rhs_max = std::max(rhs_max, std::abs(v.rhs));
    rhs_printed_max = std::max(rhs_printed_max, std::abs(v.rhs_printed));
  }

  VerificationReport rep;
  rep.add(Check::below("lemma.formula", "Δ̂(Y)(1,1) = U(Y_2 ⊕ Y_0)U*", lemma, cfg.tol_or(1e-10)));
  Check lhs = Check::above("witness.lhs", "lhs = d_1 Tr(C_1ᵗ A_1 B_1) ≠ 0", std::abs(first.lhs), 1.0 - 1e-12);
  lhs.note = "|lhs| must be at least 1";
  rep.add(lhs);
  Check rhs = Check::below("witness.rhs", "rhs = d_1² Tr⊗Tr(Z(C_1⊗B_1)) = 0 for every Y", rhs_max,
                           cfg.tol_or(1e-10));
  rhs.note = "max over " + std::to_string(trials) + " seeded Y";
  rep.add(rhs);
  for (const auto& c : rep.checks())
    if (sink) sink->record(c);

  auto cj = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  rep.metadata["witness"] = {
      {"pair", pair == WitnessPair::Stated ? "stated" : "range"},
      {"lhs", cj(first.lhs)},
      {"lhs_printed_constant", cj(first.lhs_printed)},
      {"rhs_max", rhs_max},
      {"rhs_printed_constant_max", rhs_printed_max},
      {"constants", "lhs/rhs use the ĥ weights d_1 = N and d_1² = N²; the printed constants are 2 and 4"}};
  return rep;
}

const std::vector<CoverageEntry>& coverage_manifest() {
  static const std::vector<CoverageEntry> m = {
      {"Hopf axioms of the structure constants", "fqg", "hopf."},
      {"Haar state: invariant, normalized, positive", "fqg", "haar."},
      {"φ_D is an idempotent state", "fqg", "phi_d.state"},
      {"φ_D⋆φ_D = φ_D", "fqg", "phi_d.idempotent"},
      {"ran E_φD = Δ̃(A)", "fqg", "range_equality"},
      {"γ(a⊗b̃) = a⋆b", "fqg", "gamma"},
      {"E_φD is a Haar-preserving conditional expectation", "fqg-extended", "expectation."},
      {"Δ̃ is an injective homomorphism", "fqg-extended", "tilde_delta."},
      {"φ_D tracial iff abelian", "fqg-extended", "phi_d.trace_dichotomy"},
      {"Chebyshev dimensions", "fusion", "dims."},
      {"Jones–Wenzl projectors", "fusion", "jw."},
      {"fusion dimension sums", "fusion", "fusion.dimension_sum"},
      {"V(β,γ) unitary", "fusion", "fusion.unitary"},
      {"U unitary with ξ as last column", "fusion", "u."},
      {"U and V(1,1) give the same decomposition", "fusion", "decomposition."},
      {"‖Δ̂(X)(β,γ)‖₂ identity", "algebra", "coproduct.hs_norm"},
      {"A_Δ submultiplicative", "algebra", "product.submultiplicative"},
      {"A_Δ product associative", "algebra", "product.associativity"},
      {"symbol blocks A_0, A_1, antisymmetry, finite differences", "derivation", "symbol."},
      {"Δ̂(A) = A⊗I + I⊗A", "derivation", "derivation_identity"},
      {"C_t group-like", "derivation", "grouplike"},
      {"‖A_n‖ ≤ n‖A_1‖ and the cb bound", "derivation", "cb."},
      {"Leibniz rule of Ψ∘T_A", "derivation", "leibniz"},
      {"Ψ bimodule map", "derivation", "psi.bimodule"},
      {"Δ̂(Y)(1,1) coefficient formula", "witness", "lemma.formula"},
      {"non-innerness witness", "witness", "witness."},
  };
  return m;
}

} // namespace cqg

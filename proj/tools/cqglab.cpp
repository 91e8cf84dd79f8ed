// cqglab: verification campaigns for finite quantum groups and O_N⁺.
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 envelope exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <thread>

#include "cqglab/array_file.hpp"
#include "cqglab/errors.hpp"
#include "cqglab/structure_io.hpp"
#include "cqglab/suites.hpp"

using namespace cqg;

namespace {

struct Options {
  RunConfig cfg;
  std::string cache_dir;
  std::string report;
  // fqg
  std::string fqg_file;
  bool full = false;
  // onplus
  int N = 2;
  int max_label = 8;
  int n = 2;
  int n_max = 6;
  int fusion_nmax = -1;
  int window = -1;
  int trials = 100;
  std::string in_file;
  std::string which = "adelta";
  std::string pair = "stated";
};

void print_report(const VerificationReport& rep) {
  int passed = 0;
  for (const auto& c : rep.checks()) {
    passed += c.pass;
    std::printf("%s  %-34s residual %.3e  tol %.1e%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual,
                c.tol, c.note.empty() ? "" : "  # ", c.note.c_str());
  }
  std::printf("%s: %d/%zu checks pass\n", rep.passed() ? "PASS" : "FAIL", passed, rep.checks().size());
}

IrrepCategory make_category(const Options& o) {
  return IrrepCategory(o.N, o.cfg.envelope, resolve_cache_dir(o.cache_dir));
}

nlohmann::json runtime_section(const Options& o, const IrrepCategory* cat) {
  nlohmann::json rt;
  rt["jobs"] = o.cfg.jobs;
  if (cat) {
    auto s = cat->stats();
    rt["cache"] = {{"dir", cat->cache_dir().string()},
                   {"memory_hits", s.memory_hits},
                   {"disk_hits", s.disk_hits},
                   {"computed", s.computed},
                   {"rejected", s.rejected}};
  }
  return rt;
}

int finish(VerificationReport rep, const Options& o, const std::string& suite, nlohmann::json extra,
           const IrrepCategory* cat, ReportSink& sink) {
  nlohmann::json meta = {{"tool", "cqglab"},      {"tool_version", kToolVersion}, {"suite", suite},
                         {"seed", o.cfg.seed},    {"config", o.cfg.to_json()}};
  for (auto& [k, v] : extra.items()) meta[k] = v;
  for (auto& [k, v] : rep.metadata.items()) meta[k] = v;
  meta["runtime"] = runtime_section(o, cat);
  rep.metadata = meta;
  sink.finalize(rep);
  print_report(rep);
  return rep.passed() ? 0 : 1;
}

int run_fqg(Options& o) {
  FiniteQuantumGroup g = load_structure(o.fqg_file);
  ReportSink sink(o.cfg.report_path);
  VerificationReport rep = fqg_suite(g, o.cfg, &sink);
  if (o.full) rep.append(fqg_extended_suite(g, o.cfg, &sink));
  return finish(rep, o, o.full ? "fqg --full" : "fqg",
                {{"input", o.fqg_file}, {"name", g.constants().name}, {"dim", g.dim()}}, nullptr, sink);
}

int run_dims(const Options& o) {
  if (o.max_label < 0) throw ConfigurationError("--max must be non-negative");
  for (int k = 0; k <= o.max_label; ++k) std::printf(k ? " %lld" : "%lld", (long long)chebyshev_dim(o.N, k));
  std::printf("\n");
  return 0;
}

int run_jw(const Options& o) {
  IrrepCategory cat = make_category(o);
  const RMatrix& p = cat.jones_wenzl(o.n);
  nlohmann::json out = {{"N", o.N},
                        {"n", o.n},
                        {"d_n", cat.dim(o.n)},
                        {"size", p.rows()},
                        {"trace", p.trace()},
                        {"idempotent_residual", max_abs(RMatrix(p * p - p))},
                        {"runtime", runtime_section(o, &cat)}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_norms(const Options& o) {
  BlockElement x = load_block(o.in_file);
  int top = 0;
  for (const auto& [l, m] : x.blocks()) top = std::max(top, l);
  QData q = QData::kac([&](int l) -> std::int64_t {
    if (const CMatrix* b = x.find(l)) return b->rows();
    return 1;
  }, top);
  double v;
  if (o.which == "fourier")
    v = fourier_algebra_norm(x, q);
  else if (o.which == "adelta")
    v = adelta_norm(x, q);
  else
    v = adelta_dual_norm(x, q);
  std::printf("%.17g\n", v);
  return 0;
}

int run_fusion(Options& o) {
  IrrepCategory cat = make_category(o);
  ReportSink sink(o.cfg.report_path);
  FusionWindow w = FusionWindow::defaults(o.N);
  if (o.window >= 0) w.window = o.window;
  if (o.fusion_nmax >= 0) w.n_max = o.fusion_nmax;
  auto rep = fusion_suite(cat, w, o.cfg, &sink);
  return finish(rep, o, "onplus fusion", {{"N", o.N}, {"n_max", w.n_max}, {"window", w.window}}, &cat, sink);
}

int run_algebra(Options& o) {
  IrrepCategory cat = make_category(o);
  ReportSink sink(o.cfg.report_path);
  auto rep = algebra_suite(cat, o.trials, o.cfg, &sink);
  return finish(rep, o, "onplus algebra", {{"N", o.N}, {"trials", o.trials}}, &cat, sink);
}

int run_derivation(Options& o) {
  IrrepCategory cat = make_category(o);
  cat.require_envelope_for(o.n_max);
  ReportSink sink(o.cfg.report_path);
  auto rep = derivation_suite(cat, o.n_max, o.cfg, &sink);
  return finish(rep, o, "onplus derivation", {{"N", o.N}, {"n_max", o.n_max}}, &cat, sink);
}

int run_witness(Options& o) {
  ReportSink sink(o.cfg.report_path);
  auto pair = o.pair == "range" ? WitnessPair::Range : WitnessPair::Stated;
  auto rep = witness_suite(o.N, o.trials, pair, o.cfg, &sink);
  return finish(rep, o, "onplus witness", {{"N", o.N}, {"trials", o.trials}}, nullptr, sink);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cqglab: numerical checks for finite quantum groups and O_N+"};
  app.require_subcommand(1);
  Options o;
  o.cfg.jobs = int(std::max(1u, std::thread::hardware_concurrency()));

  double tol = 0;
  auto* tol_opt = app.add_option("--tol", tol, "replace every default tolerance");
  app.add_option("--seed", o.cfg.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--cache-dir", o.cache_dir, "on-disk cache (CQGLAB_CACHE takes precedence)");
  app.add_option("--report", o.report, "write the JSON report here");
  app.add_option("--envelope", o.cfg.envelope, "largest tensor dimension N^n")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--jobs", o.cfg.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* fqg = app.add_subcommand("fqg", "verify a finite quantum group given by structure constants");
  fqg->fallthrough();
  fqg->add_option("file", o.fqg_file, "structure-constant JSON")->required();
  fqg->add_flag("--full", o.full, "also run the conditional-expectation checks");

  auto* onplus = app.add_subcommand("onplus", "O_N+ representation category and derivation");
  onplus->fallthrough();
  onplus->require_subcommand(1);
  auto add_N = [&](CLI::App* c) { c->add_option("--N", o.N, "N ≥ 2")->required()->check(CLI::Range(2, 64)); };

  auto* dims = onplus->add_subcommand("dims", "d_0 .. d_max");
  add_N(dims);
  dims->add_option("--max", o.max_label, "largest label")->capture_default_str();
  auto* jw = onplus->add_subcommand("jw", "Jones-Wenzl projector summary");
  add_N(jw);
  jw->add_option("--n", o.n, "label")->required()->check(CLI::NonNegativeNumber);
  auto* norms = onplus->add_subcommand("norms", "norm of a block element file");
  norms->add_option("--in", o.in_file, "block element JSON")->required();
  norms->add_option("--which", o.which, "fourier | adelta | adelta-dual")
      ->check(CLI::IsMember({"fourier", "adelta", "adelta-dual"}))
      ->capture_default_str();
  auto* fusion = onplus->add_subcommand("fusion", "dimensions, projectors, fusion unitaries, U");
  add_N(fusion);
  fusion->add_option("--nmax", o.fusion_nmax, "largest projector label");
  fusion->add_option("--window", o.window, "fusion unitaries for beta+gamma <= window");
  auto* algebra = onplus->add_subcommand("algebra", "coproduct norm identity and A_Delta product");
  add_N(algebra);
  algebra->add_option("--trials", o.trials)->capture_default_str()->check(CLI::PositiveNumber);
  auto* derivation = onplus->add_subcommand("derivation", "symbol, derivation identity, cb bound");
  add_N(derivation);
  derivation->add_option("--nmax", o.n_max, "largest label of the symbol")->capture_default_str()->check(CLI::NonNegativeNumber);
  auto* witness = onplus->add_subcommand("witness", "non-innerness witness");
  add_N(witness);
  witness->add_option("--trials", o.trials)->capture_default_str()->check(CLI::PositiveNumber);
  witness->add_option("--pair", o.pair, "stated | range")->check(CLI::IsMember({"stated", "range"}))->capture_default_str();
  for (auto* c : {dims, jw, norms, fusion, algebra, derivation, witness}) c->fallthrough();

  auto* coverage = app.add_subcommand("coverage", "print which suite covers each invariant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (*tol_opt) o.cfg.tol = tol;
  o.cfg.report_path = o.report;
  o.cfg.cache_dir = o.cache_dir;

  try {
    if (*coverage) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& e : coverage_manifest())
        j.push_back({{"invariant", e.invariant}, {"suite", e.suite}, {"checks", e.check_prefix + "*"}});
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*fqg) {
      o.cfg.suites = {"fqg"};
      if (o.full) o.cfg.suites.push_back("fqg-extended");
      return run_fqg(o);
    }
    if (*dims) return run_dims(o);
    if (*jw) return run_jw(o);
    if (*norms) return run_norms(o);
    if (*fusion) return (o.cfg.suites = {"fusion"}, run_fusion(o));
    if (*algebra) return (o.cfg.suites = {"algebra"}, run_algebra(o));
    if (*derivation) return (o.cfg.suites = {"derivation"}, run_derivation(o));
    if (*witness) return (o.cfg.suites = {"witness"}, run_witness(o));
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "resource limit: %s\n", e.what());
    return 3;
  } catch (const StructureError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const ArrayFormatError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const ConfigurationError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

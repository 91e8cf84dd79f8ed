#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqglab/derivation_lab.hpp"
#include "cqglab/hopf_core.hpp"
#include "cqglab/report.hpp"
#include "cqglab/tl_rep.hpp"

namespace cqg {

inline constexpr const char* kToolVersion = "0.3.0";

struct RunConfig {
  std::optional<double> tol; // replaces every default tolerance when set
  std::uint64_t seed = 42;
  std::filesystem::path cache_dir;
  std::int64_t envelope = kDefaultEnvelope;
  std::filesystem::path report_path;
  int jobs = 1;
  std::vector<std::string> suites;

  double tol_or(double fallback) const { return tol.value_or(fallback); }
  nlohmann::json to_json() const; // everything except jobs and paths
};

// Streams finished checks to <report>.partial.jsonl while a run is in progress,
// then writes the single report document and drops the partial file.
// An empty path makes every call a no-op.
class ReportSink {
public:
  explicit ReportSink(std::filesystem::path report_path = {});
  void record(const Check& c);
  void finalize(const VerificationReport& report);
  std::filesystem::path partial_path() const;

private:
  std::filesystem::path path_;
  std::ofstream partial_;
  std::mutex mu_;
};

// Runs the tasks on `jobs` threads. Results come back in task order no matter
// which worker finished first. The first exception thrown by a task is rethrown.
std::vector<Check> run_pool(const std::vector<std::function<Check()>>& tasks, int jobs,
                            ReportSink* sink = nullptr);

// Report with the runtime section and the runtime_ms fields removed.
nlohmann::json deterministic_view(const nlohmann::json& report);

// hopf (8), haar (2), φ_D (2), range equality, γ: 14 checks. An exception in a
// stage becomes a failed check of that stage.
VerificationReport fqg_suite(const FiniteQuantumGroup& g, const RunConfig& cfg, ReportSink* sink = nullptr);
// Conditional-expectation, Δ̃ and traciality checks (`fqg --full`).
VerificationReport fqg_extended_suite(const FiniteQuantumGroup& g, const RunConfig& cfg,
                                      ReportSink* sink = nullptr);

struct FusionWindow {
  int n_max;  // Jones–Wenzl projectors up to this label
  int window; // V(β,γ) for β+γ ≤ window
  static FusionWindow defaults(int N);
};
// dimensions, Jones–Wenzl projectors, fusion dimension sums, V unitarity, U and the decomposition comparison
VerificationReport fusion_suite(const IrrepCategory& cat, FusionWindow w, const RunConfig& cfg,
                                ReportSink* sink = nullptr);

// Coproduct Hilbert–Schmidt identity, submultiplicativity and associativity of the A_Δ product.
VerificationReport algebra_suite(const IrrepCategory& cat, int trials, const RunConfig& cfg,
                                 ReportSink* sink = nullptr);

// Symbol, derivation identity, norm growth, cb bound, group-likes, Leibniz and bimodule residuals.
// Throws ResourceError up front when N^n_max exceeds the envelope.
VerificationReport derivation_suite(const IrrepCategory& cat, int n_max, const RunConfig& cfg,
                                    ReportSink* sink = nullptr);

enum class WitnessPair { Stated, Range };
// Four-case formula vs U-conjugation, |lhs| ≥ 1, max |rhs| over `trials` seeded Y.
VerificationReport witness_suite(int N, int trials, WitnessPair pair, const RunConfig& cfg,
                                 ReportSink* sink = nullptr);

struct CoverageEntry {
  std::string invariant;
  std::string suite;
  std::string check_prefix;
};
// Which suite exercises each module invariant, and the check names it produces.
const std::vector<CoverageEntry>& coverage_manifest();

} // namespace cqg

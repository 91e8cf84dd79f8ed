#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cqg {

struct Check {
  std::string name;
  std::string ref = "plumbing"; // the identity being checked, serialized as "paper_ref"
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
  std::string note;

  // pass iff residual < tol (NaN fails)
  static Check below(std::string name, std::string ref, double residual, double tol);
  // pass iff value > threshold; used for quantities that must stay away from zero
  static Check above(std::string name, std::string ref, double value, double threshold);
  static Check flag(std::string name, std::string ref, bool pass, std::string note = {});
};

class VerificationReport {
public:
  nlohmann::json metadata = nlohmann::json::object();

  void add(Check c) { checks_.push_back(std::move(c)); }
  void append(const VerificationReport& other, const std::string& prefix = {});

  const std::vector<Check>& checks() const { return checks_; }
  bool passed() const;
  bool empty() const { return checks_.empty(); }
  // throws std::out_of_range when no check has this name
  const Check& at(const std::string& name) const;
  bool has(const std::string& name) const;

  nlohmann::json to_json(bool with_timing = true) const;

private:
  std::vector<Check> checks_;
};

nlohmann::json check_to_json(const Check& c, bool with_timing = true);

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

// Runs f (returning a Check) and stamps its wall time.
template <typename F>
Check timed(F&& f) {
  Stopwatch sw;
  Check c = f();
  c.runtime_ms = sw.elapsed_ms();
  return c;
}

} // namespace cqg

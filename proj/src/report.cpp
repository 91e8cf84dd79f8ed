#include "cqglab/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqg {

Check Check::below(std::string name, std::string ref, double residual, double tol) {
  Check c;
  c.name = std::move(name);
  c.ref = std::move(ref);
  c.residual = residual;
  c.tol = tol;
  c.pass = std::isfinite(residual) && residual < tol;
  return c;
}

Check Check::above(std::string name, std::string ref, double value, double threshold) {
  Check c;
  c.name = std::move(name);
  c.ref = std::move(ref);
  c.residual = value;
  c.tol = threshold;
  c.pass = std::isfinite(value) && value > threshold;
  c.note = "value must exceed tol";
  return c;
}

Check Check::flag(std::string name, std::string ref, bool pass, std::string note) {
  Check c;
  c.name = std::move(name);
  c.ref = std::move(ref);
  c.residual = pass ? 0.0 : 1.0;
  c.tol = 0.5;
  c.pass = pass;
  c.note = std::move(note);
  return c;
}

void VerificationReport::append(const VerificationReport& other, const std::string& prefix) {
  for (Check c : other.checks_) {
    if (!prefix.empty()) c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
}

bool VerificationReport::passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

const Check& VerificationReport::at(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return c;
  throw std::out_of_range("no check named " + name);
}

bool VerificationReport::has(const std::string& name) const {
  return std::any_of(checks_.begin(), checks_.end(),
                     [&](const Check& c) { return c.name == name; });
}

nlohmann::json check_to_json(const Check& c, bool with_timing) {
  nlohmann::json j;
  j["name"] = c.name;
  j["residual"] = c.residual;
  j["tol"] = c.tol;
  j["pass"] = c.pass;
  j["paper_ref"] = c.ref;
  if (!c.note.empty()) j["note"] = c.note;
  if (with_timing) j["runtime_ms"] = c.runtime_ms;
  return j;
}

nlohmann::json VerificationReport::to_json(bool with_timing) const {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks_) j["checks"].push_back(check_to_json(c, with_timing));
  j["pass"] = passed();
  return j;
}

} // namespace cqg

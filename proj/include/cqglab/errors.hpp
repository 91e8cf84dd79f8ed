#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cqg {

// Malformed structure constants or inconsistent tensor shapes.
class StructureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Unreadable or syntactically invalid input file; the message carries the location.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Haar system without a (unique) solution.
class NotCqgError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class KacRequiredError : public std::runtime_error {
public:
  KacRequiredError() : std::runtime_error("Kac type required") {}
};

// Argument outside the mathematical domain of an operation (e.g. α ∉ β⊗γ).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Size envelope exceeded; carries the size that was requested.
class ResourceError : public std::runtime_error {
public:
  ResourceError(const std::string& what, std::int64_t requested, std::int64_t limit)
      : std::runtime_error(what + " (requested " + std::to_string(requested) + ", limit " +
                           std::to_string(limit) + ")"),
        requested_(requested), limit_(limit) {}

  std::int64_t requested() const { return requested_; }
  std::int64_t limit() const { return limit_; }

private:
  std::int64_t requested_;
  std::int64_t limit_;
};

// An identity that holds by construction failed numerically: the inputs or a
// cache are broken.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class ConfigurationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A block product would need a label beyond the configured truncation.
class TruncationError : public std::runtime_error {
public:
  TruncationError(int label, int bound)
      : std::runtime_error("product needs label " + std::to_string(label) +
                           " beyond truncation bound " + std::to_string(bound)),
        label_(label) {}
  int label() const { return label_; }

private:
  int label_;
};

} // namespace cqg

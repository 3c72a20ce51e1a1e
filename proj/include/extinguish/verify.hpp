#pragma once

// Seeded property suites over the cone algebra, the resolvent solver, the
// time steppers and the diagnostics. Failures are reported, never thrown.

#include <cstdint>
#include <string>
#include <vector>

namespace extinguish {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = true;
  /// Worst observed value of the property's test statistic.
  double worst = 0.0;
  /// What `worst` measures and the limit it is held to.
  std::string detail;
  /// Inputs of the worst sample when the property fails.
  std::string counterexample;
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  long long trials = 0;
  std::vector<PropertyResult> properties;

  bool passed() const;
  std::string to_json() const;
};

/// name: cone, resolvent, evolve, diagnostics or all. Throws DomainError for an
/// unknown name or trials < 1.
VerifyReport verify_suite(const std::string& name, std::uint64_t seed, long long trials);

}  // namespace extinguish

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bell/tensor.hpp"

namespace bell {

struct ZeroSettingWeight : std::runtime_error {
  explicit ZeroSettingWeight(const std::string& what) : std::runtime_error(what) {}
};

struct ShapeMismatch : std::runtime_error {
  explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidLaw : std::runtime_error {
  explicit InvalidLaw(const std::string& what) : std::runtime_error(what) {}
};

// Caps keeping the q^p setting-pattern and r^(pq) vertex index spaces enumerable.
namespace caps {
inline constexpr int max_parties = 4;
inline constexpr int max_settings = 8;
inline constexpr int max_outcomes = 128;
inline constexpr long long max_vertices = 1ll << 24;
}  // namespace caps

// A balanced p-party Bell experiment: every party chooses among q settings,
// every measurement has r outcomes.
struct Scenario {
  int parties = 2;
  int settings = 2;
  int outcomes = 2;

  Scenario() = default;
  Scenario(int p, int q, int r);

  long long setting_patterns() const;  // q^p
  long long outcome_patterns() const;  // r^p
  long long entry_count() const { return setting_patterns() * outcome_patterns(); }

  // Mixed-radix packing with party 0 as the most significant digit.
  long long pack_settings(const std::vector<int>& s) const;
  std::vector<int> unpack_settings(long long idx) const;
  long long pack_outcomes(const std::vector<int>& o) const;
  std::vector<int> unpack_outcomes(long long idx) const;

  bool operator==(const Scenario&) const = default;
};

// Joint distribution over setting patterns (Lucifer's randomization).
struct SettingDistribution {
  Scenario scenario;
  std::vector<double> weights;  // indexed by packed setting pattern

  static SettingDistribution uniform(const Scenario& s);
  void validate() const;
};

// Joint law p(a,b,...;x,y,...) = pi(a,b,...) p(x,y,...|a,b,...), stored flat:
// entries[pattern * r^p + outcome_pattern]. Patterns with pi = 0 must carry
// zero mass.
struct ProbabilityLaw {
  Scenario scenario;
  SettingDistribution pi;
  std::vector<double> entries;

  double& at(long long pattern, long long outcome) {
    return entries[pattern * scenario.outcome_patterns() + outcome];
  }
  double at(long long pattern, long long outcome) const {
    return entries[pattern * scenario.outcome_patterns() + outcome];
  }

  void validate() const;
};

// p(x,y,...|a,b,...) for one setting pattern; throws ZeroSettingWeight when
// the pattern has no mass.
std::vector<double> conditional(const ProbabilityLaw& law, long long pattern);

struct NoSignallingReport {
  double max_violation = 0.0;
  std::string offending_marginal;  // human-readable locator of the worst pair
  bool ok(double tol) const { return max_violation <= tol; }
};

// For every party, the distribution of the remaining parties' outcomes must
// not depend on that party's setting. Compares conditional marginals across
// the dropped party's settings for every context with positive pi.
NoSignallingReport check_no_signalling(const ProbabilityLaw& law,
                                       double tol = tolerance::no_signalling);

ProbabilityLaw mix(const std::vector<ProbabilityLaw>& laws, const std::vector<double>& weights);

// (1-w) law + w (uniform outcomes with the same pi).
ProbabilityLaw add_noise(const ProbabilityLaw& law, double noise_weight);

}  // namespace bell

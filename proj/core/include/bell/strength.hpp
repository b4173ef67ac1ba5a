#pragma once

#include <cstdint>
#include <map>

#include "bell/classical.hpp"
#include "bell/quantum.hpp"
#include "bell/scenario.hpp"

namespace bell {

struct NotConverged : std::runtime_error {
  explicit NotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroDivergence : std::runtime_error {
  explicit ZeroDivergence(const std::string& what) : std::runtime_error(what) {}
};

struct SolverOptions {
  double epsilon = 1e-9;           // target KKT slack
  long long max_iterations = 100000;
  int scan_period = 5;             // full vertex scan / conditional-gradient step cadence
  double prune_threshold = 1e-14;  // mixture weights below this are dropped
};

// Outcome of the inner minimization inf_p D(q : p) over the classical
// polytope. The mixture is the NPMLE over vertex laws; closest_law is the
// induced p-hat. kkt_slack is max over vertices of (sum of q * vertex / p-hat)
// minus 1: at most epsilon when converged, which certifies the divergence is
// within log2(1 + epsilon) of the true infimum.
struct StrengthResult {
  double divergence = 0.0;  // bits
  ProbabilityLaw closest_law;
  std::map<long long, double> mixture_weights;  // vertex index -> weight
  double kkt_slack = 0.0;
  long long iterations = 0;
  bool converged = false;  // false means the iteration cap was hit
};

StrengthResult inf_divergence(const ProbabilityLaw& q, const SolverOptions& options);
StrengthResult inf_divergence(const ProbabilityLaw& q, double epsilon = 1e-9);

// Supporting hyperplane of the classical polytope at the information
// projection of q: coefficients are the ratios q / p-hat (zero off the
// support of q), rewritten in canonical coordinates. Every vertex in the
// mixture support attains the classical bound; q itself exceeds it whenever
// the divergence is positive.
struct FaceCertificate {
  BellInequality inequality;      // canonical form
  std::vector<double> log_ratio;  // log2(q / p-hat) per law entry, 0 off support
  double quantum_value = 0.0;
  double classical_bound = 0.0;
};

FaceCertificate extract_face(const ProbabilityLaw& q, const StrengthResult& res);

struct SchmidtOptimum {
  SchmidtState state;
  StrengthResult result;
  bool converged = false;
};

// Local maximum of the divergence of the d-outcome two-setting experiment
// over the Schmidt coefficients, from 5 starts (maximally entangled + 4
// random). Alternates inner solves with a largest-eigenvector update of the
// state against the current log-ratio Bell operator, then polishes by
// coordinate search. seed drives the random starts only.
SchmidtOptimum optimize_schmidt(int d, double epsilon = 1e-9, std::uint64_t seed = 1);

// Maximally entangled qubit-pair model on settings 0..rungs for both
// parties, with per-setting angles optimized by multi-start coordinate
// search against the surviving-pairs setting distribution of
// ladder_inequality(rungs).
QuantumModel ladder_model(int rungs, double epsilon = 1e-9, std::uint64_t seed = 1);

enum class SettingPolicy { surviving, all };

struct LadderRow {
  int rungs;
  SettingPolicy policy;
  double divergence;  // bits
};

// For each K = 1..max_rungs: the divergence of the optimized ladder model
// under the surviving-pairs distribution and, for the same model, under the
// uniform distribution over all (K+1)^2 setting pairs.
std::vector<LadderRow> ladder_sweep(int max_rungs, double epsilon = 1e-9, std::uint64_t seed = 1);

// Smallest detection efficiency at which the degraded law still leaves the
// classical polytope (divergence > 1e-7), located by bisection to absolute
// tolerance tol.
double detection_threshold(const QuantumModel& m, double tol);

// Divergence per resource unit: divergence * setting_acceptance / pairs_per_trial.
double discounted_strength(double divergence, int pairs_per_trial, double setting_acceptance);

}  // namespace bell

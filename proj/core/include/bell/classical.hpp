#pragma once

#include <functional>

#include "bell/scenario.hpp"

namespace bell {

struct TooManyVertices : std::runtime_error {
  explicit TooManyVertices(const std::string& what) : std::runtime_error(what) {}
};

struct ValidityCheckFailed : std::runtime_error {
  explicit ValidityCheckFailed(const std::string& what) : std::runtime_error(what) {}
};

// One deterministic assignment of an outcome to every (party, setting): a
// vertex of the classical polytope.
struct DeterministicVertex {
  Scenario scenario;
  std::vector<int> assignment;  // [party * settings + setting] -> outcome

  int outcome(int party, int setting) const {
    return assignment[party * scenario.settings + setting];
  }
};

// r^(pq); throws TooManyVertices beyond the enumeration cap.
long long vertex_count(const Scenario& s);

// Vertices are ordered lexicographically by their assignment vector; index i
// is the i-th vertex in that order.
DeterministicVertex vertex_at(const Scenario& s, long long index);
long long vertex_index(const DeterministicVertex& v);

void for_each_vertex(const Scenario& s, const std::function<void(const DeterministicVertex&)>& fn);

ProbabilityLaw vertex_law(const DeterministicVertex& v, const SettingDistribution& pi);

enum class InequalityForm { raw, canonical };

// Affine functional over joint laws. Coefficients use the law entry layout,
// so evaluate is a plain dot product. Classical laws satisfy
// evaluate <= bound; a quantum law "violates" the inequality when it exceeds
// the bound. The setting distribution the coefficients were built against
// rides along because the no-signalling identities used by canonicalize are
// relative to it.
struct BellInequality {
  Scenario scenario;
  SettingDistribution pi;
  std::vector<double> coefficients;
  double bound = 0.0;
  InequalityForm form = InequalityForm::raw;
};

double evaluate(const BellInequality& ineq, const ProbabilityLaw& law);

struct ClassicalMaxResult {
  double value;
  DeterministicVertex argmax;  // lexicographically first achiever
};

ClassicalMaxResult classical_max(const BellInequality& ineq, const SettingDistribution& pi);

// The 2x2xd inequality
//   Pr(X1 >= Y1) <= Pr(X1 > Y2) + Pr(Y2 > X2) + Pr(X2 >= Y1)
// in violation form (left minus right, bound 0), with uniform settings.
// X1, X2 are Alice's settings 0, 1 and Y1, Y2 Bob's; ties are resolved so
// that the chain "not(X1 > Y2), not(Y2 > X2), not(X2 >= Y1)" forces
// "not(X1 >= Y1)", which makes the inequality hold on every vertex.
BellInequality cglmp_inequality(int d);

// K chained two-outcome inequalities over settings 0..K on both sides.
// Adjacent links are oriented so their shared "horizontal" terms are
// complementary and collapse into constants; the constants are folded into
// the bound (K-1). The construction is certified at build time by brute
// force over all 2^(2(K+1)) vertices and by counting active setting pairs
// (exactly 2K+2); a failed check throws ValidityCheckFailed.
BellInequality ladder_inequality(int rungs);

// Rewrites the inequality over the Collins-Gisin coordinates of the
// no-signalling subspace: joint terms keep only outcome patterns with every
// involved outcome >= 1, plus marginal terms with outcomes >= 1. The value
// at the all-zeros vertex is subtracted (canonical tensors vanish there), so
// the bound becomes bound - c0: zero exactly when the all-zeros vertex
// saturates the original inequality. Idempotent; exact on every law sharing
// the inequality's setting distribution.
BellInequality canonicalize(const BellInequality& ineq);

// Divergence from the law to the classical polytope (inner solver); 0 within
// solver tolerance iff the law is classical. Defined in the strength module.
double membership_gap(const ProbabilityLaw& law);

}  // namespace bell

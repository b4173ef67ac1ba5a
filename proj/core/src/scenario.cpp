#include "bell/scenario.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace bell {

namespace {

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

Scenario::Scenario(int p, int q, int r) : parties(p), settings(q), outcomes(r) {
  if (p < 2 || q < 2 || r < 2) throw std::invalid_argument("scenario: counts must be at least 2");
  if (p > caps::max_parties || q > caps::max_settings || r > caps::max_outcomes)
    throw std::invalid_argument("scenario: counts exceed configured caps");
}

long long Scenario::setting_patterns() const { return ipow(settings, parties); }
long long Scenario::outcome_patterns() const { return ipow(outcomes, parties); }

long long Scenario::pack_settings(const std::vector<int>& s) const {
  long long idx = 0;
  for (int i = 0; i < parties; ++i) idx = idx * settings + s[i];
  return idx;
}

std::vector<int> Scenario::unpack_settings(long long idx) const {
  std::vector<int> s(parties);
  for (int i = parties - 1; i >= 0; --i) {
    s[i] = static_cast<int>(idx % settings);
    idx /= settings;
  }
  return s;
}

long long Scenario::pack_outcomes(const std::vector<int>& o) const {
  long long idx = 0;
  for (int i = 0; i < parties; ++i) idx = idx * outcomes + o[i];
  return idx;
}

std::vector<int> Scenario::unpack_outcomes(long long idx) const {
  std::vector<int> o(parties);
  for (int i = parties - 1; i >= 0; --i) {
    o[i] = static_cast<int>(idx % outcomes);
    idx /= outcomes;
  }
  return o;
}

SettingDistribution SettingDistribution::uniform(const Scenario& s) {
  SettingDistribution d;
  d.scenario = s;
  d.weights.assign(s.setting_patterns(), 1.0 / static_cast<double>(s.setting_patterns()));
  return d;
}

void SettingDistribution::validate() const {
  if (static_cast<long long>(weights.size()) != scenario.setting_patterns())
    throw InvalidLaw("setting distribution: weight count does not match q^p");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidLaw("setting distribution: negative or NaN weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tolerance::pi_normalization)
    throw InvalidLaw("setting distribution: weights do not sum to 1");
}

void ProbabilityLaw::validate() const {
  pi.validate();
  if (pi.scenario != scenario) throw InvalidLaw("law: pi scenario mismatch");
  if (static_cast<long long>(entries.size()) != scenario.entry_count())
    throw InvalidLaw("law: entry count does not match q^p * r^p");
  for (double e : entries)
    if (!(e >= 0.0)) throw InvalidLaw("law: negative or NaN entry");
  const long long op = scenario.outcome_patterns();
  for (long long s = 0; s < scenario.setting_patterns(); ++s) {
    double sum = 0.0;
    for (long long o = 0; o < op; ++o) sum += at(s, o);
    if (std::abs(sum - pi.weights[s]) > tolerance::law_normalization)
      throw InvalidLaw("law: outcome mass of pattern " + std::to_string(s) +
                       " does not equal pi of the pattern");
  }
}

std::vector<double> conditional(const ProbabilityLaw& law, long long pattern) {
  const double p = law.pi.weights[pattern];
  if (p <= 0.0) throw ZeroSettingWeight("conditional: setting pattern has zero weight");
  const long long op = law.scenario.outcome_patterns();
  std::vector<double> out(op);
  for (long long o = 0; o < op; ++o) out[o] = law.at(pattern, o) / p;
  return out;
}

NoSignallingReport check_no_signalling(const ProbabilityLaw& law, double /*tol*/) {
  const Scenario& sc = law.scenario;
  const long long op = sc.outcome_patterns();
  NoSignallingReport rep;

  // Precompute conditionals for positive-mass patterns.
  std::vector<std::vector<double>> cond(sc.setting_patterns());
  for (long long s = 0; s < sc.setting_patterns(); ++s)
    if (law.pi.weights[s] > 0.0) cond[s] = conditional(law, s);

  for (int drop = 0; drop < sc.parties; ++drop) {
    // Iterate over the other parties' settings and outcomes; the marginal of
    // the kept parties' outcomes must agree across the dropped party's setting.
    std::vector<int> s(sc.parties, 0), o(sc.parties, 0);
    long long rest_settings = 1, rest_outcomes = 1;
    for (int i = 0; i < sc.parties - 1; ++i) {
      rest_settings *= sc.settings;
      rest_outcomes *= sc.outcomes;
    }
    for (long long rs = 0; rs < rest_settings; ++rs) {
      // decode rs into settings of all parties except drop
      long long t = rs;
      for (int i = sc.parties - 1; i >= 0; --i) {
        if (i == drop) continue;
        s[i] = static_cast<int>(t % sc.settings);
        t /= sc.settings;
      }
      for (long long ro = 0; ro < rest_outcomes; ++ro) {
        long long u = ro;
        for (int i = sc.parties - 1; i >= 0; --i) {
          if (i == drop) continue;
          o[i] = static_cast<int>(u % sc.outcomes);
          u /= sc.outcomes;
        }
        double lo = 0.0, hi = 0.0;
        int lo_s = -1, hi_s = -1;
        for (int ds = 0; ds < sc.settings; ++ds) {
          s[drop] = ds;
          long long sp = sc.pack_settings(s);
          if (law.pi.weights[sp] <= 0.0) continue;
          double m = 0.0;
          for (int dx = 0; dx < sc.outcomes; ++dx) {
            o[drop] = dx;
            m += cond[sp][sc.pack_outcomes(o)];
          }
          if (lo_s < 0 || m < lo) { lo = m; lo_s = ds; }
          if (hi_s < 0 || m > hi) { hi = m; hi_s = ds; }
        }
        if (hi_s >= 0 && hi - lo > rep.max_violation) {
          rep.max_violation = hi - lo;
          std::ostringstream os;
          os << "party " << drop << " settings " << lo_s << " vs " << hi_s
             << " at rest-context (settings " << rs << ", outcomes " << ro << ")";
          rep.offending_marginal = os.str();
        }
      }
    }
  }
  return rep;
}

ProbabilityLaw mix(const std::vector<ProbabilityLaw>& laws, const std::vector<double>& weights) {
  if (laws.empty() || laws.size() != weights.size())
    throw ShapeMismatch("mix: need matching, nonempty law and weight lists");
  const ProbabilityLaw& first = laws.front();
  ProbabilityLaw out = first;
  for (auto& e : out.entries) e = 0.0;
  double wsum = 0.0;
  for (std::size_t k = 0; k < laws.size(); ++k) {
    if (laws[k].scenario != first.scenario)
      throw ShapeMismatch("mix: scenario mismatch between laws");
    for (long long s = 0; s < first.scenario.setting_patterns(); ++s)
      if (std::abs(laws[k].pi.weights[s] - first.pi.weights[s]) > 1e-12)
        throw ShapeMismatch("mix: setting distribution mismatch between laws");
    if (weights[k] < 0.0) throw ShapeMismatch("mix: negative weight");
    wsum += weights[k];
    for (std::size_t i = 0; i < out.entries.size(); ++i)
      out.entries[i] += weights[k] * laws[k].entries[i];
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw ShapeMismatch("mix: weights do not sum to 1");
  return out;
}

ProbabilityLaw add_noise(const ProbabilityLaw& law, double noise_weight) {
  if (noise_weight < 0.0 || noise_weight > 1.0)
    throw std::invalid_argument("add_noise: weight outside [0,1]");
  ProbabilityLaw out = law;
  const long long op = law.scenario.outcome_patterns();
  for (long long s = 0; s < law.scenario.setting_patterns(); ++s) {
    const double uniform = law.pi.weights[s] / static_cast<double>(op);
    for (long long o = 0; o < op; ++o)
      out.at(s, o) = (1.0 - noise_weight) * law.at(s, o) + noise_weight * uniform;
  }
  return out;
}

}  // namespace bell

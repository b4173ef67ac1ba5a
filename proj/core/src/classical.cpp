#include "bell/classical.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "scan.hpp"

namespace bell {

namespace {

// Advances digits within [lo, hi], rightmost fastest; false when exhausted.
bool advance(std::vector<int>& digits, int lo, int hi) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] <= hi) return true;
    digits[i] = lo;
  }
  return false;
}

enum class Rel { geq_xy, gt_xy, gt_yx, geq_yx };

double rel_indicator(Rel rel, int x, int y) {
  switch (rel) {
    case Rel::geq_xy: return x >= y ? 1.0 : 0.0;
    case Rel::gt_xy: return x > y ? 1.0 : 0.0;
    case Rel::gt_yx: return y > x ? 1.0 : 0.0;
    case Rel::geq_yx: return y >= x ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace

long long vertex_count(const Scenario& s) {
  long long count = 1;
  for (int i = 0; i < s.parties * s.settings; ++i) {
    count *= s.outcomes;
    if (count > caps::max_vertices)
      throw TooManyVertices("vertex enumeration needs " + std::to_string(s.outcomes) + "^" +
                            std::to_string(s.parties * s.settings) + " vertices, over the cap " +
                            std::to_string(caps::max_vertices));
  }
  return count;
}

DeterministicVertex vertex_at(const Scenario& s, long long index) {
  long long count = vertex_count(s);
  if (index < 0 || index >= count)
    throw std::out_of_range("vertex index " + std::to_string(index) + " out of [0, " +
                            std::to_string(count) + ")");
  DeterministicVertex v{s, std::vector<int>(s.parties * s.settings, 0)};
  for (std::size_t i = v.assignment.size(); i-- > 0;) {
    v.assignment[i] = static_cast<int>(index % s.outcomes);
    index /= s.outcomes;
  }
  return v;
}

long long vertex_index(const DeterministicVertex& v) {
  long long index = 0;
  for (int o : v.assignment) index = index * v.scenario.outcomes + o;
  return index;
}

void for_each_vertex(const Scenario& s,
                     const std::function<void(const DeterministicVertex&)>& fn) {
  long long count = vertex_count(s);
  DeterministicVertex v{s, std::vector<int>(s.parties * s.settings, 0)};
  for (long long i = 0; i < count; ++i) {
    fn(v);
    advance(v.assignment, 0, s.outcomes - 1);
  }
}

ProbabilityLaw vertex_law(const DeterministicVertex& v, const SettingDistribution& pi) {
  const Scenario& s = v.scenario;
  if (!(pi.scenario == s)) throw ShapeMismatch("setting distribution is for a different scenario");
  pi.validate();
  ProbabilityLaw law{s, pi, std::vector<double>(s.entry_count(), 0.0)};
  for (long long sp = 0; sp < s.setting_patterns(); ++sp) {
    if (pi.weights[sp] <= 0.0) continue;
    auto settings = s.unpack_settings(sp);
    long long o = 0;
    for (int party = 0; party < s.parties; ++party)
      o = o * s.outcomes + v.outcome(party, settings[party]);
    law.entries[sp * s.outcome_patterns() + o] = pi.weights[sp];
  }
  return law;
}

double evaluate(const BellInequality& ineq, const ProbabilityLaw& law) {
  if (!(ineq.scenario == law.scenario))
    throw ShapeMismatch("inequality and law live on different scenarios");
  if (ineq.coefficients.size() != law.entries.size())
    throw ShapeMismatch("coefficient count " + std::to_string(ineq.coefficients.size()) +
                        " does not match law entry count " + std::to_string(law.entries.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < law.entries.size(); ++i)
    total += ineq.coefficients[i] * law.entries[i];
  return total;
}

ClassicalMaxResult classical_max(const BellInequality& ineq, const SettingDistribution& pi) {
  if (!(ineq.scenario == pi.scenario))
    throw ShapeMismatch("setting distribution is for a different scenario");
  pi.validate();
  const Scenario& s = ineq.scenario;
  const long long R = s.outcome_patterns();
  if (ineq.coefficients.size() != static_cast<std::size_t>(s.entry_count()))
    throw ShapeMismatch("coefficient count does not match the scenario");

  detail::VertexScan scan(s, pi);
  std::vector<std::vector<double>> scaled;
  scaled.reserve(scan.pattern_ids().size());
  for (long long sp : scan.pattern_ids()) {
    std::vector<double> row(ineq.coefficients.begin() + sp * R,
                            ineq.coefficients.begin() + (sp + 1) * R);
    for (double& c : row) c *= pi.weights[sp];
    scaled.push_back(std::move(row));
  }
  std::vector<const double*> rows;
  rows.reserve(scaled.size());
  for (const auto& row : scaled) rows.push_back(row.data());

  auto [value, index] = scan.max_scan(rows);
  return {value, vertex_at(s, index)};
}

BellInequality cglmp_inequality(int d) {
  if (d < 2 || d > caps::max_outcomes)
    throw std::invalid_argument("outcome count " + std::to_string(d) + " out of range");
  Scenario s(2, 2, d);
  SettingDistribution pi = SettingDistribution::uniform(s);

  struct Term {
    int a, b;
    Rel rel;
    double sign;
  };
  const Term terms[] = {
      {0, 0, Rel::geq_xy, +1.0},
      {0, 1, Rel::gt_xy, -1.0},
      {1, 1, Rel::gt_yx, -1.0},
      {1, 0, Rel::geq_xy, -1.0},
  };

  BellInequality ineq{s, pi, std::vector<double>(s.entry_count(), 0.0), 0.0,
                      InequalityForm::raw};
  for (const Term& t : terms) {
    long long sp = t.a * s.settings + t.b;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        ineq.coefficients[sp * s.outcome_patterns() + x * d + y] +=
            t.sign * rel_indicator(t.rel, x, y) / pi.weights[sp];
  }
  return ineq;
}

BellInequality ladder_inequality(int rungs) {
  if (rungs < 1 || rungs > caps::max_settings - 1)
    throw std::invalid_argument("rung count " + std::to_string(rungs) + " out of range");
  const int K = rungs;
  Scenario s(2, K + 1, 2);
  const long long S = s.setting_patterns();
  const long long R = s.outcome_patterns();

  // Aggregate coefficient masks per setting pair, then collapse pairs whose
  // mask became constant (complementary links) into the bound.
  std::vector<std::array<double, 4>> mask(S, {0.0, 0.0, 0.0, 0.0});
  auto add = [&](int a, int b, Rel rel, double sign) {
    long long sp = a * s.settings + b;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) mask[sp][x * 2 + y] += sign * rel_indicator(rel, x, y);
  };

  add(0, 0, Rel::geq_xy, +1.0);
  add(0, 1, Rel::gt_xy, -1.0);
  add(1, 1, Rel::gt_yx, -1.0);
  add(1, 0, Rel::geq_xy, -1.0);
  for (int j = 1; j < K; ++j) {
    if (j % 2 == 1) {
      add(j + 1, j, Rel::geq_xy, +1.0);
      add(j + 1, j + 1, Rel::gt_xy, -1.0);
      add(j, j + 1, Rel::gt_yx, -1.0);
      add(j, j, Rel::geq_xy, -1.0);
    } else {
      add(j, j + 1, Rel::geq_yx, +1.0);
      add(j + 1, j + 1, Rel::gt_yx, -1.0);
      add(j + 1, j, Rel::gt_xy, -1.0);
      add(j, j, Rel::geq_yx, -1.0);
    }
  }

  double constant = 0.0;
  int active = 0;
  for (auto& m : mask) {
    bool flat = m[0] == m[1] && m[1] == m[2] && m[2] == m[3];
    if (flat) {
      constant += m[0];
      m = {0.0, 0.0, 0.0, 0.0};
    } else {
      ++active;
    }
  }

  SettingDistribution pi{s, std::vector<double>(S, 0.0)};
  for (long long sp = 0; sp < S; ++sp)
    if (mask[sp] != std::array<double, 4>{0.0, 0.0, 0.0, 0.0}) pi.weights[sp] = 1.0 / active;

  BellInequality ineq{s, pi, std::vector<double>(s.entry_count(), 0.0), -constant,
                      InequalityForm::raw};
  for (long long sp = 0; sp < S; ++sp) {
    if (pi.weights[sp] <= 0.0) continue;
    for (int cell = 0; cell < 4; ++cell)
      ineq.coefficients[sp * R + cell] = mask[sp][cell] / pi.weights[sp];
  }

  const double tol = 1e-12;
  if (active != 2 * K + 2)
    throw ValidityCheckFailed("expected " + std::to_string(2 * K + 2) +
                              " active setting pairs, built " + std::to_string(active));
  ClassicalMaxResult cm = classical_max(ineq, pi);
  if (std::abs(cm.value - ineq.bound) > tol)
    throw ValidityCheckFailed("classical maximum " + std::to_string(cm.value) +
                              " does not sit on the bound " + std::to_string(ineq.bound));
  double at_zero = evaluate(ineq, vertex_law(vertex_at(s, 0), pi));
  if (std::abs(at_zero - ineq.bound) > tol)
    throw ValidityCheckFailed("all-zeros vertex does not saturate the bound");
  return ineq;
}

BellInequality canonicalize(const BellInequality& ineq) {
  const Scenario& s = ineq.scenario;
  const int p = s.parties;
  const int r = s.outcomes;
  const long long S = s.setting_patterns();
  const long long R = s.outcome_patterns();
  if (ineq.coefficients.size() != static_cast<std::size_t>(s.entry_count()))
    throw ShapeMismatch("coefficient count does not match the scenario");
  ineq.pi.validate();
  const auto& pi = ineq.pi.weights;
  auto coeff = [&](long long sp, long long o) -> double { return ineq.coefficients[sp * R + o]; };

  std::vector<double> out(ineq.coefficients.size(), 0.0);

  double c0 = 0.0;
  for (long long sp = 0; sp < S; ++sp)
    if (pi[sp] > 0.0) c0 += pi[sp] * coeff(sp, 0);

  std::vector<std::vector<int>> setting_digits(S);
  for (long long sp = 0; sp < S; ++sp) setting_digits[sp] = s.unpack_settings(sp);

  auto pack_outcomes = [&](const int* digits) {
    long long o = 0;
    for (int i = 0; i < p; ++i) o = o * r + digits[i];
    return o;
  };

  for (int subset = 1; subset < (1 << p); ++subset) {
    std::vector<int> group;
    for (int i = 0; i < p; ++i)
      if (subset & (1 << i)) group.push_back(i);
    const int t = static_cast<int>(group.size());
    std::vector<int> rest;
    for (int i = 0; i < p; ++i)
      if (!(subset & (1 << i))) rest.push_back(i);

    std::vector<int> group_settings(t, 0);
    do {
      std::vector<long long> members;
      double group_weight = 0.0;
      for (long long sp = 0; sp < S; ++sp) {
        if (pi[sp] <= 0.0) continue;
        bool match = true;
        for (int j = 0; j < t; ++j)
          if (setting_digits[sp][group[j]] != group_settings[j]) {
            match = false;
            break;
          }
        if (match) {
          members.push_back(sp);
          group_weight += pi[sp];
        }
      }
      if (members.empty()) continue;

      std::vector<int> group_outcomes(t, 1);
      do {
        // Moebius sum: alternating-sign corner values of the joint cell.
        double mu = 0.0;
        for (long long sp : members) {
          double corner_sum = 0.0;
          for (unsigned sub = 0; sub < (1u << t); ++sub) {
            int digits[caps::max_parties] = {0, 0, 0, 0};
            for (int j = 0; j < t; ++j)
              if (sub & (1u << j)) digits[group[j]] = group_outcomes[j];
            int sign = ((t - std::popcount(sub)) % 2 == 0) ? 1 : -1;
            corner_sum += sign * coeff(sp, pack_outcomes(digits));
          }
          mu += pi[sp] * corner_sum;
        }
        if (mu == 0.0) continue;

        // Spread the joint term uniformly over every setting pattern that
        // extends the group's settings and every outcome completion.
        double w = mu / group_weight;
        std::vector<int> rest_outcomes(rest.size(), 0);
        do {
          int digits[caps::max_parties] = {0, 0, 0, 0};
          for (int j = 0; j < t; ++j) digits[group[j]] = group_outcomes[j];
          for (std::size_t j = 0; j < rest.size(); ++j) digits[rest[j]] = rest_outcomes[j];
          long long o = pack_outcomes(digits);
          for (long long sp : members) out[sp * R + o] += w;
        } while (advance(rest_outcomes, 0, r - 1));
      } while (advance(group_outcomes, 1, r - 1));
    } while (advance(group_settings, 0, s.settings - 1));
  }

  BellInequality canon = ineq;
  canon.coefficients = std::move(out);
  canon.bound = ineq.bound - c0;
  canon.form = InequalityForm::canonical;
  return canon;
}

}  // namespace bell

#include "bell/strength.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "scan.hpp"

namespace bell {

namespace {

// The inner problem restricted to setting patterns with positive weight.
// Tables are laid out [active pattern k][outcome pattern], flat.
struct InnerProblem {
  detail::VertexScan scan;
  long long R;
  std::size_t K;
  std::vector<double> qflat;    // absolute law entries
  std::vector<double> pattern_weight;

  explicit InnerProblem(const ProbabilityLaw& law)
      : scan(law.scenario, law.pi), R(law.scenario.outcome_patterns()) {
    K = scan.pattern_ids().size();
    qflat.resize(K * R);
    pattern_weight.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      long long sp = scan.pattern_ids()[k];
      pattern_weight[k] = law.pi.weights[sp];
      for (long long o = 0; o < R; ++o) qflat[k * R + o] = law.entries[sp * R + o];
    }
  }

  void cells_of(long long v, std::vector<long long>& cells) const {
    int assignment[caps::max_parties * caps::max_settings];
    scan.decode(v, assignment);
    cells.resize(K);
    for (std::size_t k = 0; k < K; ++k)
      cells[k] = static_cast<long long>(k) * R + scan.outcome_pattern_from(assignment, k);
  }
};

double line_search_step(const InnerProblem& prob, const std::vector<double>& phat,
                        const std::vector<long long>& cells, double q_rest) {
  // Maximizes sum q log((1-t) phat + t vertex) by bisection on the derivative
  //   g(t) = sum_k q_cell (pi_k - phat_cell) / ((1-t) phat_cell + t pi_k)
  //          - q_rest / (1-t).
  auto g = [&](double t) {
    double total = 0.0;
    for (std::size_t k = 0; k < prob.K; ++k) {
      double qc = prob.qflat[cells[k]];
      if (qc <= 0.0) continue;
      double pc = phat[cells[k]];
      double w = prob.pattern_weight[k];
      total += qc * (w - pc) / ((1.0 - t) * pc + t * w);
    }
    return total - q_rest / (1.0 - t);
  };
  double lo = 0.0, hi = 1.0 - 1e-12;
  if (g(hi) >= 0.0) return hi;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

double schmidt_norm(std::vector<double>& c) {
  double n2 = 0.0;
  for (double x : c) n2 += x * x;
  double n = std::sqrt(n2);
  if (n > 0.0)
    for (double& x : c) x /= n;
  return n;
}

}  // namespace

StrengthResult inf_divergence(const ProbabilityLaw& q, const SolverOptions& options) {
  if (options.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  q.validate();

  InnerProblem prob(q);
  const std::size_t K = prob.K;
  const long long R = prob.R;
  const long long nverts = prob.scan.size();

  // Barycenter start: positive mass on every vertex keeps p-hat positive on
  // the whole support of q, so no log ever sees zero.
  std::map<long long, double> mix;
  for (long long v = 0; v < nverts; ++v) mix[v] = 1.0 / static_cast<double>(nverts);

  std::vector<double> phat(K * R), ratio(K * R);
  std::vector<long long> cells;
  std::vector<const double*> rows(K);

  auto rebuild = [&]() {
    std::fill(phat.begin(), phat.end(), 0.0);
    for (const auto& [v, w] : mix) {
      prob.cells_of(v, cells);
      for (std::size_t k = 0; k < K; ++k) phat[cells[k]] += w * prob.pattern_weight[k];
    }
    for (std::size_t k = 0; k < K; ++k)
      for (long long o = 0; o < R; ++o) {
        std::size_t i = k * R + o;
        ratio[i] = prob.qflat[i] > 0.0 ? prob.pattern_weight[k] * prob.qflat[i] / phat[i] : 0.0;
      }
    for (std::size_t k = 0; k < K; ++k) rows[k] = ratio.data() + k * R;
  };

  auto normalize_and_prune = [&]() {
    double total = 0.0;
    for (const auto& [v, w] : mix) total += w;
    for (auto it = mix.begin(); it != mix.end();) {
      it->second /= total;
      if (it->second < options.prune_threshold)
        it = mix.erase(it);
      else
        ++it;
    }
  };

  long long iterations = 0;
  bool converged = false;
  double slack = std::numeric_limits<double>::infinity();

  while (iterations < options.max_iterations) {
    rebuild();

    // EM sweep: every atom is reweighted by its likelihood score.
    for (auto& [v, w] : mix) {
      prob.cells_of(v, cells);
      double score = 0.0;
      for (std::size_t k = 0; k < K; ++k) score += ratio[cells[k]];
      w *= score;
    }
    normalize_and_prune();
    ++iterations;

    if (iterations % options.scan_period != 0 && iterations != options.max_iterations) continue;

    rebuild();
    auto [best_score, best_vertex] = prob.scan.max_scan(rows);
    slack = best_score - 1.0;
    if (slack <= options.epsilon) {
      converged = true;
      break;
    }
    if (iterations == options.max_iterations) break;

    // Conditional-gradient step toward the best-scoring vertex.
    prob.cells_of(best_vertex, cells);
    double q_on_vertex = 0.0;
    for (std::size_t k = 0; k < K; ++k) q_on_vertex += prob.qflat[cells[k]];
    double t = line_search_step(prob, phat, cells, 1.0 - q_on_vertex);
    if (t > 0.0) {
      for (auto& [v, w] : mix) w *= 1.0 - t;
      mix[best_vertex] += t;
      normalize_and_prune();
    }
  }

  rebuild();
  double divergence = 0.0;
  for (std::size_t i = 0; i < prob.qflat.size(); ++i) {
    if (prob.qflat[i] <= 0.0) continue;
    if (phat[i] <= 0.0) {
      divergence = std::numeric_limits<double>::infinity();
      break;
    }
    divergence += prob.qflat[i] * std::log2(prob.qflat[i] / phat[i]);
  }
  if (divergence < 0.0) divergence = 0.0;

  StrengthResult result;
  result.divergence = divergence;
  result.closest_law = ProbabilityLaw{q.scenario, q.pi,
                                      std::vector<double>(q.entries.size(), 0.0)};
  for (std::size_t k = 0; k < K; ++k) {
    long long sp = prob.scan.pattern_ids()[k];
    for (long long o = 0; o < R; ++o)
      result.closest_law.entries[sp * R + o] = phat[k * R + o];
  }
  result.mixture_weights.insert(mix.begin(), mix.end());
  result.kkt_slack = slack;
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

StrengthResult inf_divergence(const ProbabilityLaw& q, double epsilon) {
  SolverOptions options;
  options.epsilon = epsilon;
  return inf_divergence(q, options);
}

double membership_gap(const ProbabilityLaw& law) { return inf_divergence(law, 1e-9).divergence; }

FaceCertificate extract_face(const ProbabilityLaw& q, const StrengthResult& res) {
  if (!res.converged) throw NotConverged("face extraction needs a converged inner solve");
  if (!(res.closest_law.scenario == q.scenario) || res.closest_law.entries.size() != q.entries.size())
    throw ShapeMismatch("solver result belongs to a different law");
  if (res.divergence <= 1e-12)
    throw ZeroDivergence("law is classical; it lies on no proper face");

  std::vector<double> coefficients(q.entries.size(), 0.0);
  std::vector<double> log_ratio(q.entries.size(), 0.0);
  for (std::size_t i = 0; i < q.entries.size(); ++i) {
    if (q.entries[i] <= 0.0) continue;
    coefficients[i] = q.entries[i] / res.closest_law.entries[i];
    log_ratio[i] = std::log2(coefficients[i]);
  }

  BellInequality raw{q.scenario, q.pi, std::move(coefficients), 0.0, InequalityForm::raw};
  BellInequality canon = canonicalize(raw);
  ClassicalMaxResult cm = classical_max(canon, q.pi);
  canon.bound = cm.value;

  FaceCertificate cert;
  cert.inequality = std::move(canon);
  cert.log_ratio = std::move(log_ratio);
  cert.classical_bound = cm.value;
  cert.quantum_value = evaluate(cert.inequality, q);
  return cert;
}

SchmidtOptimum optimize_schmidt(int d, double epsilon, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const SettingDistribution pi = SettingDistribution::uniform(Scenario(2, 2, d));

  struct Eval {
    QuantumModel model;
    ProbabilityLaw law;
    StrengthResult res;
  };
  auto evaluate_state = [&](const SchmidtState& st) {
    Eval e;
    e.model = cglmp_model(d, st);
    e.law = born_law(e.model, pi);
    e.res = inf_divergence(e.law, epsilon);
    return e;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<SchmidtState> starts;
  starts.push_back(maximally_entangled(d));
  for (int s = 0; s < 4; ++s) {
    std::vector<double> c(d);
    for (double& x : c) x = unif(rng);
    schmidt_norm(c);
    starts.push_back(SchmidtState{std::move(c)});
  }

  SchmidtOptimum best;
  bool have_best = false;

  for (const SchmidtState& start : starts) {
    SchmidtState state = start;
    Eval cur = evaluate_state(state);
    bool settled = false;

    for (int round = 0; round < 200 && !settled; ++round) {
      // Bell operator of the current face, restricted to Schmidt-diagonal
      // states: entries weight the elementwise product of the two parties'
      // projectors. Its top eigenvector is the next state estimate.
      ComplexMatrix op(d, d);
      const long long R = cur.law.scenario.outcome_patterns();
      for (long long sp = 0; sp < cur.law.scenario.setting_patterns(); ++sp) {
        double pw = pi.weights[sp];
        if (pw <= 0.0) continue;
        auto settings = cur.law.scenario.unpack_settings(sp);
        const auto& fam_a = cur.model.measurements[0][settings[0]].projectors;
        const auto& fam_b = cur.model.measurements[1][settings[1]].projectors;
        for (int x = 0; x < d; ++x)
          for (int y = 0; y < d; ++y) {
            double qv = cur.law.entries[sp * R + x * d + y];
            double pv = cur.res.closest_law.entries[sp * R + x * d + y];
            if (qv <= 0.0 || pv <= 0.0) continue;
            double c = pw * std::log2(qv / pv);
            for (int u = 0; u < d; ++u)
              for (int w = 0; w < d; ++w) op(u, w) += c * fam_a[x](u, w) * fam_b[y](u, w);
          }
      }
      EigDecomposition eig = hermitian_eig(op);
      std::vector<double> c(d);
      for (int u = 0; u < d; ++u) c[u] = std::abs(eig.eigenvectors(u, d - 1));
      if (schmidt_norm(c) <= 0.0) break;

      Eval next = evaluate_state(SchmidtState{c});
      double delta = std::abs(next.res.divergence - cur.res.divergence);
      state = SchmidtState{std::move(c)};
      cur = std::move(next);
      if (delta < epsilon) settled = true;
    }

    double step = 0.1;
    while (step >= 1e-6) {
      bool improved = false;
      for (int i = 0; i < d; ++i)
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> c = state.coefficients;
          c[i] = std::max(0.0, c[i] + sgn * step);
          if (schmidt_norm(c) <= 0.0) continue;
          Eval cand = evaluate_state(SchmidtState{c});
          if (cand.res.divergence > cur.res.divergence) {
            state = SchmidtState{std::move(c)};
            cur = std::move(cand);
            improved = true;
          }
        }
      if (!improved) step *= 0.5;
    }

    if (!have_best || cur.res.divergence > best.result.divergence) {
      best.state = state;
      best.result = std::move(cur.res);
      best.converged = settled && best.result.converged;
      have_best = true;
    }
  }
  return best;
}

QuantumModel ladder_model(int rungs, double epsilon, std::uint64_t seed) {
  BellInequality ladder = ladder_inequality(rungs);
  const SettingDistribution& pi = ladder.pi;
  const int q = rungs + 1;
  const SchmidtState pair = maximally_entangled(2);
  // The coordinate search needs relative comparisons only, so it may run at
  // a relaxed slack target; callers re-solve at full precision.
  const double search_epsilon = std::max(epsilon, 1e-7);

  auto objective = [&](const std::vector<double>& params) {
    std::vector<double> alice(params.begin(), params.begin() + q);
    std::vector<double> bob(params.begin() + q, params.end());
    return inf_divergence(born_law(angle_model(pair, alice, bob), pi), search_epsilon).divergence;
  };

  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(rungs) * 7919);
  std::uniform_real_distribution<double> unif(0.0, std::numbers::pi / 2.0);
  std::vector<std::vector<double>> starts;
  {
    // Evenly interleaved angles: Alice at multiples of the spacing, Bob
    // halfway between consecutive Alice angles.
    const double delta = std::numbers::pi / (2.0 * q);
    std::vector<double> s(2 * q);
    for (int j = 0; j < q; ++j) {
      s[j] = j * delta;
      s[q + j] = (j + 0.5) * delta;
    }
    starts.push_back(std::move(s));
  }
  for (int k = 0; k < 2; ++k) {
    std::vector<double> s(2 * q);
    for (double& x : s) x = unif(rng);
    starts.push_back(std::move(s));
  }

  std::vector<double> best_params;
  double best_value = -1.0;
  for (auto& params : starts) {
    double value = objective(params);
    double step = 0.1;
    while (step >= 1e-6) {
      bool improved = false;
      for (std::size_t i = 0; i < params.size(); ++i)
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> cand = params;
          cand[i] += sgn * step;
          double cv = objective(cand);
          if (cv > value) {
            params = std::move(cand);
            value = cv;
            improved = true;
          }
        }
      if (!improved) step *= 0.5;
    }
    if (value > best_value) {
      best_value = value;
      best_params = params;
    }
  }

  std::vector<double> alice(best_params.begin(), best_params.begin() + q);
  std::vector<double> bob(best_params.begin() + q, best_params.end());
  return angle_model(pair, alice, bob);
}

std::vector<LadderRow> ladder_sweep(int max_rungs, double epsilon, std::uint64_t seed) {
  if (max_rungs < 1 || max_rungs > 6)
    throw std::invalid_argument("rung count " + std::to_string(max_rungs) + " out of range");
  std::vector<LadderRow> rows;
  for (int k = 1; k <= max_rungs; ++k) {
    QuantumModel m = ladder_model(k, epsilon, seed);
    SettingDistribution surviving = ladder_inequality(k).pi;
    rows.push_back({k, SettingPolicy::surviving,
                    inf_divergence(born_law(m, surviving), epsilon).divergence});
    rows.push_back({k, SettingPolicy::all,
                    inf_divergence(born_law(m, SettingDistribution::uniform(m.scenario)), epsilon)
                        .divergence});
  }
  return rows;
}

double detection_threshold(const QuantumModel& m, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (m.scenario.parties != 2)
    throw ShapeMismatch("detection threshold is defined for two-party models");
  auto leaves_polytope = [&](double eta) {
    return inf_divergence(with_detection_efficiency(m, eta), 1e-9).divergence > 1e-7;
  };
  if (!leaves_polytope(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (leaves_polytope(mid) ? hi : lo) = mid;
  }
  return hi;
}

double discounted_strength(double divergence, int pairs_per_trial, double setting_acceptance) {
  if (divergence < 0.0) throw std::invalid_argument("divergence must be nonnegative");
  if (pairs_per_trial < 1) throw std::invalid_argument("pairs per trial must be at least 1");
  if (setting_acceptance <= 0.0 || setting_acceptance > 1.0)
    throw std::invalid_argument("setting acceptance must lie in (0, 1]");
  return divergence * setting_acceptance / pairs_per_trial;
}

}  // namespace bell

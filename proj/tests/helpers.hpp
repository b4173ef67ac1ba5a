#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <bell/classical.hpp>
#include <bell/quantum.hpp>
#include <bell/scenario.hpp>
#include <bell/tensor.hpp>

namespace testutil {

inline double u01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

inline double gauss(std::mt19937_64& rng) {
  double u = 0.0;
  while (u == 0.0) u = u01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * u01(rng));
}

// Random pure two-qubit state and random rank-1 projective measurements.
inline bell::QuantumModel random_quantum_model_222(std::mt19937_64& rng) {
  using namespace bell;
  ComplexVector state(4);
  double norm = 0.0;
  for (int i = 0; i < 4; ++i) {
    state[i] = {gauss(rng), gauss(rng)};
    norm += std::norm(state[i]);
  }
  for (auto& c : state) c /= std::sqrt(norm);

  auto random_basis = [&rng]() {
    ComplexMatrix h(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        std::complex<double> g{gauss(rng), i == j ? 0.0 : gauss(rng)};
        h(i, j) = g;
        h(j, i) = std::conj(g);
      }
    return conjugated_basis_family(hermitian_eig(h).eigenvectors);
  };

  QuantumModel m;
  m.scenario = Scenario(2, 2, 2);
  m.party_dims = {2, 2};
  m.state = std::move(state);
  m.measurements = {{random_basis(), random_basis()}, {random_basis(), random_basis()}};
  m.validate();
  return m;
}

// Dirichlet(1) mixture over all polytope vertices, optionally blended with a
// quantum law; no-signalling either way.
inline bell::ProbabilityLaw random_ns_law(const bell::Scenario& s, std::mt19937_64& rng,
                                          bool blend_quantum = false) {
  using namespace bell;
  SettingDistribution pi = SettingDistribution::uniform(s);
  std::vector<ProbabilityLaw> laws;
  std::vector<double> weights;
  double total = 0.0;
  for_each_vertex(s, [&](const DeterministicVertex& v) {
    laws.push_back(vertex_law(v, pi));
    double w = -std::log(1.0 - u01(rng));
    weights.push_back(w);
    total += w;
  });
  for (auto& w : weights) w /= total;
  ProbabilityLaw law = mix(laws, weights);
  if (blend_quantum && s == Scenario(2, 2, 2)) {
    double t = 0.5 * u01(rng);
    law = mix({law, born_law(random_quantum_model_222(rng), pi)}, {1.0 - t, t});
  }
  return law;
}

// Euclidean projection onto the probability simplex (sort-based).
inline void project_simplex(std::vector<double>& w) {
  std::vector<double> u = w;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  for (auto& x : w) x = std::max(0.0, x - theta);
}

// Projected-gradient reference solver for the inner divergence problem,
// deliberately sharing nothing with the production EM / Frank-Wolfe path.
inline double pgd_divergence(const bell::ProbabilityLaw& q, int starts = 20,
                             int max_iters = 4000, std::uint64_t seed = 20240901) {
  using namespace bell;
  const long long entries = q.scenario.entry_count();
  std::vector<std::vector<double>> vlaws;
  for_each_vertex(q.scenario, [&](const DeterministicVertex& v) {
    vlaws.push_back(vertex_law(v, q.pi).entries);
  });
  const int nv = static_cast<int>(vlaws.size());

  std::vector<long long> support;
  for (long long i = 0; i < entries; ++i)
    if (q.entries[i] > 0.0) support.push_back(i);

  auto log_likelihood = [&](const std::vector<double>& w, std::vector<double>& p) {
    std::fill(p.begin(), p.end(), 0.0);
    for (int v = 0; v < nv; ++v) {
      if (w[v] == 0.0) continue;
      for (long long i : support) p[i] += w[v] * vlaws[v][i];
    }
    double f = 0.0;
    for (long long i : support) {
      if (p[i] <= 0.0) return -std::numeric_limits<double>::infinity();
      f += q.entries[i] * std::log(p[i]);
    }
    return f;
  };

  std::mt19937_64 rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> p(entries), ptrial(entries), grad(nv), trial(nv);
  for (int s = 0; s < starts; ++s) {
    std::vector<double> w(nv);
    double total = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - u01(rng));
      total += x;
    }
    for (auto& x : w) x /= total;

    double f = log_likelihood(w, p);
    double step = 1.0;
    for (int it = 0; it < max_iters; ++it) {
      for (int v = 0; v < nv; ++v) {
        double g = 0.0;
        for (long long i : support) g += q.entries[i] * vlaws[v][i] / p[i];
        grad[v] = g;
      }
      step = std::min(step * 4.0, 1e6);
      bool moved = false;
      while (step > 1e-18) {
        trial = w;
        for (int v = 0; v < nv; ++v) trial[v] += step * grad[v];
        project_simplex(trial);
        double ftrial = log_likelihood(trial, ptrial);
        if (ftrial > f) {
          w.swap(trial);
          p.swap(ptrial);
          if (ftrial - f < 1e-15 * (std::abs(f) + 1.0)) it = max_iters;
          f = ftrial;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    best = std::max(best, f);
  }

  double qlogq = 0.0;
  for (long long i : support) qlogq += q.entries[i] * std::log(q.entries[i]);
  return (qlogq - best) / std::log(2.0);
}

struct CliRun {
  int exit_code = -1;
  std::string out;
};

inline CliRun run_cli(const std::string& args) {
#ifndef BELL_CLI_PATH
  throw std::runtime_error("BELL_CLI_PATH not defined");
#else
  CliRun r;
  std::string cmd = std::string(BELL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  std::array<char, 4096> buf;
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return r;
#endif
}

}  // namespace testutil

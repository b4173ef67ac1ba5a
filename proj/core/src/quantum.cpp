#include "bell/quantum.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bell {

namespace {

double phase_arg(PhaseConvention c, int x, double theta, int d) {
  switch (c) {
    case PhaseConvention::calibrated: return 4.0 * x * theta / d;
    case PhaseConvention::flat: return 2.0 * x * theta;
    case PhaseConvention::literal: return x * theta / d;
  }
  return 0.0;
}

// Applies a local operator to one tensor factor of a multipartite vector.
ComplexVector apply_local(const ComplexMatrix& op, int party, const std::vector<int>& dims,
                          const ComplexVector& in) {
  long long stride = 1;
  for (std::size_t j = static_cast<std::size_t>(party) + 1; j < dims.size(); ++j)
    stride *= dims[j];
  const int d = dims[party];
  const long long block = stride * d;
  ComplexVector out(in.size(), cplx{0.0, 0.0});
  for (long long base = 0; base < static_cast<long long>(in.size()); base += block)
    for (int xo = 0; xo < d; ++xo)
      for (int xi = 0; xi < d; ++xi) {
        cplx c = op(xo, xi);
        if (c == cplx{0.0, 0.0}) continue;
        const cplx* src = in.data() + base + xi * stride;
        cplx* dst = out.data() + base + xo * stride;
        for (long long s = 0; s < stride; ++s) dst[s] += c * src[s];
      }
  return out;
}

double norm_squared(const ComplexVector& v) {
  double n = 0.0;
  for (const cplx& c : v) n += std::norm(c);
  return n;
}

}  // namespace

void ProjectorFamily::validate() const {
  if (projectors.empty()) throw InvalidModel("projector family is empty");
  const std::size_t n = projectors.front().rows();
  ComplexMatrix sum(n, n);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const ComplexMatrix& p = projectors[k];
    if (p.rows() != n || p.cols() != n)
      throw InvalidModel("projector " + std::to_string(k) + " has inconsistent shape");
    if (!p.is_hermitian(tolerance::projector))
      throw InvalidModel("projector " + std::to_string(k) + " is not hermitian");
    if ((p * p - p).max_abs() > tolerance::projector)
      throw InvalidModel("projector " + std::to_string(k) + " is not idempotent");
    for (std::size_t j = 0; j < k; ++j)
      if ((projectors[j] * p).max_abs() > tolerance::projector)
        throw InvalidModel("projectors " + std::to_string(j) + " and " + std::to_string(k) +
                           " are not orthogonal");
    sum += p;
  }
  if ((sum - ComplexMatrix::identity(n)).max_abs() > tolerance::projector)
    throw InvalidModel("projector family does not sum to the identity");
}

ProjectorFamily conjugated_basis_family(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw InvalidModel("conjugating matrix is not square");
  if (!u.is_unitary()) throw InvalidModel("conjugating matrix is not unitary");
  const std::size_t n = u.rows();
  ProjectorFamily family;
  family.projectors.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    ComplexMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) = u(i, x) * std::conj(u(j, x));
    family.projectors.push_back(std::move(p));
  }
  return family;
}

void SchmidtState::validate() const {
  if (coefficients.empty()) throw InvalidModel("schmidt state has no coefficients");
  double norm2 = 0.0;
  for (double c : coefficients) {
    if (c < 0.0) throw InvalidModel("schmidt coefficients must be nonnegative");
    norm2 += c * c;
  }
  if (std::abs(norm2 - 1.0) > tolerance::state_norm)
    throw InvalidModel("schmidt coefficients are not normalized");
}

SchmidtState maximally_entangled(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  return SchmidtState{std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d)))};
}

void QuantumModel::validate() const {
  if (party_dims.size() != static_cast<std::size_t>(scenario.parties))
    throw InvalidModel("party dimension count does not match the scenario");
  long long dim = 1;
  for (int d : party_dims) {
    if (d < 1) throw InvalidModel("party dimensions must be positive");
    dim *= d;
  }
  if (state.size() != static_cast<std::size_t>(dim))
    throw InvalidModel("state dimension does not match the party dimensions");
  if (std::abs(norm_squared(state) - 1.0) > tolerance::state_norm)
    throw InvalidModel("state is not normalized");
  if (measurements.size() != static_cast<std::size_t>(scenario.parties))
    throw InvalidModel("measurement table does not cover every party");
  for (int party = 0; party < scenario.parties; ++party) {
    if (measurements[party].size() != static_cast<std::size_t>(scenario.settings))
      throw InvalidModel("party " + std::to_string(party) +
                         " does not have one measurement per setting");
    for (const ProjectorFamily& family : measurements[party]) {
      if (family.outcomes() != scenario.outcomes)
        throw InvalidModel("measurement outcome count does not match the scenario");
      if (family.dim() != static_cast<std::size_t>(party_dims[party]))
        throw InvalidModel("measurement dimension does not match the party");
      family.validate();
    }
  }
}

ProbabilityLaw born_law(const QuantumModel& m, const SettingDistribution& pi) {
  m.validate();
  if (!(pi.scenario == m.scenario))
    throw ShapeMismatch("setting distribution is for a different scenario");
  pi.validate();

  const Scenario& sc = m.scenario;
  ProbabilityLaw law{sc, pi, std::vector<double>(sc.entry_count(), 0.0)};
  for (long long sp = 0; sp < sc.setting_patterns(); ++sp) {
    if (pi.weights[sp] <= 0.0) continue;
    auto settings = sc.unpack_settings(sp);
    std::vector<int> outcome(sc.parties, 0);
    for (long long op = 0; op < sc.outcome_patterns(); ++op) {
      ComplexVector projected = m.state;
      for (int party = 0; party < sc.parties; ++party) {
        const ComplexMatrix& proj = m.measurements[party][settings[party]].projectors[outcome[party]];
        projected = apply_local(proj, party, m.party_dims, projected);
      }
      law.at(sp, sc.pack_outcomes(outcome)) = pi.weights[sp] * norm_squared(projected);
      for (std::size_t i = outcome.size(); i-- > 0;) {
        if (++outcome[i] < sc.outcomes) break;
        outcome[i] = 0;
      }
    }
  }
  law.validate();
  return law;
}

ComplexMatrix qft(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  ComplexMatrix q(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      q(x, y) = std::polar(scale, 2.0 * std::numbers::pi * x * y / d);
  return q;
}

QuantumModel angle_model(const SchmidtState& state, const std::vector<double>& alice_angles,
                         const std::vector<double>& bob_angles, PhaseConvention convention) {
  state.validate();
  if (alice_angles.size() != bob_angles.size())
    throw InvalidModel("both parties need the same number of settings");
  const int d = state.d();
  const int q = static_cast<int>(alice_angles.size());

  QuantumModel m;
  m.scenario = Scenario(2, q, d);
  m.party_dims = {d, d};
  m.state.assign(static_cast<std::size_t>(d) * d, cplx{0.0, 0.0});
  for (int x = 0; x < d; ++x) m.state[static_cast<std::size_t>(x) * d + x] = state.coefficients[x];

  const ComplexMatrix fourier = qft(d);
  const ComplexMatrix fourier_inv = fourier.dagger();
  // Outcome x of the first party projects onto the vector with components
  // exp(-i(2 pi x k / d + phase(k, theta))) / sqrt(d); the second party uses
  // the opposite Fourier sign. The per-component phases sit on the left of
  // the transform so they tilt the basis instead of cancelling inside the
  // projectors.
  auto basis = [&](const ComplexMatrix& f, double theta) {
    ComplexVector diag(d);
    for (int k = 0; k < d; ++k) diag[k] = std::polar(1.0, -phase_arg(convention, k, theta, d));
    return conjugated_basis_family(ComplexMatrix::diagonal(diag) * f);
  };

  m.measurements.resize(2);
  for (int a = 0; a < q; ++a) m.measurements[0].push_back(basis(fourier_inv, alice_angles[a]));
  for (int b = 0; b < q; ++b) m.measurements[1].push_back(basis(fourier, bob_angles[b]));
  return m;
}

QuantumModel cglmp_model(int d, const SchmidtState& state, PhaseConvention convention) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (state.d() != d) throw InvalidModel("schmidt state dimension does not match");
  const double pi4 = std::numbers::pi / 4.0;
  const double pi8 = std::numbers::pi / 8.0;
  return angle_model(state, {0.0, pi4}, {pi8, -pi8}, convention);
}

QuantumModel ghz_model() {
  ComplexMatrix s1(2, 2), s2(2, 2);
  s1(0, 1) = 1.0;
  s1(1, 0) = 1.0;
  s2(0, 0) = 1.0;
  s2(1, 1) = -1.0;

  auto triple = [&](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
    return kron(kron(a, b), c);
  };
  ComplexMatrix b = triple(s1, s2, s2) + triple(s2, s1, s2) + triple(s2, s2, s1);
  b -= triple(s1, s1, s1);

  EigDecomposition eig = hermitian_eig(b);
  const std::size_t n = eig.eigenvalues.size();
  const double top = eig.eigenvalues[n - 1];
  if (std::abs(top - 4.0) > 1e-8)
    throw DegenerateEigenvector("largest eigenvalue is " + std::to_string(top) + ", expected 4");
  if (eig.eigenvalues[n - 2] > top - 1e-6)
    throw DegenerateEigenvector("eigenvalue-4 space is not one-dimensional");

  ComplexVector state(n);
  for (std::size_t i = 0; i < n; ++i) state[i] = eig.eigenvectors(i, n - 1);
  std::size_t lead = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(state[i]) > std::abs(state[lead])) lead = i;
  cplx rotate = std::abs(state[lead]) / state[lead];
  for (cplx& c : state) c *= rotate;

  ProjectorFamily flip;  // eigenprojectors of s1, +1 first
  {
    ComplexMatrix plus(2, 2), minus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    minus(0, 0) = minus(1, 1) = 0.5;
    minus(0, 1) = minus(1, 0) = -0.5;
    flip.projectors = {plus, minus};
  }
  ProjectorFamily parity;  // eigenprojectors of s2, +1 first
  {
    ComplexMatrix plus(2, 2), minus(2, 2);
    plus(0, 0) = 1.0;
    minus(1, 1) = 1.0;
    parity.projectors = {plus, minus};
  }

  QuantumModel m;
  m.scenario = Scenario(3, 2, 2);
  m.party_dims = {2, 2, 2};
  m.state = std::move(state);
  m.measurements = {{flip, parity}, {flip, parity}, {flip, parity}};
  return m;
}

SettingDistribution ghz_setting_distribution() {
  Scenario s(3, 2, 2);
  SettingDistribution pi{s, std::vector<double>(s.setting_patterns(), 0.0)};
  for (long long sp : {0, 3, 5, 6}) pi.weights[sp] = 0.25;
  return pi;
}

ProbabilityLaw with_detection_efficiency(const QuantumModel& m, double eta) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("efficiency must lie in [0, 1]");
  if (m.scenario.parties != 2)
    throw ShapeMismatch("detection efficiency degradation needs a two-party model");

  const int q = m.scenario.settings;
  const int r = m.scenario.outcomes;
  ProbabilityLaw base = born_law(m, SettingDistribution::uniform(m.scenario));

  Scenario degraded(2, q, r + 1);
  SettingDistribution pi = SettingDistribution::uniform(degraded);
  ProbabilityLaw law{degraded, pi, std::vector<double>(degraded.entry_count(), 0.0)};
  const double miss = 1.0 - eta;
  for (long long sp = 0; sp < degraded.setting_patterns(); ++sp) {
    std::vector<double> cond = conditional(base, sp);
    const double w = pi.weights[sp];
    for (int x = 0; x < r; ++x) {
      double row = 0.0;
      for (int y = 0; y < r; ++y) {
        law.at(sp, static_cast<long long>(x) * (r + 1) + y) = w * eta * eta * cond[x * r + y];
        row += cond[x * r + y];
      }
      law.at(sp, static_cast<long long>(x) * (r + 1) + r) = w * eta * miss * row;
    }
    for (int y = 0; y < r; ++y) {
      double col = 0.0;
      for (int x = 0; x < r; ++x) col += cond[x * r + y];
      law.at(sp, static_cast<long long>(r) * (r + 1) + y) = w * miss * eta * col;
    }
    law.at(sp, static_cast<long long>(r) * (r + 1) + r) = w * miss * miss;
  }
  law.validate();
  return law;
}

}  // namespace bell

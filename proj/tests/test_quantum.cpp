#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include <bell/quantum.hpp>
#include <bell/tensor.hpp>

#include "helpers.hpp"

using namespace bell;

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  ComplexMatrix h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::complex<double> g{testutil::gauss(rng), i == j ? 0.0 : testutil::gauss(rng)};
      h(i, j) = g;
      h(j, i) = std::conj(g);
    }
  return hermitian_eig(h).eigenvectors;
}

}  // namespace

TEST_CASE("qft is unitary and hits the right phases") {
  for (int d : {2, 3, 5}) {
    ComplexMatrix f = qft(d);
    CHECK(f.is_unitary(1e-12));
    CHECK(std::abs(f(1, 1) - std::polar(1.0 / std::sqrt(d), 2.0 * kPi / d)) < 1e-12);
  }
}

TEST_CASE("conjugated_basis_family forms a complete orthogonal projector set") {
  std::mt19937_64 rng(41);
  ProjectorFamily fam = conjugated_basis_family(random_unitary(3, rng));
  CHECK(fam.outcomes() == 3);
  CHECK(fam.dim() == 3);
  fam.validate();

  ComplexMatrix bad(2, 3);
  CHECK_THROWS_AS(conjugated_basis_family(bad), InvalidModel);
}

TEST_CASE("schmidt state validation") {
  SchmidtState ok = maximally_entangled(3);
  CHECK(ok.d() == 3);
  for (double c : ok.coefficients) CHECK(c == doctest::Approx(1.0 / std::sqrt(3.0)));
  ok.validate();

  SchmidtState bad{{0.5, 0.5}};
  CHECK_THROWS_AS(bad.validate(), InvalidModel);
  SchmidtState negative{{0.9797958971132712, -0.2}};
  CHECK_THROWS_AS(negative.validate(), InvalidModel);
  CHECK_THROWS(maximally_entangled(0));
}

TEST_CASE("born_law of the optimal qubit model reproduces the cosine correlations") {
  QuantumModel m = cglmp_model(2, maximally_entangled(2));
  SettingDistribution pi = SettingDistribution::uniform(m.scenario);
  ProbabilityLaw law = born_law(m, pi);
  law.validate();

  double c = std::cos(kPi / 8) * std::cos(kPi / 8);
  // agreeing outcomes carry cos^2(pi/8)/2 of each correlated pattern
  for (long long pat : {0ll, 1ll, 3ll}) {
    CHECK(law.at(pat, 0) * 4 == doctest::Approx(c / 2).epsilon(1e-10));
    CHECK(law.at(pat, 3) * 4 == doctest::Approx(c / 2).epsilon(1e-10));
    CHECK(law.at(pat, 1) * 4 == doctest::Approx((1 - c) / 2).epsilon(1e-10));
  }
  CHECK(law.at(2, 0) * 4 == doctest::Approx((1 - c) / 2).epsilon(1e-10));
  CHECK(law.at(2, 1) * 4 == doctest::Approx(c / 2).epsilon(1e-10));
}

TEST_CASE("born_law marginals are uniform for maximally entangled cglmp models") {
  for (int d : {2, 3}) {
    QuantumModel m = cglmp_model(d, maximally_entangled(d));
    SettingDistribution pi = SettingDistribution::uniform(m.scenario);
    ProbabilityLaw law = born_law(m, pi);
    Scenario s = m.scenario;
    for (long long pat = 0; pat < s.setting_patterns(); ++pat) {
      std::vector<double> alice(d, 0.0);
      for (long long o = 0; o < s.outcome_patterns(); ++o)
        alice[s.unpack_outcomes(o)[0]] += law.at(pat, o);
      for (int x = 0; x < d; ++x)
        CHECK(alice[x] == doctest::Approx(pi.weights[pat] / d).epsilon(1e-10));
    }
  }
}

TEST_CASE("born_law is invariant under local unitary conjugation") {
  std::mt19937_64 rng(17);
  QuantumModel m = testutil::random_quantum_model_222(rng);
  SettingDistribution pi = SettingDistribution::uniform(m.scenario);
  ProbabilityLaw before = born_law(m, pi);

  ComplexMatrix ua = random_unitary(2, rng);
  ComplexMatrix ub = random_unitary(2, rng);
  ComplexMatrix u = kron(ua, ub);

  QuantumModel rotated = m;
  rotated.state = u.apply(m.state);
  for (int setting = 0; setting < 2; ++setting) {
    for (std::size_t k = 0; k < 2; ++k) {
      rotated.measurements[0][setting].projectors[k] =
          ua * m.measurements[0][setting].projectors[k] * ua.dagger();
      rotated.measurements[1][setting].projectors[k] =
          ub * m.measurements[1][setting].projectors[k] * ub.dagger();
    }
  }
  ProbabilityLaw after = born_law(rotated, pi);
  for (long long i = 0; i < m.scenario.entry_count(); ++i)
    CHECK(std::abs(before.entries[i] - after.entries[i]) < 1e-12);
}

TEST_CASE("born_laws pass no-signalling") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    QuantumModel m = testutil::random_quantum_model_222(rng);
    ProbabilityLaw law = born_law(m, SettingDistribution::uniform(m.scenario));
    CHECK(check_no_signalling(law).ok(1e-10));
  }
  for (int d : {3, 4}) {
    QuantumModel m = cglmp_model(d, maximally_entangled(d));
    ProbabilityLaw law = born_law(m, SettingDistribution::uniform(m.scenario));
    CHECK(check_no_signalling(law).ok(1e-10));
  }
}

TEST_CASE("ghz law is deterministic on the four paradox patterns") {
  ProbabilityLaw law = born_law(ghz_model(), ghz_setting_distribution());
  law.validate();
  Scenario s = law.scenario;

  auto parity_mass = [&](const std::vector<int>& settings, int parity) {
    long long pat = s.pack_settings(settings);
    double total = 0.0;
    for (long long o = 0; o < s.outcome_patterns(); ++o) {
      std::vector<int> out = s.unpack_outcomes(o);
      if ((out[0] + out[1] + out[2]) % 2 == parity) total += law.at(pat, o);
    }
    return total / law.pi.weights[pat];
  };

  // product +1 means an even number of outcome-1 results
  CHECK(parity_mass({0, 1, 1}, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(parity_mass({1, 0, 1}, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(parity_mass({1, 1, 0}, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(parity_mass({0, 0, 0}, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ghz stabilizer operators pairwise commute") {
  ComplexMatrix x(2, 2), z(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  std::vector<ComplexMatrix> ops = {
      kron(x, kron(z, z)), kron(z, kron(x, z)), kron(z, kron(z, x)), kron(x, kron(x, x))};
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      CHECK((ops[i] * ops[j] - ops[j] * ops[i]).max_abs() < 1e-12);
}

TEST_CASE("phase conventions are reparameterizations of each other") {
  SettingDistribution pi = SettingDistribution::uniform(Scenario(2, 2, 2));
  SchmidtState state = maximally_entangled(2);
  std::vector<double> alice = {0.0, kPi / 4};
  std::vector<double> bob = {kPi / 8, -kPi / 8};
  ProbabilityLaw a = born_law(angle_model(state, alice, bob, PhaseConvention::calibrated), pi);

  // for qubits the calibrated phase 4xt/d equals the flat phase 2xt
  ProbabilityLaw b = born_law(angle_model(state, alice, bob, PhaseConvention::flat), pi);
  for (long long i = 0; i < a.scenario.entry_count(); ++i)
    CHECK(std::abs(a.entries[i] - b.entries[i]) < 1e-12);

  // the literal phase xt/d needs angles scaled by 4
  std::vector<double> alice4 = {0.0, kPi}, bob4 = {kPi / 2, -kPi / 2};
  ProbabilityLaw c = born_law(angle_model(state, alice4, bob4, PhaseConvention::literal), pi);
  for (long long i = 0; i < a.scenario.entry_count(); ++i)
    CHECK(std::abs(a.entries[i] - c.entries[i]) < 1e-12);
}

TEST_CASE("model validation rejects broken inputs") {
  QuantumModel m = cglmp_model(2, maximally_entangled(2));
  m.state[0] += 0.3;
  CHECK_THROWS_AS(m.validate(), InvalidModel);

  QuantumModel wrong_dims = cglmp_model(2, maximally_entangled(2));
  wrong_dims.party_dims = {2, 3};
  CHECK_THROWS_AS(wrong_dims.validate(), InvalidModel);

  QuantumModel broken = cglmp_model(2, maximally_entangled(2));
  broken.measurements[0][0].projectors[0](0, 0) += 0.2;
  CHECK_THROWS_AS(broken.validate(), InvalidModel);

  CHECK_THROWS(cglmp_model(1, maximally_entangled(1)));
}

TEST_CASE("detection efficiency padding keeps totals and no-signalling") {
  QuantumModel m = cglmp_model(2, maximally_entangled(2));
  for (double eta : {1.0, 0.9, 0.5, 0.0}) {
    ProbabilityLaw law = with_detection_efficiency(m, eta);
    law.validate();
    CHECK(law.scenario.outcomes == 3);
    CHECK(check_no_signalling(law).ok(1e-10));

    // both-miss corner
    CHECK(law.at(0, law.scenario.pack_outcomes({2, 2})) ==
          doctest::Approx(0.25 * (1 - eta) * (1 - eta)).epsilon(1e-12));
  }

  ProbabilityLaw dark = with_detection_efficiency(m, 0.0);
  for (long long pat = 0; pat < 4; ++pat)
    CHECK(dark.at(pat, dark.scenario.pack_outcomes({2, 2})) == doctest::Approx(0.25));

  ProbabilityLaw ideal = with_detection_efficiency(m, 1.0);
  ProbabilityLaw base = born_law(m, SettingDistribution::uniform(m.scenario));
  for (long long pat = 0; pat < 4; ++pat)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        CHECK(ideal.at(pat, ideal.scenario.pack_outcomes({x, y})) ==
              doctest::Approx(base.at(pat, base.scenario.pack_outcomes({x, y}))).epsilon(1e-12));

  CHECK_THROWS(with_detection_efficiency(m, 1.5));
}

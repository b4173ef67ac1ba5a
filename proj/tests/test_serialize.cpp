#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "json.hpp"

#include <bell/quantum.hpp>
#include <bell/serialize.hpp>
#include <bell/strength.hpp>

#include "helpers.hpp"

using namespace bell;
using ordered = nlohmann::ordered_json;

TEST_CASE("law JSON round-trip is lossless") {
  std::mt19937_64 rng(31);
  ProbabilityLaw law = testutil::random_ns_law(Scenario(2, 2, 3), rng);
  ProbabilityLaw back = law_from_json(to_json(law));
  CHECK(back.scenario == law.scenario);
  REQUIRE(back.entries.size() == law.entries.size());
  for (std::size_t i = 0; i < law.entries.size(); ++i)
    CHECK(back.entries[i] == doctest::Approx(law.entries[i]).epsilon(1e-15));
  for (std::size_t i = 0; i < law.pi.weights.size(); ++i)
    CHECK(back.pi.weights[i] == doctest::Approx(law.pi.weights[i]).epsilon(1e-15));
}

TEST_CASE("inequality JSON round-trip and optional pi") {
  BellInequality ineq = canonicalize(cglmp_inequality(3));
  BellInequality back = inequality_from_json(to_json(ineq));
  CHECK(back.scenario == ineq.scenario);
  CHECK(back.bound == doctest::Approx(ineq.bound).epsilon(1e-15));
  CHECK(back.form == InequalityForm::canonical);
  for (std::size_t i = 0; i < ineq.coefficients.size(); ++i)
    CHECK(back.coefficients[i] == doctest::Approx(ineq.coefficients[i]).epsilon(1e-15));

  // dropping pi defaults to uniform
  ordered j = ordered::parse(to_json(ineq));
  j.erase("pi");
  BellInequality uniform = inequality_from_json(j.dump());
  for (double w : uniform.pi.weights) CHECK(w == doctest::Approx(0.25));
}

TEST_CASE("model JSON round-trip preserves the born law") {
  std::mt19937_64 rng(12);
  QuantumModel m = testutil::random_quantum_model_222(rng);
  QuantumModel back = model_from_json(to_json(m));
  back.validate();

  SettingDistribution pi = SettingDistribution::uniform(m.scenario);
  ProbabilityLaw a = born_law(m, pi);
  ProbabilityLaw b = born_law(back, pi);
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    CHECK(a.entries[i] == doctest::Approx(b.entries[i]).epsilon(1e-12));
}

TEST_CASE("named model shorthands expand") {
  QuantumModel chsh = model_from_json(R"({"named":"chsh"})");
  CHECK(chsh.scenario == Scenario(2, 2, 2));

  QuantumModel ghz = model_from_json(R"({"named":"ghz"})");
  CHECK(ghz.scenario == Scenario(3, 2, 2));

  QuantumModel cglmp3 = model_from_json(R"({"named":"cglmp","d":3})");
  CHECK(cglmp3.scenario == Scenario(2, 2, 3));

  QuantumModel skewed = model_from_json(R"({"named":"cglmp","d":2,"schmidt":[0.8,0.6]})");
  CHECK(skewed.scenario == Scenario(2, 2, 2));

  QuantumModel ladder = model_from_json(R"({"named":"ladder","rungs":2})");
  CHECK(ladder.scenario == Scenario(2, 3, 2));

  CHECK_THROWS_AS(model_from_json(R"({"named":"nope"})"), ParseError);
}

TEST_CASE("parse errors carry through") {
  CHECK_THROWS_AS(law_from_json("{"), ParseError);
  CHECK_THROWS_AS(law_from_json(R"({"scenario":{}})"), ParseError);
  CHECK_THROWS_AS(inequality_from_json("[1,2,3]"), ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"state":[]})"), ParseError);

  // shape is parseable but the law is invalid
  std::string bad = R"({"scenario":{"parties":2,"settings":2,"outcomes":2},
                        "pi":[0.25,0.25,0.25,0.25],
                        "entries":[0.9,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0]})";
  CHECK_THROWS_AS(law_from_json(bad), InvalidLaw);
}

TEST_CASE("strength result JSON exposes the documented keys") {
  QuantumModel m = cglmp_model(2, maximally_entangled(2));
  ProbabilityLaw q = born_law(m, SettingDistribution::uniform(m.scenario));
  StrengthResult res = inf_divergence(q, 1e-9);
  FaceCertificate face = extract_face(q, res);

  ordered plain = ordered::parse(to_json(res));
  CHECK(plain.contains("divergence_bits"));
  CHECK(plain.contains("kkt_slack"));
  CHECK(plain.contains("iterations"));
  CHECK(plain.contains("converged"));
  REQUIRE(plain.contains("mixture"));
  CHECK(!plain.contains("face"));
  double total = 0.0;
  for (const auto& item : plain["mixture"]) {
    CHECK(item.contains("vertex"));
    CHECK(item.contains("weight"));
    total += item["weight"].get<double>();
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  ordered with_face = ordered::parse(to_json(res, &face));
  REQUIRE(with_face.contains("face"));
  CHECK(with_face["face"].contains("inequality"));
  CHECK(with_face["face"].contains("quantum_value"));
  CHECK(with_face["face"].contains("classical_bound"));
  CHECK(with_face["face"]["quantum_value"].get<double>() >
        with_face["face"]["classical_bound"].get<double>());

  // the embedded inequality is itself loadable
  BellInequality embedded = inequality_from_json(with_face["face"]["inequality"].dump());
  CHECK(embedded.scenario == q.scenario);
}

TEST_CASE("serialization is byte-stable") {
  BellInequality ineq = cglmp_inequality(2);
  CHECK(to_json(ineq) == to_json(ineq));

  std::mt19937_64 rng(77);
  ProbabilityLaw law = testutil::random_ns_law(Scenario(2, 2, 2), rng);
  CHECK(to_json(law) == to_json(law));
}

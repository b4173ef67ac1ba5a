#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "helpers.hpp"

using ordered = nlohmann::ordered_json;
using testutil::run_cli;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = std::string("/tmp/bell_cli_test_") + name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("help and malformed invocations") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("strength --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("strength").exit_code == 1);
  CHECK(run_cli("strength --named nope").exit_code == 1);
  CHECK(run_cli("strength --named cglmp --d 1").exit_code == 1);
  CHECK(run_cli("strength --named chsh --model /nonexistent.json").exit_code == 1);
  CHECK(run_cli("sweep --kind bogus").exit_code == 1);
}

TEST_CASE("strength reports the chsh value as json") {
  auto r = run_cli("strength --named chsh");
  REQUIRE(r.exit_code == 0);
  ordered j = ordered::parse(r.out);
  CHECK(j["divergence_bits"].get<double>() == doctest::Approx(0.046273847).epsilon(1e-6));
  CHECK(j["converged"].get<bool>());
  CHECK(j["kkt_slack"].get<double>() <= 1e-9);
  CHECK(!j.contains("face"));
}

TEST_CASE("iteration cap exits with code 2") {
  auto r = run_cli("strength --named chsh --max-iters 2");
  CHECK(r.exit_code == 2);
  ordered j = ordered::parse(r.out);
  CHECK_FALSE(j["converged"].get<bool>());
}

TEST_CASE("face and discount extras appear on demand") {
  auto r = run_cli("strength --named ghz --face --discount pairs=4,acceptance=0.5");
  REQUIRE(r.exit_code == 0);
  ordered j = ordered::parse(r.out);
  REQUIRE(j.contains("face"));
  CHECK(j["face"]["quantum_value"].get<double>() > j["face"]["classical_bound"].get<double>());
  double expected = j["divergence_bits"].get<double>() * 0.5 / 4.0;
  CHECK(j["discounted_bits"].get<double>() == doctest::Approx(expected).epsilon(1e-12));

  CHECK(run_cli("strength --named ghz --discount pairs=0").exit_code == 1);
  CHECK(run_cli("strength --named ghz --discount what").exit_code == 1);
}

TEST_CASE("output is byte-identical across thread counts") {
  auto a = run_cli("strength --named cglmp --d 3 --seed 5");
  auto b = run_cli("strength --named cglmp --d 3 --seed 5");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  setenv("BELL_THREADS", "1", 1);
  auto one = run_cli("strength --named cglmp --d 3 --seed 5");
  setenv("BELL_THREADS", "7", 1);
  auto seven = run_cli("strength --named cglmp --d 3 --seed 5");
  unsetenv("BELL_THREADS");
  CHECK(one.out == a.out);
  CHECK(seven.out == a.out);
}

TEST_CASE("sweep emits the documented csv headers") {
  auto ladder = run_cli("sweep --kind ladder --max-rungs 1");
  REQUIRE(ladder.exit_code == 0);
  std::istringstream in(ladder.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "rungs,policy,divergence_bits");
  std::string row;
  std::getline(in, row);
  CHECK(row.substr(0, 12) == "1,surviving,");

  auto eff = run_cli("sweep --kind efficiency --from 0.8 --to 1.0 --points 3");
  REQUIRE(eff.exit_code == 0);
  CHECK(eff.out.substr(0, 20) == "eta,divergence_bits\n");

  auto noise = run_cli("sweep --kind noise --from 0.0 --to 1.0 --points 3");
  REQUIRE(noise.exit_code == 0);
  CHECK(noise.out.substr(0, 22) == "noise,divergence_bits\n");

  auto dim = run_cli("sweep --kind dimension --from 2 --to 2");
  REQUIRE(dim.exit_code == 0);
  CHECK(dim.out.substr(0, 26) == "dimension,divergence_bits\n");
}

TEST_CASE("check evaluates an inequality against a law file") {
  auto face = run_cli("strength --named chsh --face");
  REQUIRE(face.exit_code == 0);
  ordered j = ordered::parse(face.out);
  std::string ineq_path = write_temp("ineq.json", j["face"]["inequality"].dump());

  ordered law;
  law["scenario"] = {{"parties", 2}, {"settings", 2}, {"outcomes", 2}};
  law["pi"] = {0.25, 0.25, 0.25, 0.25};
  std::vector<double> entries(16, 0.0625);
  law["entries"] = entries;
  std::string law_path = write_temp("law.json", law.dump());

  auto r = run_cli("check --law " + law_path + " --ineq " + ineq_path);
  REQUIRE(r.exit_code == 0);
  ordered verdict = ordered::parse(r.out);
  CHECK_FALSE(verdict["violated"].get<bool>());
  CHECK(verdict["value"].get<double>() <= verdict["classical_bound"].get<double>());

  CHECK(run_cli("check --law /nonexistent --ineq " + ineq_path).exit_code == 1);
}

TEST_CASE("canonicalize writes an idempotent file") {
  auto face = run_cli("strength --named chsh --face");
  REQUIRE(face.exit_code == 0);
  ordered j = ordered::parse(face.out);
  std::string raw_path = write_temp("raw.json", j["face"]["inequality"].dump());

  std::string once = "/tmp/bell_cli_test_canon1.json";
  std::string twice = "/tmp/bell_cli_test_canon2.json";
  REQUIRE(run_cli("canonicalize --in " + raw_path + " --out " + once).exit_code == 0);
  REQUIRE(run_cli("canonicalize --in " + once + " --out " + twice).exit_code == 0);

  std::ifstream a(once), b(twice);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(!sa.str().empty());
}

TEST_CASE("vertices counts and lists") {
  auto r = run_cli("vertices --parties 2 --settings 2 --outcomes 2 --list");
  REQUIRE(r.exit_code == 0);
  ordered j = ordered::parse(r.out);
  CHECK(j["count"].get<int>() == 16);
  REQUIRE(j.contains("vertices"));
  CHECK(j["vertices"].size() == 16);
  CHECK(j["vertices"][0] == ordered::array({0, 0, 0, 0}));

  auto big = run_cli("vertices --parties 3 --settings 2 --outcomes 5");
  REQUIRE(big.exit_code == 0);
  CHECK(ordered::parse(big.out)["count"].get<long long>() == 15625);

  CHECK(run_cli("vertices --parties 3 --settings 2 --outcomes 5 --list").exit_code == 1);
}

TEST_CASE("model file input drives the solver") {
  std::string path = write_temp("model.json", R"({"named":"cglmp","d":2})");
  auto r = run_cli("strength --model " + path);
  REQUIRE(r.exit_code == 0);
  ordered j = ordered::parse(r.out);
  CHECK(j["divergence_bits"].get<double>() == doctest::Approx(0.046273847).epsilon(1e-6));

  CHECK(run_cli("strength --named chsh --model " + path).exit_code == 1);
}
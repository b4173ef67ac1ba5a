#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <bell/classical.hpp>
#include <bell/quantum.hpp>
#include <bell/serialize.hpp>
#include <bell/strength.hpp>

namespace {

using ordered = nlohmann::ordered_json;

struct RunConfig {
  double epsilon = 1e-9;
  long long max_iterations = 100000;
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fmt10(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct Discount {
  int pairs = 1;
  double acceptance = 1.0;
};

Discount parse_discount(const std::string& text) {
  Discount d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("discount takes key=value pairs, got \"" + item + "\"");
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (key == "pairs")
      d.pairs = std::stoi(value);
    else if (key == "acceptance")
      d.acceptance = std::stod(value);
    else
      throw std::runtime_error("unknown discount key \"" + key + "\"");
  }
  return d;
}

struct StrengthArgs {
  std::string named;
  std::string model_path;
  int d = 0;
  std::string schmidt = "maxent";
  int rungs = 0;
  std::string policy = "surviving";
  double eta = -1.0;
  bool face = false;
  std::string discount;
};

int run_strength(const RunConfig& cfg, const StrengthArgs& args) {
  using namespace bell;

  ProbabilityLaw law;
  std::optional<SchmidtOptimum> optimum;

  if (!args.named.empty() && !args.model_path.empty())
    throw std::runtime_error("--named and --model are mutually exclusive");
  if (args.named == "chsh") {
    QuantumModel m = cglmp_model(2, maximally_entangled(2));
    law = born_law(m, SettingDistribution::uniform(m.scenario));
  } else if (args.named == "ghz") {
    law = born_law(ghz_model(), ghz_setting_distribution());
  } else if (args.named == "cglmp") {
    if (args.d < 2) throw std::runtime_error("cglmp needs --d at least 2");
    SchmidtState state = maximally_entangled(args.d);
    if (args.schmidt == "optimize") {
      optimum = optimize_schmidt(args.d, cfg.epsilon, cfg.seed);
      state = optimum->state;
    } else if (args.schmidt != "maxent") {
      state = SchmidtState{ordered::parse(read_file(args.schmidt)).get<std::vector<double>>()};
      state.validate();
    }
    QuantumModel m = cglmp_model(args.d, state);
    law = born_law(m, SettingDistribution::uniform(m.scenario));
  } else if (args.named == "ladder") {
    if (args.rungs < 1) throw std::runtime_error("ladder needs --rungs at least 1");
    QuantumModel m = ladder_model(args.rungs, cfg.epsilon, cfg.seed);
    SettingDistribution pi = args.policy == "all" ? SettingDistribution::uniform(m.scenario)
                                                  : ladder_inequality(args.rungs).pi;
    law = born_law(m, pi);
  } else if (args.named == "ch") {
    if (args.eta < 0.0) throw std::runtime_error("ch needs --eta in [0, 1]");
    law = with_detection_efficiency(cglmp_model(2, maximally_entangled(2)), args.eta);
  } else if (!args.model_path.empty()) {
    QuantumModel m = model_from_json(read_file(args.model_path));
    law = born_law(m, SettingDistribution::uniform(m.scenario));
  } else {
    throw std::runtime_error("strength needs --named or --model");
  }

  StrengthResult res;
  if (optimum) {
    res = optimum->result;
  } else {
    SolverOptions options;
    options.epsilon = cfg.epsilon;
    options.max_iterations = cfg.max_iterations;
    res = inf_divergence(law, options);
  }

  std::optional<FaceCertificate> face;
  if (args.face) face = extract_face(law, res);

  ordered out = ordered::parse(to_json(res, face ? &*face : nullptr));
  if (!args.discount.empty()) {
    Discount disc = parse_discount(args.discount);
    out["discounted_bits"] = discounted_strength(res.divergence, disc.pairs, disc.acceptance);
  }
  if (optimum) out["schmidt"] = optimum->state.coefficients;
  std::cout << out.dump(2) << "\n";
  return res.converged ? 0 : 2;
}

int run_check(const std::string& law_path, const std::string& ineq_path) {
  using namespace bell;
  ProbabilityLaw law = law_from_json(read_file(law_path));
  BellInequality ineq = inequality_from_json(read_file(ineq_path));
  double value = evaluate(ineq, law);
  ordered out;
  out["value"] = value;
  out["classical_bound"] = ineq.bound;
  out["violated"] = value > ineq.bound + 1e-9;
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SweepArgs {
  std::string kind;
  int max_rungs = 4;
  double from = 0.0;
  double to = 1.0;
  int points = 11;
};

int run_sweep(const RunConfig& cfg, const SweepArgs& args) {
  using namespace bell;
  std::ostringstream csv;
  if (args.kind == "ladder") {
    csv << "rungs,policy,divergence_bits\n";
    for (const LadderRow& row : ladder_sweep(args.max_rungs, cfg.epsilon, cfg.seed))
      csv << row.rungs << ',' << (row.policy == SettingPolicy::surviving ? "surviving" : "all")
          << ',' << fmt10(row.divergence) << '\n';
  } else if (args.kind == "efficiency") {
    if (args.points < 2 || args.from < 0.0 || args.to > 1.0 || args.from >= args.to)
      throw std::runtime_error("efficiency sweep needs 0 <= from < to <= 1 and points >= 2");
    QuantumModel m = cglmp_model(2, maximally_entangled(2));
    csv << "eta,divergence_bits\n";
    for (int i = 0; i < args.points; ++i) {
      double eta = args.from + (args.to - args.from) * i / (args.points - 1);
      double d = inf_divergence(with_detection_efficiency(m, eta), cfg.epsilon).divergence;
      csv << fmt10(eta) << ',' << fmt10(d) << '\n';
    }
  } else if (args.kind == "noise") {
    if (args.points < 2 || args.from < 0.0 || args.to > 1.0 || args.from >= args.to)
      throw std::runtime_error("noise sweep needs 0 <= from < to <= 1 and points >= 2");
    QuantumModel m = cglmp_model(2, maximally_entangled(2));
    ProbabilityLaw q = born_law(m, SettingDistribution::uniform(m.scenario));
    csv << "noise,divergence_bits\n";
    for (int i = 0; i < args.points; ++i) {
      double w = args.from + (args.to - args.from) * i / (args.points - 1);
      double d = inf_divergence(add_noise(q, w), cfg.epsilon).divergence;
      csv << fmt10(w) << ',' << fmt10(d) << '\n';
    }
  } else if (args.kind == "dimension") {
    int lo = static_cast<int>(args.from), hi = static_cast<int>(args.to);
    if (lo < 2 || hi < lo) throw std::runtime_error("dimension sweep needs 2 <= from <= to");
    csv << "dimension,divergence_bits\n";
    for (int d = lo; d <= hi; ++d) {
      SchmidtOptimum opt = optimize_schmidt(d, cfg.epsilon, cfg.seed);
      csv << d << ',' << fmt10(opt.result.divergence) << '\n';
    }
  } else {
    throw std::runtime_error("unknown sweep kind \"" + args.kind + "\"");
  }
  std::cout << csv.str();
  return 0;
}

int run_vertices(int parties, int settings, int outcomes, bool list) {
  using namespace bell;
  Scenario s(parties, settings, outcomes);
  long long count = vertex_count(s);
  ordered out;
  out["scenario"] = ordered{{"parties", parties}, {"settings", settings}, {"outcomes", outcomes}};
  out["count"] = count;
  if (list) {
    if (count > 4096) throw std::runtime_error("refusing to list more than 4096 vertices");
    ordered rows = ordered::array();
    for_each_vertex(s, [&](const DeterministicVertex& v) { rows.push_back(v.assignment); });
    out["vertices"] = std::move(rows);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_canonicalize(const std::string& in_path, const std::string& out_path) {
  using namespace bell;
  BellInequality ineq = inequality_from_json(read_file(in_path));
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << to_json(canonicalize(ineq)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell experiment statistical strength toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--epsilon", cfg.epsilon, "KKT slack target for the inner solver");
  app.add_option("--max-iters", cfg.max_iterations, "inner solver iteration cap");
  app.add_option("--seed", cfg.seed, "seed for randomized multi-starts");

  StrengthArgs sargs;
  CLI::App* strength = app.add_subcommand("strength", "divergence of an experiment");
  strength->add_option("--named", sargs.named, "chsh | ghz | cglmp | ladder | ch")
      ->check(CLI::IsMember({"chsh", "ghz", "cglmp", "ladder", "ch"}));
  strength->add_option("--model", sargs.model_path, "model JSON file");
  strength->add_option("--d", sargs.d, "outcome count for cglmp");
  strength->add_option("--schmidt", sargs.schmidt, "maxent | optimize | coefficient file");
  strength->add_option("--rungs", sargs.rungs, "ladder length");
  strength->add_option("--policy", sargs.policy, "ladder setting distribution")
      ->check(CLI::IsMember({"surviving", "all"}));
  strength->add_option("--eta", sargs.eta, "detection efficiency for ch");
  strength->add_flag("--face", sargs.face, "also extract the supporting face");
  strength->add_option("--discount", sargs.discount, "pairs=N,acceptance=F");

  std::string law_path, ineq_path;
  CLI::App* check = app.add_subcommand("check", "evaluate an inequality on a law");
  check->add_option("--law", law_path, "law JSON file")->required();
  check->add_option("--ineq", ineq_path, "inequality JSON file")->required();

  SweepArgs wargs;
  CLI::App* sweep = app.add_subcommand("sweep", "grid runs, CSV output");
  sweep->add_option("--kind", wargs.kind, "ladder | efficiency | noise | dimension")->required();
  sweep->add_option("--max-rungs", wargs.max_rungs, "ladder sweep upper K");
  sweep->add_option("--from", wargs.from, "grid start");
  sweep->add_option("--to", wargs.to, "grid end");
  sweep->add_option("--points", wargs.points, "grid size");

  int parties = 2, settings = 2, outcomes = 2;
  bool list = false;
  CLI::App* vertices = app.add_subcommand("vertices", "classical polytope vertices");
  vertices->add_option("--parties", parties, "party count");
  vertices->add_option("--settings", settings, "settings per party");
  vertices->add_option("--outcomes", outcomes, "outcomes per measurement");
  vertices->add_flag("--list", list, "dump the assignments");

  std::string in_path, out_path;
  CLI::App* canonicalize = app.add_subcommand("canonicalize", "rewrite an inequality file");
  canonicalize->add_option("--in", in_path, "inequality JSON file")->required();
  canonicalize->add_option("--out", out_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (strength->parsed()) return run_strength(cfg, sargs);
    if (check->parsed()) return run_check(law_path, ineq_path);
    if (sweep->parsed()) return run_sweep(cfg, wargs);
    if (vertices->parsed()) return run_vertices(parties, settings, outcomes, list);
    if (canonicalize->parsed()) return run_canonicalize(in_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

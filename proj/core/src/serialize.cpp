#include "bell/serialize.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"

namespace bell {

namespace {

using ordered = nlohmann::ordered_json;

ordered scenario_json(const Scenario& s) {
  return ordered{{"parties", s.parties}, {"settings", s.settings}, {"outcomes", s.outcomes}};
}

Scenario scenario_from(const ordered& j) {
  return Scenario(j.at("parties").get<int>(), j.at("settings").get<int>(),
                  j.at("outcomes").get<int>());
}

ordered family_json(const ProjectorFamily& family) {
  ordered re = ordered::array();
  ordered im = ordered::array();
  for (const ComplexMatrix& p : family.projectors) {
    ordered pre = ordered::array();
    ordered pim = ordered::array();
    for (std::size_t i = 0; i < p.rows(); ++i) {
      ordered row_re = ordered::array();
      ordered row_im = ordered::array();
      for (std::size_t j = 0; j < p.cols(); ++j) {
        row_re.push_back(p(i, j).real());
        row_im.push_back(p(i, j).imag());
      }
      pre.push_back(std::move(row_re));
      pim.push_back(std::move(row_im));
    }
    re.push_back(std::move(pre));
    im.push_back(std::move(pim));
  }
  return ordered{{"re", std::move(re)}, {"im", std::move(im)}};
}

ProjectorFamily family_from(const ordered& j) {
  const ordered& re = j.at("re");
  const ordered& im = j.at("im");
  if (re.size() != im.size()) throw ParseError("measurement re/im outcome counts differ");
  ProjectorFamily family;
  for (std::size_t k = 0; k < re.size(); ++k) {
    const ordered& pre = re.at(k);
    const ordered& pim = im.at(k);
    std::size_t n = pre.size();
    ComplexMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t col = 0; col < n; ++col)
        p(i, col) = cplx{pre.at(i).at(col).get<double>(), pim.at(i).at(col).get<double>()};
    family.projectors.push_back(std::move(p));
  }
  return family;
}

ordered inequality_json(const BellInequality& ineq) {
  ordered j;
  j["scenario"] = scenario_json(ineq.scenario);
  j["pi"] = ineq.pi.weights;
  j["coefficients"] = ineq.coefficients;
  j["bound"] = ineq.bound;
  j["form"] = ineq.form == InequalityForm::canonical ? "canonical" : "raw";
  return j;
}

QuantumModel named_model(const ordered& j) {
  const std::string name = j.at("named").get<std::string>();
  if (name == "chsh") return cglmp_model(2, maximally_entangled(2));
  if (name == "ghz") return ghz_model();
  if (name == "cglmp") {
    int d = j.at("d").get<int>();
    SchmidtState state =
        j.contains("schmidt") ? SchmidtState{j.at("schmidt").get<std::vector<double>>()}
                              : maximally_entangled(d);
    return cglmp_model(d, state);
  }
  if (name == "ladder") {
    int rungs = j.at("rungs").get<int>();
    int q = rungs + 1;
    const double delta = std::numbers::pi / (2.0 * q);
    std::vector<double> alice(q), bob(q);
    for (int i = 0; i < q; ++i) {
      alice[i] = i * delta;
      bob[i] = (i + 0.5) * delta;
    }
    return angle_model(maximally_entangled(2), alice, bob);
  }
  throw ParseError("unknown named model \"" + name + "\"");
}

}  // namespace

std::string to_json(const ProbabilityLaw& law) {
  ordered j;
  j["scenario"] = scenario_json(law.scenario);
  j["pi"] = law.pi.weights;
  j["entries"] = law.entries;
  return j.dump(2);
}

ProbabilityLaw law_from_json(const std::string& text) {
  try {
    ordered j = ordered::parse(text);
    ProbabilityLaw law;
    law.scenario = scenario_from(j.at("scenario"));
    law.pi = SettingDistribution{law.scenario, j.at("pi").get<std::vector<double>>()};
    law.entries = j.at("entries").get<std::vector<double>>();
    law.validate();
    return law;
  } catch (const ordered::exception& e) {
    throw ParseError(std::string("law: ") + e.what());
  }
}

std::string to_json(const BellInequality& ineq) { return inequality_json(ineq).dump(2); }

BellInequality inequality_from_json(const std::string& text) {
  try {
    ordered j = ordered::parse(text);
    BellInequality ineq;
    ineq.scenario = scenario_from(j.at("scenario"));
    if (j.contains("pi"))
      ineq.pi = SettingDistribution{ineq.scenario, j.at("pi").get<std::vector<double>>()};
    else
      ineq.pi = SettingDistribution::uniform(ineq.scenario);
    ineq.pi.validate();
    ineq.coefficients = j.at("coefficients").get<std::vector<double>>();
    if (ineq.coefficients.size() != static_cast<std::size_t>(ineq.scenario.entry_count()))
      throw ParseError("inequality: coefficient count does not match the scenario");
    ineq.bound = j.at("bound").get<double>();
    const std::string form = j.at("form").get<std::string>();
    if (form == "raw")
      ineq.form = InequalityForm::raw;
    else if (form == "canonical")
      ineq.form = InequalityForm::canonical;
    else
      throw ParseError("inequality: form must be \"raw\" or \"canonical\"");
    return ineq;
  } catch (const ordered::exception& e) {
    throw ParseError(std::string("inequality: ") + e.what());
  }
}

std::string to_json(const QuantumModel& m) {
  ordered j;
  j["scenario"] = scenario_json(m.scenario);
  j["party_dims"] = m.party_dims;
  ordered re = ordered::array();
  ordered im = ordered::array();
  for (const cplx& c : m.state) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["state"] = ordered{{"re", std::move(re)}, {"im", std::move(im)}};
  ordered measurements = ordered::array();
  for (const auto& per_party : m.measurements) {
    ordered settings = ordered::array();
    for (const ProjectorFamily& family : per_party) settings.push_back(family_json(family));
    measurements.push_back(std::move(settings));
  }
  j["measurements"] = std::move(measurements);
  return j.dump(2);
}

QuantumModel model_from_json(const std::string& text) {
  try {
    ordered j = ordered::parse(text);
    if (j.contains("named")) return named_model(j);

    QuantumModel m;
    m.scenario = scenario_from(j.at("scenario"));
    m.party_dims = j.at("party_dims").get<std::vector<int>>();
    const ordered& state = j.at("state");
    const auto re = state.at("re").get<std::vector<double>>();
    const auto im = state.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw ParseError("model: state re/im lengths differ");
    m.state.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) m.state[i] = cplx{re[i], im[i]};
    for (const ordered& per_party : j.at("measurements")) {
      std::vector<ProjectorFamily> families;
      for (const ordered& family : per_party) families.push_back(family_from(family));
      m.measurements.push_back(std::move(families));
    }
    m.validate();
    return m;
  } catch (const ordered::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

std::string to_json(const StrengthResult& res, const FaceCertificate* face) {
  ordered j;
  j["divergence_bits"] = res.divergence;
  j["kkt_slack"] = res.kkt_slack;
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  ordered mixture = ordered::array();
  for (const auto& [vertex, weight] : res.mixture_weights)
    mixture.push_back(ordered{{"vertex", vertex}, {"weight", weight}});
  j["mixture"] = std::move(mixture);
  if (face != nullptr) {
    ordered f;
    f["inequality"] = inequality_json(face->inequality);
    f["log_ratio"] = face->log_ratio;
    f["quantum_value"] = face->quantum_value;
    f["classical_bound"] = face->classical_bound;
    j["face"] = std::move(f);
  }
  return j.dump(2);
}

}  // namespace bell

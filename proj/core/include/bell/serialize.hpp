#pragma once

#include <string>

#include "bell/classical.hpp"
#include "bell/quantum.hpp"
#include "bell/strength.hpp"

namespace bell {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Laws: {"scenario": {"parties", "settings", "outcomes"}, "pi": [...],
// "entries": [...]}. Readers validate and name the first violated
// constraint in the thrown message.
std::string to_json(const ProbabilityLaw& law);
ProbabilityLaw law_from_json(const std::string& text);

// Inequalities: {"scenario": ..., "pi": [...], "coefficients": [...],
// "bound": ..., "form": "raw" | "canonical"}. A missing "pi" defaults to
// uniform.
std::string to_json(const BellInequality& ineq);
BellInequality inequality_from_json(const std::string& text);

// Models: {"scenario": ..., "party_dims": [...], "state": {"re": [...],
// "im": [...]}, "measurements": [party][setting]{"re": [[[...]]], "im":
// [[[...]]]}} where re/im hold one dim x dim matrix per outcome. Named
// shorthands are accepted instead: {"named": "chsh"} | {"named": "ghz"} |
// {"named": "cglmp", "d": 3, "schmidt": [...]} | {"named": "ladder",
// "rungs": 4} (ladder uses the evenly interleaved starting angles).
std::string to_json(const QuantumModel& m);
QuantumModel model_from_json(const std::string& text);

// Solver reports: {"divergence_bits", "kkt_slack", "iterations",
// "converged", "mixture": [{"vertex", "weight"}], "face": {...}} with the
// face block present only when a certificate is supplied.
std::string to_json(const StrengthResult& res, const FaceCertificate* face = nullptr);

}  // namespace bell

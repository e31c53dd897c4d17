#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdomain/errors.hpp"
#include "bdomain/morse.hpp"
#include "bdomain/rewrite.hpp"
#include "bdomain/wirg.hpp"

namespace bdomain {

/// One rule verdict.  `fired` records whether the rule's condition held;
/// conditional rules carry their hypothesis in `condition`.
struct RuleVerdict {
  std::string rule;  // R1..R7
  bool fired = false;
  std::string verdict;
  std::string condition;
  std::string witness;
};

struct ClassificationReport {
  int genus = 0;
  int chi = 0;
  int max_weight = 0;
  int b1_surface = 0;
  int b1_solid = 0;
  int critical_count = 0;
  std::optional<int> min_count_context;  // 4k when a bridge number was declared
  std::vector<RuleVerdict> verdicts;

  const RuleVerdict* rule(const std::string& id) const {
    for (const auto& v : verdicts)
      if (v.rule == id) return &v;
    return nullptr;
  }
  bool fired(const std::string& id) const {
    const RuleVerdict* v = rule(id);
    return v && v->fired;
  }
};

/// Applies the fixed rule table to a validated WIRG plus its critical point
/// list.  b1_surface defaults to the genus (exact for closed oriented
/// surfaces); pipelines pass the measured value so inconsistencies surface.
inline ClassificationReport classify(const Wirg& g, const std::vector<CriticalPoint>& crit,
                                     std::optional<int> b1_surface = std::nullopt) {
  {
    auto violations = validate(g);
    if (!violations.empty())
      throw InvalidWirgError("graph fails validation: " + violations[0].rule + " at " +
                             violations[0].subject);
  }

  ClassificationReport rep;
  rep.critical_count = 0;
  int idx0 = 0, idx1 = 0, idx2 = 0;
  bool concave0 = false, concave2 = false;
  for (const auto& cp : crit) {
    rep.critical_count += 1;
    if (cp.index == 0) ++idx0;
    if (cp.index == 1) idx1 += cp.multiplicity;
    if (cp.index == 2) ++idx2;
    if (cp.index == 0 && cp.convexity == Convexity::Concave) concave0 = true;
    if (cp.index == 2 && cp.convexity == Convexity::Concave) concave2 = true;
  }
  rep.chi = idx0 - idx1 + idx2;
  rep.genus = (2 - rep.chi) / 2;
  rep.max_weight = g.max_weight();
  rep.b1_solid = betti1(g);
  rep.b1_surface = b1_surface.value_or(rep.genus);

  auto add = [&](const std::string& rule, bool fired, const std::string& verdict,
                 const std::string& condition, const std::string& witness) {
    rep.verdicts.push_back({rule, fired, fired ? verdict : "", condition, fired ? witness : ""});
  };

  // R1: all weights zero
  {
    bool all0 = rep.max_weight == 0;
    add("R1", all0, "handlebody; regular neighborhood of the solid Reeb graph",
        "every level component is a disk",
        all0 ? "genus " + std::to_string(rep.b1_solid) + " spine" : "");
  }
  // R2: all weights at most one
  add("R2", rep.max_weight <= 1, "handlebody", "every edge weight is less than 2",
      "max weight " + std::to_string(rep.max_weight));
  // R3: no concave extrema on one side
  {
    bool fires = !concave2 || !concave0;
    std::string which = !concave2 ? "no concave index-2 critical points"
                                  : "no concave index-0 critical points";
    add("R3", fires, "embedded handlebody", which, fires ? which : "");
  }
  // R4: torus boundary, weights at most 2: conditional solid-torus verdict
  {
    bool fires = rep.genus == 1 && rep.max_weight <= 2;
    add("R4", fires, "if this domain is a knot exterior then it is a solid torus (unknot)",
        "torus boundary and weights below 3", "conditional on the knot-exterior hypothesis");
  }
  // R5: torus boundary forces one independent loop in the boundary Reeb graph
  if (rep.genus == 1) {
    bool consistent = rep.b1_surface == 1;
    add("R5", true,
        consistent ? "boundary Reeb graph has exactly one loop"
                   : "data inconsistency: torus boundary but b1 != 1",
        "genus 1 requires b1(boundary Reeb) = 1", "b1 = " + std::to_string(rep.b1_surface));
  } else {
    add("R5", false, "", "only applies to torus boundary", "");
  }
  // R6: torus boundary, solid Reeb has a loop, weights below 3
  {
    bool fires = rep.genus == 1 && rep.max_weight <= 2 && rep.b1_solid == 1;
    add("R6", fires, "tubular neighborhood of a knot",
        "torus boundary, solid Reeb loop, weights below 3", "b1(solid Reeb) = 1");
  }
  // R7: fallback
  {
    bool handled = rep.fired("R1") || rep.fired("R2") || rep.fired("R3") || rep.fired("R4") ||
                   rep.fired("R6");
    std::string survivors;
    if (!handled) {
      for (const auto& seg : find_weight2_segments(g)) {
        if (!survivors.empty()) survivors += ", ";
        survivors += seg.edges[0];
      }
    }
    add("R7", !handled, "inconclusive at Reeb level", "no earlier rule applied",
        survivors.empty() ? "no weight-2 segments" : "surviving weight-2 segments: " + survivors);
  }
  return rep;
}

enum class MinCountOutcome { Exact, Slack, Contradiction };

struct MinCountCheck {
  MinCountOutcome outcome;
  int expected;
  int observed;
  int slack;  // observed - expected when positive
};

/// Compares the observed critical count against the 4k bound for a declared
/// k-bridge knot tube or complement.
inline MinCountCheck min_count_check(const ClassificationReport& rep, int bridges) {
  MinCountCheck chk;
  chk.expected = 4 * bridges;
  chk.observed = rep.critical_count;
  chk.slack = chk.observed - chk.expected;
  if (chk.slack == 0)
    chk.outcome = MinCountOutcome::Exact;
  else if (chk.slack > 0)
    chk.outcome = MinCountOutcome::Slack;
  else
    chk.outcome = MinCountOutcome::Contradiction;
  return chk;
}

inline nlohmann::json report_to_json(const ClassificationReport& rep) {
  nlohmann::json j;
  j["genus"] = rep.genus;
  j["chi"] = rep.chi;
  j["max_weight"] = rep.max_weight;
  j["b1_surface_reeb"] = rep.b1_surface;
  j["b1_solid_reeb"] = rep.b1_solid;
  j["critical_count"] = rep.critical_count;
  if (rep.min_count_context) j["min_count_context"] = *rep.min_count_context;
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& v : rep.verdicts) {
    rules.push_back({{"rule", v.rule},
                     {"fired", v.fired},
                     {"verdict", v.verdict},
                     {"condition", v.condition},
                     {"witness", v.witness}});
  }
  j["verdicts"] = rules;
  return j;
}

inline std::string report_to_text(const ClassificationReport& rep) {
  std::ostringstream os;
  os << "genus " << rep.genus << " (chi " << rep.chi << "), max weight " << rep.max_weight
     << ", b1 surface/solid " << rep.b1_surface << "/" << rep.b1_solid << ", " << rep.critical_count
     << " critical points\n";
  for (const auto& v : rep.verdicts) {
    os << "  " << v.rule << " " << (v.fired ? "fired" : "-    ");
    if (v.fired) os << "  " << v.verdict;
    if (v.fired && !v.witness.empty()) os << "  [" << v.witness << "]";
    os << "\n";
  }
  return os.str();
}

}  // namespace bdomain

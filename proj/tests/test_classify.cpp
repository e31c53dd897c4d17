#include <catch2/catch_amalgamated.hpp>

#include "bdomain/annotate.hpp"
#include "bdomain/classify.hpp"
#include "bdomain/generators.hpp"
#include "bdomain/reeb.hpp"
#include "fixtures.hpp"

using namespace bdomain;

namespace {

SolidReebResult pipeline(const TriSurface& s, Vec3 dir, uint64_t seed = 1) {
  HeightFunction h = make_height(dir);
  try {
    return solid_reeb(s, h);
  } catch (const NotMorseError&) {
    return solid_reeb(s, perturb_to_morse(s, h, seed));
  }
}

}  // namespace

TEST_CASE("horizontal torus classifies as a weight-zero handlebody (R1)", "[classify]") {
  TriSurface s = generate({.kind = GenKind::TorusHorizontal, .R = 2.0, .r = 0.5, .res = 48});
  auto res = solid_reeb(s, make_height({0, 0, 1}));
  auto rep = classify(res.wirg, res.critical, res.surface.betti1());
  REQUIRE(rep.genus == 1);
  REQUIRE(rep.chi == 0);
  REQUIRE(rep.fired("R1"));
  REQUIRE(rep.fired("R2"));  // R1 implies R2
  REQUIRE(rep.fired("R3"));  // no concave extrema at all
  REQUIRE(rep.fired("R6"));
  REQUIRE(rep.b1_surface == 1);
  REQUIRE_FALSE(rep.fired("R7"));
}

TEST_CASE("tilted vertical torus fires R2 but not R1", "[classify]") {
  TriSurface s = generate({.kind = GenKind::TorusVerticalTilted, .R = 2.0, .r = 0.5, .res = 48});
  auto res = solid_reeb(s, make_height({0, 0, 1}));
  auto rep = classify(res.wirg, res.critical, res.surface.betti1());
  REQUIRE_FALSE(rep.fired("R1"));
  REQUIRE(rep.max_weight == 1);
  REQUIRE(rep.fired("R2"));
  REQUIRE(rep.rule("R2")->verdict == "handlebody");
}

TEST_CASE("knot tubes are weight-zero handlebodies", "[classify]") {
  for (KnotName k : {KnotName::Trefoil, KnotName::Figure8}) {
    TriSurface s = generate({.kind = GenKind::KnotTube, .rho = 0.12, .res = 48, .knot = k});
    auto res = pipeline(s, {0, 0, 1});
    auto rep = classify(res.wirg, res.critical, res.surface.betti1());
    INFO(s.name);
    REQUIRE(rep.fired("R1"));
    REQUIRE(rep.genus == 1);
    REQUIRE(rep.fired("R6"));  // solid Reeb loop: tubular neighborhood of a knot
  }
}

TEST_CASE("every generated fixture fires a handlebody rule in a clean direction", "[classify]") {
  std::vector<GeneratorSpec> specs = {
      {.kind = GenKind::Sphere, .R = 1.0, .res = 24},
      {.kind = GenKind::TorusHorizontal, .R = 2.0, .r = 0.5, .res = 48},
      {.kind = GenKind::TorusVerticalTilted, .R = 2.0, .r = 0.5, .res = 48},
      {.kind = GenKind::KnotTube, .rho = 0.12, .res = 48},
      {.kind = GenKind::Genus2Pretzel, .res = 40},
  };
  for (const auto& spec : specs) {
    TriSurface s = generate(spec);
    Vec3 d = spec.kind == GenKind::Genus2Pretzel ? normalized(Vec3{0.97, 0.05, 0.23})
                                                 : Vec3{0, 0, 1};
    auto res = pipeline(s, d);
    auto rep = classify(res.wirg, res.critical, res.surface.betti1());
    INFO(s.name);
    REQUIRE((rep.fired("R1") || rep.fired("R2") || rep.fired("R3")));
  }
}

TEST_CASE("R3 detects the absence of concave extrema", "[classify]") {
  // the knot-exterior fixture has concave critical points on both sides
  Wirg g = fixtures::knot_exterior_wirg_2bridge();
  auto crit = fixtures::knot_exterior_critical_2bridge();
  auto rep = classify(g, crit, 1);
  REQUIRE_FALSE(rep.fired("R3"));
  REQUIRE_FALSE(rep.fired("R1"));
  REQUIRE_FALSE(rep.fired("R2"));
  // weights reach 3: R4 does not apply either, R7 reports the leftovers
  REQUIRE(rep.max_weight == 3);
  REQUIRE_FALSE(rep.fired("R4"));
  REQUIRE(rep.fired("R7"));
}

TEST_CASE("survivor weight-2 torus fixture yields the conditional R4 verdict", "[classify]") {
  Wirg g = fixtures::survivor_torus_wirg();
  REQUIRE(validate(g).empty());
  auto crit = fixtures::survivor_torus_critical();
  auto rep = classify(g, crit, 1);
  REQUIRE(rep.genus == 1);
  REQUIRE(rep.max_weight == 2);
  REQUIRE(rep.fired("R4"));
  REQUIRE(rep.rule("R4")->verdict ==
          "if this domain is a knot exterior then it is a solid torus (unknot)");
  REQUIRE(betti1(g) == 0);
  REQUIRE_FALSE(rep.fired("R6"));  // no solid loop
}

TEST_CASE("R5 flags an inconsistent surface betti number", "[classify]") {
  TriSurface s = generate({.kind = GenKind::TorusHorizontal, .R = 2.0, .r = 0.5, .res = 48});
  auto res = solid_reeb(s, make_height({0, 0, 1}));
  auto good = classify(res.wirg, res.critical, 1);
  REQUIRE(good.rule("R5")->verdict.find("inconsistency") == std::string::npos);
  auto bad = classify(res.wirg, res.critical, 2);
  REQUIRE(bad.rule("R5")->verdict.find("inconsistency") != std::string::npos);
}

TEST_CASE("classification is invariant under node relabeling", "[classify]") {
  Wirg g = fixtures::survivor_torus_wirg();
  auto crit = fixtures::survivor_torus_critical();
  auto rep1 = classify(g, crit, 1);
  // relabel every node and edge id
  Wirg h = g;
  for (auto& n : h.nodes) n.id = "x" + n.id;
  for (auto& e : h.edges) {
    e.id = "x" + e.id;
    e.lower = "x" + e.lower;
    e.upper = "x" + e.upper;
  }
  REQUIRE(canonical_signature(g) == canonical_signature(h));
  auto rep2 = classify(h, crit, 1);
  for (size_t i = 0; i < rep1.verdicts.size(); ++i) {
    REQUIRE(rep1.verdicts[i].fired == rep2.verdicts[i].fired);
    REQUIRE(rep1.verdicts[i].verdict == rep2.verdicts[i].verdict);
  }
}

TEST_CASE("invalid graphs are rejected", "[classify]") {
  Wirg g;
  WirgNode a;
  a.id = "a";
  a.height = 0;
  WirgNode b = a;
  b.id = "b";
  b.height = 1;
  g.nodes = {a, b};
  g.edges = {{"e", "a", "b", 2}};  // endpoint edges must have weight 0
  REQUIRE_THROWS_AS(classify(g, {}), InvalidWirgError);
}

TEST_CASE("min-count check against the 4k bridge bound", "[classify]") {
  TriSurface s = generate({.kind = GenKind::KnotTube, .rho = 0.12, .res = 48});
  auto res = pipeline(s, {0, 0, 1});
  auto rep = classify(res.wirg, res.critical, res.surface.betti1());

  SECTION("bridge-position tube is exact") {
    auto chk = min_count_check(rep, 2);
    REQUIRE(chk.outcome == MinCountOutcome::Exact);
    REQUIRE(chk.observed == 8);
  }
  SECTION("declared k=3 becomes a contradiction") {
    auto chk = min_count_check(rep, 3);
    REQUIRE(chk.outcome == MinCountOutcome::Contradiction);
  }
  SECTION("wiggled tube reports slack 4") {
    TriSurface w = generate({.kind = GenKind::KnotTube, .rho = 0.12, .res = 48, .wiggles = 1});
    auto wres = pipeline(w, {0, 0, 1});
    auto wrep = classify(wres.wirg, wres.critical, wres.surface.betti1());
    auto chk = min_count_check(wrep, 2);
    REQUIRE(chk.outcome == MinCountOutcome::Slack);
    REQUIRE(chk.slack == 4);
  }
}

TEST_CASE("pipeline annotation types the two-bore ball segment", "[classify][annotate]") {
  TriSurface s = fixtures::make_ball_two_bores();
  auto res = pipeline(s, {0, 0, 1});
  auto segs = find_weight2_segments(res.wirg);
  REQUIRE(segs.size() == 1);
  auto anns = annotate_weight2_segments(res);
  auto it = anns.find(segs[0].edges[0]);
  REQUIRE(it != anns.end());
  // both mouth events pinch a hole off the outer boundary: type (2), and
  // they involve the same bore, so the pair is unprimed
  REQUIRE(it->second.first.type == EndpointType::T2);
  REQUIRE(it->second.second.type == EndpointType::T2);
  REQUIRE(it->second.first.mirror_known);
  REQUIRE_FALSE(it->second.first.mirrored);

  segs[0].lower_type = it->second.first;
  segs[0].upper_type = it->second.second;
  REQUIRE(classify_weight2_segment(res.wirg, segs[0]) ==
          Weight2Verdict::ForbiddenCompressingDisk);
}

TEST_CASE("report serialization carries the rule table", "[classify]") {
  TriSurface s = generate({.kind = GenKind::TorusHorizontal, .R = 2.0, .r = 0.5, .res = 48});
  auto res = solid_reeb(s, make_height({0, 0, 1}));
  auto rep = classify(res.wirg, res.critical, res.surface.betti1());
  auto j = report_to_json(rep);
  REQUIRE(j["verdicts"].size() == 7);
  REQUIRE(j["genus"] == 1);
  std::string text = report_to_text(rep);
  REQUIRE(text.find("R1 fired") != std::string::npos);
}

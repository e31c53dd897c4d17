#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bdomain/generators.hpp"
#include "bdomain/morse.hpp"

using namespace bdomain;

namespace {

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 d;
  do {
    d = {g(rng), g(rng), g(rng)};
  } while (norm2(d) < 1e-6);
  return normalized(d);
}

std::vector<int> index_sequence(const std::vector<CriticalPoint>& cps) {
  std::vector<int> seq;
  for (const auto& cp : cps) seq.push_back(cp.index);
  return seq;
}

}  // namespace

TEST_CASE("sphere has one convex min and one convex max", "[morse]") {
  TriSurface s = generate({.kind = GenKind::Sphere, .R = 1.0, .res = 32});
  auto cps = critical_points(s, make_height({0, 0, 1}));
  REQUIRE(index_sequence(cps) == std::vector<int>{0, 2});
  REQUIRE(cps[0].convexity == Convexity::Convex);
  REQUIRE(cps[1].convexity == Convexity::Convex);
}

TEST_CASE("horizontal torus: indices 0,1,1,2 at analytic heights", "[morse]") {
  TriSurface s = generate({.kind = GenKind::TorusHorizontal, .R = 2.0, .r = 0.5, .res = 64});
  auto cps = critical_points(s, make_height({0, 0, 1}));
  REQUIRE(index_sequence(cps) == std::vector<int>{0, 1, 1, 2});
  REQUIRE(cps[0].height == Catch::Approx(-2.5).margin(1e-12));
  REQUIRE(cps[1].height == Catch::Approx(-1.5).margin(1e-12));
  REQUIRE(cps[2].height == Catch::Approx(1.5).margin(1e-12));
  REQUIRE(cps[3].height == Catch::Approx(2.5).margin(1e-12));
  REQUIRE(euler_from_critical_points(cps) == 0);
  REQUIRE(cps[0].convexity == Convexity::Convex);
  REQUIRE(cps[3].convexity == Convexity::Convex);
}

TEST_CASE("tilted vertical torus keeps the 0,1,1,2 sequence", "[morse]") {
  TriSurface s = generate({.kind = GenKind::TorusVerticalTilted, .R = 2.0, .r = 0.5, .res = 64});
  auto cps = critical_points(s, make_height({0, 0, 1}));
  REQUIRE(index_sequence(cps) == std::vector<int>{0, 1, 1, 2});
}

TEST_CASE("knot tubes have 4k critical points in bridge position", "[morse]") {
  for (KnotName k : {KnotName::Trefoil, KnotName::Figure8}) {
    TriSurface s = generate({.kind = GenKind::KnotTube, .rho = 0.12, .res = 64, .knot = k});
    auto cps = critical_points(s, make_height({0, 0, 1}));
    INFO(s.name);
    CAPTURE(cps.size());
    REQUIRE(cps.size() == 8);
    int mins = 0, saddles = 0, maxs = 0;
    for (const auto& cp : cps) {
      if (cp.index == 0) ++mins;
      if (cp.index == 1) saddles += cp.multiplicity;
      if (cp.index == 2) ++maxs;
      REQUIRE(cp.multiplicity == 1);
    }
    REQUIRE(mins == 2);
    REQUIRE(saddles == 4);
    REQUIRE(maxs == 2);
  }
}

TEST_CASE("wiggled trefoil tube gains 4 critical points", "[morse]") {
  TriSurface s = generate({.kind = GenKind::KnotTube, .rho = 0.12, .res = 64, .wiggles = 1});
  auto cps = critical_points(s, make_height({0, 0, 1}));
  REQUIRE(cps.size() == 12);
}

TEST_CASE("Euler relation holds for every generator and direction", "[morse]") {
  std::vector<GeneratorSpec> specs = {
      {.kind = GenKind::Sphere, .R = 1.0, .res = 24},
      {.kind = GenKind::TorusHorizontal, .R = 2.0, .r = 0.5, .res = 32},
      {.kind = GenKind::TorusVerticalTilted, .R = 2.0, .r = 0.5, .res = 32},
      {.kind = GenKind::KnotTube, .rho = 0.12, .res = 48},
      {.kind = GenKind::Genus2Pretzel, .res = 40},
  };
  std::mt19937_64 rng(20260811);
  for (const auto& spec : specs) {
    TriSurface s = generate(spec);
    int chi = euler_characteristic(s);
    VertexLinks links = build_links(s);
    for (int i = 0; i < 12; ++i) {
      HeightFunction h{random_direction(rng)};
      auto cps = critical_points(s, h, links);
      INFO(s.name << " dir " << h.direction);
      REQUIRE(euler_from_critical_points(cps) == chi);
      int mins = 0, maxs = 0;
      for (const auto& cp : cps) {
        mins += cp.index == 0;
        maxs += cp.index == 2;
      }
      REQUIRE(mins >= 1);
      REQUIRE(maxs >= 1);
      // global extrema of a bounded domain are convex
      REQUIRE(cps.front().index == 0);
      REQUIRE(cps.front().convexity == Convexity::Convex);
      REQUIRE(cps.back().index == 2);
      REQUIRE(cps.back().convexity == Convexity::Convex);
    }
  }
}

TEST_CASE("critical points are invariant under simultaneous rotation", "[morse]") {
  TriSurface s = generate({.kind = GenKind::KnotTube, .rho = 0.12, .res = 48});
  Vec3 d{0.3, -0.2, 0.93};
  auto before = critical_points(s, make_height(d));

  Vec3 axis = normalized(Vec3{1, 2, 0.5});
  double angle = 0.83;
  TriSurface rs = s;
  for (auto& v : rs.vertices) v = rotate_about(v, axis, angle);
  auto after = critical_points(rs, make_height(rotate_about(d, axis, angle)));

  REQUIRE(before.size() == after.size());
  for (size_t i = 0; i < before.size(); ++i) {
    REQUIRE(before[i].vertex == after[i].vertex);
    REQUIRE(before[i].index == after[i].index);
    REQUIRE(before[i].convexity == after[i].convexity);
  }
}

TEST_CASE("perturb_to_morse fixes the exactly vertical torus", "[morse]") {
  // vertical torus without tilt: z has two critical circles
  TriSurface s = generate({.kind = GenKind::TorusVerticalTilted, .R = 2.0, .r = 0.5,
                           .tilt_deg = 0.0, .res = 48});
  HeightFunction h = make_height({0, 0, 1});
  auto cps0 = critical_points(s, h);
  REQUIRE_FALSE(is_morse(s, cps0));

  HeightFunction hp = perturb_to_morse(s, h, 7);
  REQUIRE(norm(hp.direction - h.direction) <= 1.1e-3);
  auto cps = critical_points(s, hp);
  REQUIRE(is_morse(s, cps));
  REQUIRE(cps.size() == 4);
}

TEST_CASE("perturb_to_morse is a fixpoint on Morse input", "[morse]") {
  TriSurface s = generate({.kind = GenKind::TorusHorizontal, .R = 2.0, .r = 0.5, .res = 48});
  HeightFunction h = make_height({0, 0, 1});
  HeightFunction hp = perturb_to_morse(s, h, 3);
  REQUIRE(hp.direction == h.direction);
}

TEST_CASE("monkey saddles unfold unless strict mode rejects them", "[morse]") {
  // two apexes against a hexagonal ring of alternating heights: the apex
  // links alternate low-high three times, a multiplicity-2 saddle each
  TriSurface s;
  s.name = "monkey";
  s.vertices = {{0, 1, 0}, {0, -1, 0}};
  for (int k = 0; k < 6; ++k) {
    double th = std::numbers::pi * k / 3.0;
    s.vertices.push_back({std::cos(th), 0.2 * std::sin(th), k % 2 == 0 ? 1.0 : -1.0});
  }
  for (int k = 0; k < 6; ++k) {
    int a = 2 + k, b = 2 + (k + 1) % 6;
    s.triangles.push_back({0, b, a});
    s.triangles.push_back({1, a, b});
  }
  validate_surface(s);

  auto cps = critical_points(s, make_height({0, 0, 1}));
  int saddle_mult = 0, mins = 0, maxs = 0;
  for (const auto& cp : cps) {
    if (cp.index == 1) saddle_mult += cp.multiplicity;
    mins += cp.index == 0;
    maxs += cp.index == 2;
  }
  REQUIRE(mins == 3);
  REQUIRE(maxs == 3);
  REQUIRE(saddle_mult == 4);  // two multiplicity-2 saddles
  REQUIRE(euler_from_critical_points(cps) == 2);
  REQUIRE_THROWS_AS(critical_points(s, make_height({0, 0, 1}), true), NotMorseError);
}

TEST_CASE("equal regular heights are separated by the tie-break", "[morse]") {
  // octahedron in direction z: four equatorial vertices share height 0
  TriSurface s;
  s.name = "octahedron";
  s.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  s.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  auto cps = critical_points(s, make_height({0, 0, 1}));
  REQUIRE(cps.size() == 2);
  REQUIRE(cps[0].index == 0);
  REQUIRE(cps[1].index == 2);
  HeightFunction hp = perturb_to_morse(s, make_height({0, 0, 1}), 5);
  REQUIRE(hp.direction == Vec3{0, 0, 1});
}

#pragma once

// Hand-built fixtures shared by the unit and acceptance suites.

#include <cmath>

#include "bdomain/implicit.hpp"
#include "bdomain/mesh.hpp"
#include "bdomain/wirg.hpp"

namespace fixtures {

using namespace bdomain;

/// Cylinder with an elbow-shaped blind hole: a vertical bore from the top
/// turning into a horizontal pocket.  Points at the pocket end see wall in
/// every straight direction.
inline TriSurface make_mug(int res = 56) {
  auto cylinder = [](const Vec3& p, Vec3 base_dir, Vec3 base_pt, double radius, double len) {
    // distance-style field for a finite cylinder along base_dir from base_pt
    Vec3 d = p - base_pt;
    double along = dot(d, base_dir);
    Vec3 radial = d - base_dir * along;
    double rd = norm(radial) - radius;
    double cap = std::max(-along, along - len);
    return std::max(rd, cap);
  };
  auto f = [&](const Vec3& p) {
    double body = cylinder(p, {0, 0, 1}, {0, 0, 0}, 1.0, 2.0);
    double bore = cylinder(p, {0, 0, -1}, {0, 0, 2.5}, 0.16, 2.0);    // down to z = 0.5
    double pocket = cylinder(p, {1, 0, 0}, {0, 0, 0.5}, 0.16, 0.55);  // sideways at z = 0.5
    double hole = std::min(bore, pocket);
    return std::max(body, -hole);
  };
  ImplicitMesher mesher({-1.15, -1.15, -0.12}, {1.15, 1.15, 2.12}, res, res, res);
  TriSurface s = mesher.extract(f, "mug");
  laplacian_smooth(s);
  validate_surface(s);
  return s;
}

/// Mesh vertices deep in the mug pocket, with their outward normals.
inline std::vector<std::pair<Vec3, Vec3>> mug_pocket_points(const TriSurface& s, int want = 12) {
  VertexLinks links = build_links(s);
  std::vector<std::pair<Vec3, Vec3>> out;
  for (int v = 0; v < s.vertex_count() && static_cast<int>(out.size()) < want; ++v) {
    const Vec3& p = s.vertices[v];
    double rad = std::hypot(p.y, p.z - 0.5);
    if (p.x > 0.30 && p.x < 0.56 && rad < 0.18) out.emplace_back(p, links.normal[v]);
  }
  return out;
}

/// Ball with two offset tilted through-bores: the level sets between the
/// mouth events are pairs of pants (weight 2).  The bores are tilted so the
/// mouth rims are transverse to the height, and the boolean is blended
/// smoothly to keep the rims free of stray critical points.
inline TriSurface make_ball_two_bores(int res = 72) {
  auto smax = [](double a, double b, double k) {
    double h = std::clamp(0.5 - 0.5 * (b - a) / k, 0.0, 1.0);
    return b + (a - b) * h + k * h * (1.0 - h);
  };
  Vec3 axis = normalized(Vec3{0.42, 0.0, 0.91});
  auto bore = [&](const Vec3& p, double cy) {
    Vec3 d = p - Vec3{0, cy, 0};
    Vec3 radial = d - axis * dot(d, axis);
    return norm(radial) - 0.14;
  };
  auto f = [&](const Vec3& p) {
    double ball = norm(p) - 1.0;
    double cut = smax(ball, -bore(p, 0.3), 0.05);
    return smax(cut, -bore(p, -0.45), 0.05);
  };
  ImplicitMesher mesher({-1.1, -1.1, -1.1}, {1.1, 1.1, 1.1}, res, res, res);
  TriSurface s = mesher.extract(f, "ball-two-bores");
  laplacian_smooth(s, 30, 0.6);
  validate_surface(s);
  return s;
}

/// The weighted indexed Reeb graph of a 2-bridge knot exterior at the
/// minimal 4k = 8 critical points: a path with weights 0,1,2,3,2,1,0.  The
/// level components are the sphere slice minus the knot tube's k disks, so
/// the weight is the tube circle count minus... the circle count itself at
/// each level, and the single concave minimum is the second tube event.
inline Wirg knot_exterior_wirg_2bridge() {
  auto node = [](const std::string& id, double h, int idx, Convexity c, SaddleNormal sn) {
    WirgNode n;
    n.id = id;
    n.height = h;
    n.index = idx;
    n.convexity = c;
    n.saddle_normal = sn;
    return n;
  };
  Wirg g;
  g.nodes = {
      node("n1", 0, 0, Convexity::Convex, SaddleNormal::NA),
      node("n2", 1, 1, Convexity::NA, SaddleNormal::Down),
      node("n3", 2, 0, Convexity::Concave, SaddleNormal::NA),
      node("n4", 3, 1, Convexity::NA, SaddleNormal::Down),
      node("n5", 4, 1, Convexity::NA, SaddleNormal::Up),
      node("n6", 5, 2, Convexity::Concave, SaddleNormal::NA),
      node("n7", 6, 1, Convexity::NA, SaddleNormal::Up),
      node("n8", 7, 2, Convexity::Convex, SaddleNormal::NA),
  };
  g.edges = {{"e1", "n1", "n2", 0}, {"e2", "n2", "n3", 1}, {"e3", "n3", "n4", 2},
             {"e4", "n4", "n5", 3}, {"e5", "n5", "n6", 2}, {"e6", "n6", "n7", 1},
             {"e7", "n7", "n8", 0}};
  return g;
}

/// Critical point list matching the exterior WIRG above.
inline std::vector<CriticalPoint> knot_exterior_critical_2bridge() {
  std::vector<CriticalPoint> cps;
  auto add = [&](int v, double h, int idx, Convexity c, SaddleNormal sn) {
    cps.push_back({v, h, idx, 1, c, sn});
  };
  add(0, 0, 0, Convexity::Convex, SaddleNormal::NA);
  add(1, 1, 1, Convexity::NA, SaddleNormal::Down);
  add(2, 2, 0, Convexity::Concave, SaddleNormal::NA);
  add(3, 3, 1, Convexity::NA, SaddleNormal::Down);
  add(4, 4, 1, Convexity::NA, SaddleNormal::Up);
  add(5, 5, 2, Convexity::Concave, SaddleNormal::NA);
  add(6, 6, 1, Convexity::NA, SaddleNormal::Up);
  add(7, 7, 2, Convexity::Convex, SaddleNormal::NA);
  return cps;
}

/// Torus-boundary WIRG with a surviving weight-2 segment between a bivalent
/// type-(2) lower endpoint and a trivalent type-(4) upper endpoint.
inline Wirg survivor_torus_wirg() {
  auto node = [](const std::string& id, double h, std::optional<int> idx, Convexity c,
                 SaddleNormal sn) {
    WirgNode n;
    n.id = id;
    n.height = h;
    n.index = idx;
    n.convexity = c;
    n.saddle_normal = sn;
    return n;
  };
  Wirg g;
  g.nodes = {
      node("a1", 0.0, 0, Convexity::Convex, SaddleNormal::NA),
      node("a2", 0.5, 0, Convexity::Convex, SaddleNormal::NA),
      node("j", 1.0, 1, Convexity::NA, SaddleNormal::Down),
      node("b", 1.5, 0, Convexity::Concave, SaddleNormal::NA),
      node("L", 2.0, 1, Convexity::NA, SaddleNormal::Up),
      node("U", 3.0, 1, Convexity::NA, SaddleNormal::Up),
      node("c1", 3.5, 1, Convexity::NA, SaddleNormal::Up),
      node("t1", 4.0, 2, Convexity::Convex, SaddleNormal::NA),
      node("c2", 3.7, 1, Convexity::NA, SaddleNormal::Up),
      node("t2", 4.2, 2, Convexity::Convex, SaddleNormal::NA),
  };
  g.edges = {{"e1", "a1", "j", 0}, {"e2", "a2", "j", 0}, {"e3", "j", "b", 0},
             {"e4", "b", "L", 1},  {"w2", "L", "U", 2},  {"f1", "U", "c1", 1},
             {"g1", "c1", "t1", 0}, {"f2", "U", "c2", 1}, {"g2", "c2", "t2", 0}};
  return g;
}

inline std::vector<CriticalPoint> survivor_torus_critical() {
  std::vector<CriticalPoint> cps;
  auto add = [&](int v, double h, int idx, Convexity c, SaddleNormal sn) {
    cps.push_back({v, h, idx, 1, c, sn});
  };
  add(0, 0.0, 0, Convexity::Convex, SaddleNormal::NA);
  add(1, 0.5, 0, Convexity::Convex, SaddleNormal::NA);
  add(2, 1.0, 1, Convexity::NA, SaddleNormal::Down);
  add(3, 1.5, 0, Convexity::Concave, SaddleNormal::NA);
  add(4, 2.0, 1, Convexity::NA, SaddleNormal::Up);
  add(5, 3.0, 1, Convexity::NA, SaddleNormal::Up);
  add(6, 3.5, 1, Convexity::NA, SaddleNormal::Up);
  add(7, 4.0, 2, Convexity::Convex, SaddleNormal::NA);
  add(8, 3.7, 1, Convexity::NA, SaddleNormal::Up);
  add(9, 4.2, 2, Convexity::Convex, SaddleNormal::NA);
  return cps;
}

}  // namespace fixtures

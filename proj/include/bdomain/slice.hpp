#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "bdomain/errors.hpp"
#include "bdomain/mesh.hpp"
#include "bdomain/morse.hpp"

namespace bdomain {

/// One closed polyline of a level set, with per-segment source triangles.
/// Oriented so that, viewed from +direction, the solid is on the left.
struct LevelCircle {
  std::vector<Vec3> points;
  std::vector<int> segment_triangle;  // triangle carrying points[i] -> points[i+1]
  std::vector<int> edges;             // crossed mesh edge ids, aligned with points
};

/// Horizontal slice: circles grouped into solid regions.  region_of[c] maps a
/// circle to its region; each region lists one outer circle plus holes.
struct CrossSection {
  double height = 0.0;
  std::vector<LevelCircle> circles;
  std::vector<int> region_of;
  int region_count = 0;
  std::vector<int> outer_circle;             // per region
  std::vector<std::vector<int>> region_holes;  // per region

  int weight(int region) const { return static_cast<int>(region_holes[region].size()); }
};

namespace detail {

// in-plane coordinates orthogonal to the sweep direction
struct PlaneBasis {
  Vec3 u, v, d;
  std::pair<double, double> project(const Vec3& p) const { return {dot(u, p), dot(v, p)}; }
};

inline PlaneBasis plane_basis(const Vec3& d) {
  Vec3 u = any_orthogonal(d);
  return {u, cross(d, u), d};
}

// even-odd crossing parity of point q against a set of polylines
inline bool point_inside(const std::vector<LevelCircle>& circles, const PlaneBasis& basis,
                         const std::pair<double, double>& q, int skip_circle) {
  bool inside = false;
  for (size_t c = 0; c < circles.size(); ++c) {
    if (static_cast<int>(c) == skip_circle) continue;
    const auto& pts = circles[c].points;
    size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
      auto [x1, y1] = basis.project(pts[i]);
      auto [x2, y2] = basis.project(pts[(i + 1) % n]);
      if ((y1 > q.second) != (y2 > q.second)) {
        double xc = x1 + (q.second - y1) / (y2 - y1) * (x2 - x1);
        if (xc > q.first) inside = !inside;
      }
    }
  }
  return inside;
}

inline bool circle_contains(const std::vector<LevelCircle>& circles, const PlaneBasis& basis,
                            int container, const std::pair<double, double>& q) {
  std::vector<LevelCircle> one{circles[container]};
  return point_inside(one, basis, q, -1);
}

// A point just inside the solid next to circle c: offset from the midpoint of
// the longest segment toward the solid side (left of travel seen from +d).
inline Vec3 solid_side_probe(const LevelCircle& c, const Vec3& d, double eps) {
  size_t best = 0;
  double best_len = -1.0;
  size_t n = c.points.size();
  for (size_t i = 0; i < n; ++i) {
    double len = norm(c.points[(i + 1) % n] - c.points[i]);
    if (len > best_len) {
      best_len = len;
      best = i;
    }
  }
  Vec3 mid = (c.points[best] + c.points[(best + 1) % n]) * 0.5;
  Vec3 tangent = normalized(c.points[(best + 1) % n] - c.points[best]);
  Vec3 left = normalized(cross(d, tangent));
  return mid + left * eps;
}

// group circles into solid regions by the containment signature of their
// solid-side probe points
inline void group_regions(CrossSection& cs, const PlaneBasis& basis, double eps) {
  int nc = static_cast<int>(cs.circles.size());
  cs.region_of.assign(nc, -1);

  std::vector<std::vector<int>> signature(nc);
  std::vector<char> outer(nc, 0);
  for (int c = 0; c < nc; ++c) {
    Vec3 probe3 = solid_side_probe(cs.circles[c], basis.d, eps);
    auto probe = basis.project(probe3);
    for (int o = 0; o < nc; ++o)
      if (o != c && circle_contains(cs.circles, basis, o, probe)) signature[c].push_back(o);
    if (circle_contains(cs.circles, basis, c, probe)) {
      outer[c] = 1;  // solid lies inside this circle: it is its region's outer boundary
      signature[c].push_back(c);
    }
    std::sort(signature[c].begin(), signature[c].end());
  }

  std::map<std::vector<int>, int> region_ids;
  for (int c = 0; c < nc; ++c) {
    auto [it, inserted] = region_ids.try_emplace(signature[c], cs.region_count);
    if (inserted) ++cs.region_count;
    cs.region_of[c] = it->second;
  }
  cs.outer_circle.assign(cs.region_count, -1);
  cs.region_holes.assign(cs.region_count, {});
  for (int c = 0; c < nc; ++c) {
    if (outer[c])
      cs.outer_circle[cs.region_of[c]] = c;
    else
      cs.region_holes[cs.region_of[c]].push_back(c);
  }
}

}  // namespace detail

/// All level circles of the surface at height z by a combinatorial walk over
/// crossed edges; `lower` decides which vertices count as below the cut.
/// Templated on the predicate so geometric and tie-broken cuts share the walk.
template <typename LowerPred>
std::vector<LevelCircle> walk_level_circles(const TriSurface& s, const EdgeTable& et,
                                            const LowerPred& lower,
                                            const std::function<Vec3(int, int)>& cut_point,
                                            const Vec3& direction) {
  std::vector<char> crossed(et.count(), 0);
  for (int e = 0; e < et.count(); ++e) {
    auto [a, b] = et.edge_verts[e];
    crossed[e] = lower(a) != lower(b);
  }
  std::vector<LevelCircle> circles;
  std::vector<char> used(et.count(), 0);

  auto other_cut_edge = [&](int tri, int edge) -> int {
    const auto& t = s.triangles[tri];
    for (int k = 0; k < 3; ++k) {
      int e = et.edge_id(t[k], t[(k + 1) % 3]);
      if (e != edge && crossed[e]) return e;
    }
    return -1;
  };

  for (int e0 = 0; e0 < et.count(); ++e0) {
    if (!crossed[e0] || used[e0]) continue;
    LevelCircle circle;
    // walk: orient the first step so the solid ends up on the left; derive
    // from the triangle whose lower vertex ordering matches
    int e = e0;
    int tri = et.edge_tri[e0].first;
    while (true) {
      used[e] = 1;
      auto [a, b] = et.edge_verts[e];
      circle.edges.push_back(e);
      circle.points.push_back(lower(a) ? cut_point(a, b) : cut_point(b, a));
      circle.segment_triangle.push_back(tri);
      int enext = other_cut_edge(tri, e);
      int tnext = et.edge_tri[enext].first == tri ? et.edge_tri[enext].second : et.edge_tri[enext].first;
      if (enext == e0) break;
      e = enext;
      tri = tnext;
    }
    // orientation: level tangent t with solid left means cross(d, t) points
    // into the solid, i.e. against the outward triangle normal
    Vec3 tangent = circle.points.size() > 1 ? circle.points[1] - circle.points[0]
                                            : Vec3{0, 0, 0};
    Vec3 n = s.triangle_normal(circle.segment_triangle[0]);
    if (dot(cross(direction, tangent), n) > 0) {
      std::reverse(circle.points.begin(), circle.points.end());
      std::reverse(circle.edges.begin(), circle.edges.end());
      std::reverse(circle.segment_triangle.begin(), circle.segment_triangle.end());
      // after reversal, segment i runs between former points (n-2-i, n-1-i)
      std::rotate(circle.segment_triangle.begin(), circle.segment_triangle.begin() + 1,
                  circle.segment_triangle.end());
    }
    circles.push_back(std::move(circle));
  }
  return circles;
}

/// Geometric cross-section at a regular height.  Throws CriticalHeight when z
/// is within 1e-9 * bbox of a critical value of the height function.
inline CrossSection cross_section(const TriSurface& s, const HeightFunction& h, double z,
                                  const std::vector<CriticalPoint>& cps) {
  double tol = 1e-9 * s.bounds().diagonal();
  for (const auto& cp : cps)
    if (std::abs(cp.height - z) <= tol)
      throw CriticalHeightError("height " + std::to_string(z) + " is within tolerance of critical value " +
                                std::to_string(cp.height) + " (vertex " + std::to_string(cp.vertex) + ")");

  EdgeTable et = build_edge_table(s);
  auto lower = [&](int v) { return h.value(s, v) < z; };
  auto cut_point = [&](int lo, int hi) -> Vec3 {
    double hlo = h.value(s, lo), hhi = h.value(s, hi);
    double t = (z - hlo) / (hhi - hlo);
    return s.vertices[lo] + (s.vertices[hi] - s.vertices[lo]) * t;
  };
  CrossSection cs;
  cs.height = z;
  cs.circles = walk_level_circles(s, et, lower, cut_point, h.direction);
  detail::PlaneBasis basis = detail::plane_basis(h.direction);
  detail::group_regions(cs, basis, 1e-7 * s.bounds().diagonal());
  return cs;
}

inline CrossSection cross_section(const TriSurface& s, const HeightFunction& h, double z) {
  return cross_section(s, h, z, critical_points(s, h));
}

}  // namespace bdomain

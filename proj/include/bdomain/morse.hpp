#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bdomain/errors.hpp"
#include "bdomain/mesh.hpp"
#include "bdomain/vec3.hpp"

namespace bdomain {

/// Height function <d, v> with lexicographic vertex-index tie-break
/// (simulation of simplicity): heights compare as pairs (value, vertex id).
struct HeightFunction {
  Vec3 direction{0, 0, 1};

  double value(const TriSurface& s, int v) const { return dot(direction, s.vertices[v]); }

  // strict total order on vertices
  bool below(const TriSurface& s, int a, int b) const {
    double ha = value(s, a), hb = value(s, b);
    if (ha != hb) return ha < hb;
    return a < b;
  }
};

inline HeightFunction make_height(const Vec3& d) {
  if (norm2(d) == 0.0) throw InvalidSpecError("height direction must be non-zero");
  return HeightFunction{normalized(d)};
}

enum class Convexity { Convex, Concave, NA };
enum class SaddleNormal { Up, Down, NA };

inline const char* to_string(Convexity c) {
  switch (c) {
    case Convexity::Convex: return "convex";
    case Convexity::Concave: return "concave";
    default: return "n/a";
  }
}
inline const char* to_string(SaddleNormal sn) {
  switch (sn) {
    case SaddleNormal::Up: return "up";
    case SaddleNormal::Down: return "down";
    default: return "n/a";
  }
}

struct CriticalPoint {
  int vertex = -1;
  double height = 0.0;
  int index = 0;              // 0 min, 1 saddle, 2 max
  int multiplicity = 1;       // m-1 for a lower link with m components
  Convexity convexity = Convexity::NA;
  SaddleNormal saddle_normal = SaddleNormal::NA;
};

/// Link cycles of every vertex, ordered by the surface orientation: triangle
/// (v,a,b) contributes the directed link edge a->b, and chaining these gives
/// one cycle per vertex of a closed oriented manifold.
struct VertexLinks {
  std::vector<std::vector<int>> cycle;  // per vertex, link vertices in cyclic order
  std::vector<Vec3> normal;             // angle-weighted vertex normals
};

inline VertexLinks build_links(const TriSurface& s) {
  int nv = s.vertex_count();
  VertexLinks links;
  links.cycle.resize(nv);
  links.normal.assign(nv, Vec3{0, 0, 0});

  std::vector<std::vector<std::pair<int, int>>> out(nv);  // per vertex: link edges a->b
  for (int t = 0; t < s.triangle_count(); ++t) {
    const auto& tri = s.triangles[t];
    Vec3 n = normalized(s.triangle_normal(t));
    for (int k = 0; k < 3; ++k) {
      int v = tri[k], a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      out[v].emplace_back(a, b);
      // angle of the triangle corner at v
      Vec3 ea = s.vertices[a] - s.vertices[v], eb = s.vertices[b] - s.vertices[v];
      double c = dot(ea, eb) / (norm(ea) * norm(eb));
      c = std::clamp(c, -1.0, 1.0);
      links.normal[v] += n * std::acos(c);
    }
  }
  for (int v = 0; v < nv; ++v) {
    auto& edges = out[v];
    if (edges.empty()) continue;
    // chain a->b directed edges into the cycle
    std::vector<std::pair<int, int>> rest = edges;
    std::vector<int>& cyc = links.cycle[v];
    cyc.push_back(rest.back().first);
    cyc.push_back(rest.back().second);
    rest.pop_back();
    while (!rest.empty()) {
      int tail = cyc.back();
      bool found = false;
      for (size_t i = 0; i < rest.size(); ++i) {
        if (rest[i].first == tail) {
          cyc.push_back(rest[i].second);
          rest[i] = rest.back();
          rest.pop_back();
          found = true;
          break;
        }
      }
      if (!found)
        throw NotOrientedError("link of vertex " + std::to_string(v) + " is not a single cycle");
    }
    if (cyc.front() != cyc.back())
      throw NotClosedError("link of vertex " + std::to_string(v) + " does not close");
    cyc.pop_back();
    links.normal[v] = normalized(links.normal[v]);
  }
  return links;
}

/// PL critical point classification by lower-link component count:
/// 0 components -> index 0, 1 -> regular, m >= 2 -> index-1 saddle of
/// multiplicity m-1; empty upper link -> index 2.  Convexity of extrema from
/// the sign of <vertex normal, direction>.
inline std::vector<CriticalPoint> critical_points(const TriSurface& s, const HeightFunction& h,
                                                  const VertexLinks& links, bool strict = false) {
  std::vector<CriticalPoint> result;
  int nv = s.vertex_count();
  for (int v = 0; v < nv; ++v) {
    const auto& cyc = links.cycle[v];
    int n = static_cast<int>(cyc.size());
    int lower_runs = 0, lower_count = 0;
    for (int i = 0; i < n; ++i) {
      bool lo = h.below(s, cyc[i], v);
      bool prev_lo = h.below(s, cyc[(i - 1 + n) % n], v);
      if (lo) {
        ++lower_count;
        if (!prev_lo) ++lower_runs;
      }
    }
    double nd = dot(links.normal[v], h.direction);
    if (lower_count == 0) {
      result.push_back({v, h.value(s, v), 0, 1, nd < 0 ? Convexity::Convex : Convexity::Concave,
                        SaddleNormal::NA});
    } else if (lower_count == n) {
      result.push_back({v, h.value(s, v), 2, 1, nd > 0 ? Convexity::Convex : Convexity::Concave,
                        SaddleNormal::NA});
    } else if (lower_runs >= 2) {
      if (strict && lower_runs > 2)
        throw NotMorseError("vertex " + std::to_string(v) + " is a saddle of multiplicity " +
                            std::to_string(lower_runs - 1));
      result.push_back({v, h.value(s, v), 1, lower_runs - 1, Convexity::NA,
                        nd > 0 ? SaddleNormal::Up : SaddleNormal::Down});
    }
  }
  std::sort(result.begin(), result.end(), [&](const CriticalPoint& a, const CriticalPoint& b) {
    return h.below(s, a.vertex, b.vertex);
  });
  return result;
}

inline std::vector<CriticalPoint> critical_points(const TriSurface& s, const HeightFunction& h,
                                                  bool strict = false) {
  VertexLinks links = build_links(s);
  return critical_points(s, h, links, strict);
}

/// True when every saddle is simple and all critical values are pairwise
/// distinct at tolerance `sep` (relative to the bbox diagonal).
inline bool is_morse(const TriSurface& s, const std::vector<CriticalPoint>& cps,
                     double rel_sep = 1e-9) {
  double sep = rel_sep * s.bounds().diagonal();
  for (const auto& cp : cps)
    if (cp.multiplicity > 1) return false;
  for (size_t i = 1; i < cps.size(); ++i)
    if (std::abs(cps[i].height - cps[i - 1].height) <= sep) return false;
  return true;
}

/// Rotates the direction by at most 1e-3 radians until the mesh is Morse for
/// it.  Deterministic given the seed; a fixpoint on already-Morse input.
inline HeightFunction perturb_to_morse(const TriSurface& s, const HeightFunction& h,
                                       uint64_t seed = 1) {
  VertexLinks links = build_links(s);
  auto cps = critical_points(s, h, links);
  if (is_morse(s, cps)) return h;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    double angle = 1e-3 * (0.1 + 0.9 * uni(rng));
    double phase = 2.0 * M_PI * uni(rng);
    Vec3 e1 = any_orthogonal(h.direction);
    Vec3 e2 = cross(h.direction, e1);
    Vec3 axis = e1 * std::cos(phase) + e2 * std::sin(phase);
    HeightFunction cand{normalized(rotate_about(h.direction, axis, angle))};
    auto c = critical_points(s, cand, links);
    if (is_morse(s, c)) return cand;
  }
  throw PerturbationFailedError("no Morse direction within 1e-3 radians after 100 attempts");
}

/// Sum over critical points of (-1)^index weighted by multiplicity; equals
/// the Euler characteristic of the surface for every direction.
inline int euler_from_critical_points(const std::vector<CriticalPoint>& cps) {
  int sum = 0;
  for (const auto& cp : cps) {
    if (cp.index == 1)
      sum -= cp.multiplicity;
    else
      sum += 1;
  }
  return sum;
}

}  // namespace bdomain

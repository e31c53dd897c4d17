#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "bdomain/implicit.hpp"
#include "bdomain/mesh.hpp"
#include "bdomain/vec3.hpp"

namespace bdomain {

enum class GenKind { Sphere, TorusHorizontal, TorusVerticalTilted, KnotTube, Genus2Pretzel };
enum class KnotName { Trefoil, Figure8 };

/// Parameters for the synthetic fixtures.  All generators are deterministic
/// functions of the spec.
struct GeneratorSpec {
  GenKind kind = GenKind::Sphere;
  double R = 2.0;        // major radius (tori) / sphere radius
  double r = 0.5;        // tube radius (tori)
  double rho = 0.12;     // tube radius (knot tubes)
  double tilt_deg = 5.0; // tilt of the vertical torus axis
  int res = 64;          // parameter-grid resolution
  KnotName knot = KnotName::Trefoil;
  int bridges = 2;       // bridge count k of the knot presentation
  int wiggles = 0;       // extra max/min pairs inserted into the core curve
};

inline const char* to_string(GenKind k) {
  switch (k) {
    case GenKind::Sphere: return "sphere";
    case GenKind::TorusHorizontal: return "torus-horizontal";
    case GenKind::TorusVerticalTilted: return "torus-vertical-tilted";
    case GenKind::KnotTube: return "knot-tube";
    case GenKind::Genus2Pretzel: return "genus2-pretzel";
  }
  return "?";
}

inline GenKind gen_kind_from_string(const std::string& s) {
  if (s == "sphere") return GenKind::Sphere;
  if (s == "torus-horizontal") return GenKind::TorusHorizontal;
  if (s == "torus-vertical-tilted") return GenKind::TorusVerticalTilted;
  if (s == "knot-tube") return GenKind::KnotTube;
  if (s == "genus2-pretzel") return GenKind::Genus2Pretzel;
  throw InvalidSpecError("unknown generator kind: " + s);
}

namespace detail {

constexpr double kPi = std::numbers::pi;

// Grid mesher for doubly periodic parameterizations.  The quad diagonal runs
// (i,j) -> (i+1,j+1), consistently, which keeps tie-broken links clean on
// near-degenerate rings.  Triangles are wound with normal along dj x di, so
// callers order the parameters to make that the outward direction.
inline TriSurface mesh_periodic_grid(int nu, int nv, const std::function<Vec3(int, int)>& p,
                                     const std::string& name) {
  TriSurface s;
  s.name = name;
  s.vertices.resize(static_cast<size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) s.vertices[static_cast<size_t>(i) * nv + j] = p(i, j);
  auto id = [&](int i, int j) { return ((i % nu + nu) % nu) * nv + ((j % nv + nv) % nv); };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      int a = id(i, j), b = id(i, j + 1), c = id(i + 1, j + 1), d = id(i + 1, j);
      s.triangles.push_back({a, b, c});
      s.triangles.push_back({a, c, d});
    }
  return s;
}

inline TriSurface make_sphere(double R, int res, const std::string& name) {
  int nlon = std::max(8, res);
  int nlat = std::max(4, res / 2);
  TriSurface s;
  s.name = name;
  s.vertices.push_back({0, 0, R});   // north pole
  for (int i = 1; i < nlat; ++i) {
    double phi = kPi * i / nlat;
    for (int j = 0; j < nlon; ++j) {
      double th = 2 * kPi * j / nlon;
      s.vertices.push_back({R * std::sin(phi) * std::cos(th), R * std::sin(phi) * std::sin(th),
                            R * std::cos(phi)});
    }
  }
  s.vertices.push_back({0, 0, -R});  // south pole
  int south = s.vertex_count() - 1;
  auto ring = [&](int i, int j) { return 1 + (i - 1) * nlon + ((j % nlon + nlon) % nlon); };
  for (int j = 0; j < nlon; ++j) s.triangles.push_back({0, ring(1, j), ring(1, j + 1)});
  for (int i = 1; i < nlat - 1; ++i)
    for (int j = 0; j < nlon; ++j) {
      int a = ring(i, j), b = ring(i, j + 1), c = ring(i + 1, j + 1), d = ring(i + 1, j);
      s.triangles.push_back({a, d, c});
      s.triangles.push_back({a, c, b});
    }
  for (int j = 0; j < nlon; ++j) s.triangles.push_back({south, ring(nlat - 1, j + 1), ring(nlat - 1, j)});
  return s;
}

// Torus of revolution about the x-axis: z extrema at +-(R+r), saddles at +-(R-r).
inline TriSurface make_torus_horizontal(double R, double r, int res, const std::string& name) {
  int nu = std::max(16, res - res % 4);  // multiple of 4 puts vertices at u = pi/2
  int nv = std::max(16, res - res % 2);
  return mesh_periodic_grid(nv, nu, [&](int i, int j) -> Vec3 {
    double u = 2 * kPi * j / nu;
    double v = 2 * kPi * i / nv;
    return {r * std::sin(v), (R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u)};
  }, name);
}

// Torus of revolution about the z-axis, tilted so the z-projection is Morse.
inline TriSurface make_torus_vertical_tilted(double R, double r, double tilt_rad, int res,
                                             const std::string& name) {
  int nu = std::max(16, res);
  int nv = std::max(16, res);
  double ca = std::cos(tilt_rad), sa = std::sin(tilt_rad);
  return mesh_periodic_grid(nv, nu, [&](int i, int j) -> Vec3 {
    double u = 2 * kPi * j / nu;
    double v = 2 * kPi * i / nv;
    Vec3 p{(R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u), r * std::sin(v)};
    return {p.x * ca + p.z * sa, p.y, -p.x * sa + p.z * ca};  // rotate about y
  }, name);
}

// ---- knot cores in bridge position -------------------------------------
//
// 2-bridge knots are built as 4-plats: four vertical strand slots, a braid
// word stacked in z, and semicircular caps pairing slots (0,1) and (2,3) at
// top and bottom.  Strands are strictly monotone in z inside the braid, so
// all z-extrema of the core sit on the caps: exactly k maxima and k minima.
//   trefoil      = plat of s2 s2 s2
//   figure-eight = plat of s2 s1' s2 s2       (continued fraction [1,1,2] = 5/3)

struct PlatLetter {
  int slot;      // crossing of strand slots (slot, slot+1), 0-based
  bool positive; // sign of the crossing
};

struct CoreCurve {
  std::vector<Vec3> points;  // closed; last connects to first
};

inline CoreCurve plat_core(const std::vector<PlatLetter>& word, int samples_per_segment,
                           int extra_wiggles) {
  const double slot_x[4] = {-1.5, -0.5, 0.5, 1.5};
  const double H = 1.1 * static_cast<int>(word.size());  // strands stay steep
  const double bump = 0.45;                               // crossing depth in y
  const int L = static_cast<int>(word.size());

  // strand slot occupancy through the word, top (index 0) to bottom (index L)
  std::vector<std::array<int, 4>> levels(L + 1);
  levels[0] = {0, 1, 2, 3};  // strand id == its top slot
  for (int i = 0; i < L; ++i) {
    levels[i + 1] = levels[i];
    std::swap(levels[i + 1][word[i].slot], levels[i + 1][word[i].slot + 1]);
  }

  // piecewise strand paths, sampled top-down
  auto level_z = [&](int lev) { return H - 2.0 * H * lev / std::max(1, L); };
  std::vector<std::vector<Vec3>> strand_path(4);
  for (int sid = 0; sid < 4; ++sid) {
    std::vector<Vec3>& path = strand_path[sid];
    for (int lev = 0; lev < L; ++lev) {
      int s0 = -1, s1 = -1;
      for (int k = 0; k < 4; ++k) {
        if (levels[lev][k] == sid) s0 = k;
        if (levels[lev + 1][k] == sid) s1 = k;
      }
      double z0 = level_z(lev), z1 = level_z(lev + 1);
      bool crossing = s0 != s1;
      bool over = false;
      if (crossing) {
        bool moves_right = s1 > s0;
        // positive crossing: the strand moving right passes in front (+y)
        over = word[lev].positive == moves_right;
      }
      for (int t = 0; t < samples_per_segment; ++t) {
        double a = static_cast<double>(t) / samples_per_segment;
        double ease = 0.5 - 0.5 * std::cos(kPi * a);  // zero slope at both ends
        double x = slot_x[s0] + (slot_x[s1] - slot_x[s0]) * ease;
        double sp = std::sin(kPi * a);
        double y = crossing ? (over ? bump : -bump) * sp * sp : 0.0;
        path.push_back({x, y, z0 + (z1 - z0) * a});
      }
    }
    int send = -1;
    for (int k = 0; k < 4; ++k)
      if (levels[L][k] == sid) send = k;
    path.push_back({slot_x[send], 0.0, level_z(L)});
  }

  // semicircular cap between two strand endpoints; heights staggered so all
  // critical values are distinct
  auto cap = [&](Vec3 a, Vec3 b, double height, int n, std::vector<Vec3>& out) {
    Vec3 mid = (a + b) * 0.5;
    double half = std::abs(b.x - a.x) * 0.5;
    for (int t = 1; t < n; ++t) {
      double th = kPi * t / n;
      double dir = (b.x > a.x) ? 1.0 : -1.0;
      out.push_back({mid.x - dir * half * std::cos(th), a.y,
                     a.z + height * std::sin(th)});
    }
  };

  // trace the closed curve: alternate strands (down), bottom caps, strands
  // (up), top caps, following the plat closure
  auto top_slot_of = [&](int sid) {
    for (int k = 0; k < 4; ++k)
      if (levels[0][k] == sid) return k;
    return -1;
  };
  auto bottom_slot_of = [&](int sid) {
    for (int k = 0; k < 4; ++k)
      if (levels[L][k] == sid) return k;
    return -1;
  };
  auto partner = [](int slot) { return slot ^ 1; };  // caps pair (0,1) and (2,3)

  CoreCurve core;
  std::vector<char> visited(4, 0);
  int cap_count = 0;
  int slot = 0;  // current top slot, about to descend
  const int cap_n = 2 * samples_per_segment;
  for (int step = 0; step < 8 && !(step > 0 && slot == 0); ++step) {
    int sid = levels[0][slot];
    if (visited[sid]) break;
    visited[sid] = 1;
    auto& path = strand_path[sid];
    core.points.insert(core.points.end(), path.begin(), path.end());
    int bslot = bottom_slot_of(sid);
    int bslot2 = partner(bslot);
    int sid_up = levels[L][bslot2];
    double h = 0.5 + 0.08 * (cap_count++);
    std::vector<Vec3> arc;
    Vec3 a = strand_path[sid].back();
    Vec3 b{slot_x[bslot2], 0.0, level_z(L)};
    cap(a, b, -h, cap_n, arc);  // bottom cap dips below
    core.points.insert(core.points.end(), arc.begin(), arc.end());
    // ascend: reversed path of sid_up
    visited[sid_up] = 1;
    auto up = strand_path[sid_up];
    core.points.insert(core.points.end(), up.rbegin(), up.rend());
    int tslot = top_slot_of(sid_up);
    int tslot2 = partner(tslot);
    double h2 = 0.5 + 0.08 * (cap_count++);
    arc.clear();
    Vec3 c{slot_x[tslot], 0.0, level_z(0)};
    Vec3 d{slot_x[tslot2], 0.0, level_z(0)};
    cap(c, d, h2, cap_n, arc);
    core.points.insert(core.points.end(), arc.begin(), arc.end());
    slot = tslot2;
  }

  bool all_visited = visited[0] && visited[1] && visited[2] && visited[3];
  if (!all_visited) throw InvalidSpecError("plat word closes into more than one component");

  // optional extra wiggles: each hooks one max/min pair into the first
  // strand's straight run (an off-bridge-position presentation).  The z bump
  // is steep enough to fold the strand back; the matching y bump keeps the
  // folded passes apart.
  if (extra_wiggles > 0) {
    double drop = 2.0 * H / std::max(1, L);
    double amp = 0.52 * drop * extra_wiggles;
    double dy = 0.5;
    int n0 = samples_per_segment;  // confine to the first braid segment
    for (int i = 0; i < n0 && i < static_cast<int>(core.points.size()); ++i) {
      double a = static_cast<double>(i) / n0;
      double sb = std::sin(kPi * extra_wiggles * a);
      core.points[i].z += amp * sb * sb;
      core.points[i].y += dy * sb * sb;
    }
  }
  return core;
}

// rotation minimizing frames via the double reflection method
inline void rmf_frames(const std::vector<Vec3>& pts, std::vector<Vec3>& tangents,
                       std::vector<Vec3>& normals) {
  int n = static_cast<int>(pts.size());
  tangents.resize(n);
  normals.resize(n);
  for (int i = 0; i < n; ++i)
    tangents[i] = normalized(pts[(i + 1) % n] - pts[(i - 1 + n) % n]);
  normals[0] = any_orthogonal(tangents[0]);
  for (int i = 0; i + 1 < n; ++i) {
    Vec3 v1 = pts[i + 1] - pts[i];
    double c1 = norm2(v1);
    Vec3 rl = normals[i] - v1 * (2.0 / c1 * dot(v1, normals[i]));
    Vec3 tl = tangents[i] - v1 * (2.0 / c1 * dot(v1, tangents[i]));
    Vec3 v2 = tangents[i + 1] - tl;
    double c2 = norm2(v2);
    normals[i + 1] = c2 > 1e-300 ? rl - v2 * (2.0 / c2 * dot(v2, rl)) : rl;
    normals[i + 1] = normalized(normals[i + 1] - tangents[i + 1] * dot(tangents[i + 1], normals[i + 1]));
  }
}

inline TriSurface tube_around(const CoreCurve& core, double rho, int ring_res,
                              const std::string& name) {
  const auto& pts = core.points;
  int n = static_cast<int>(pts.size());
  std::vector<Vec3> t, nrm;
  rmf_frames(pts, t, nrm);

  // closing twist: angle between the transported normal after a full loop
  // and the starting normal, measured around the tangent
  Vec3 v1 = pts[0] - pts[n - 1];
  double c1 = norm2(v1);
  Vec3 rl = nrm[n - 1] - v1 * (2.0 / c1 * dot(v1, nrm[n - 1]));
  Vec3 tl = t[n - 1] - v1 * (2.0 / c1 * dot(v1, t[n - 1]));
  Vec3 v2 = t[0] - tl;
  double c2 = norm2(v2);
  Vec3 n_end = c2 > 1e-300 ? rl - v2 * (2.0 / c2 * dot(v2, rl)) : rl;
  n_end = normalized(n_end - t[0] * dot(t[0], n_end));
  Vec3 b0 = cross(t[0], nrm[0]);
  double defect = std::atan2(dot(n_end, b0), dot(n_end, nrm[0]));

  return mesh_periodic_grid(n, ring_res, [&](int i, int j) -> Vec3 {
    double twist = -defect * i / n;
    double th = 2 * kPi * j / ring_res + twist;
    Vec3 b = cross(t[i], nrm[i]);
    return pts[i] + (nrm[i] * std::cos(th) + b * std::sin(th)) * rho;
  }, name);
}

// minimum distance between non-neighboring core samples (embeddedness guard)
inline double core_self_distance(const std::vector<Vec3>& pts) {
  int n = static_cast<int>(pts.size());
  int guard = std::max(4, n / 24);
  double best = 1e300;
  for (int i = 0; i < n; ++i)
    for (int j = i + guard; j < n; ++j) {
      if (i + n - j < guard) continue;  // cyclic neighbors
      best = std::min(best, norm(pts[i] - pts[j]));
    }
  return best;
}

inline TriSurface make_knot_tube(const GeneratorSpec& spec, const std::string& name) {
  std::vector<PlatLetter> word;
  if (spec.knot == KnotName::Trefoil) {
    word = {{1, true}, {1, true}, {1, true}};
  } else {
    word = {{1, true}, {0, false}, {1, true}, {1, true}};
  }
  if (spec.bridges != 2)
    throw InvalidSpecError("built-in knots are 2-bridge; got bridges=" + std::to_string(spec.bridges));
  int seg = std::max(16, spec.res / 2);
  CoreCurve core = plat_core(word, seg, spec.wiggles);
  double reach = core_self_distance(core.points);
  if (spec.rho >= 0.5 * reach)
    throw InvalidSpecError("tube radius " + std::to_string(spec.rho) +
                           " too large for core reach " + std::to_string(reach));
  int ring = std::max(12, spec.res / 2);
  return tube_around(core, spec.rho, ring, name);
}

inline TriSurface make_pretzel(int res, const std::string& name) {
  // tube around the lemniscate (x^2+y^2)^2 = x^2 - y^2; regular neighborhood
  // of a figure-eight graph, genus 2
  auto g = [](double x, double y) {
    double q = x * x + y * y;
    return q * q - (x * x - y * y);
  };
  const double rho_g = 0.18, h = 0.22;
  auto f = [&](const Vec3& p) {
    double gv = g(p.x, p.y) / rho_g;
    double zv = p.z / h;
    return gv * gv + zv * zv - 1.0;
  };
  int nx = std::max(32, res * 7 / 4), ny = std::max(24, res), nz = std::max(12, res / 2);
  ImplicitMesher mesher({-1.35, -0.75, -0.33}, {1.35, 0.75, 0.33}, nx, ny, nz);
  return mesher.extract(f, name);
}

}  // namespace detail

/// Deterministically builds the surface described by the spec.
inline TriSurface generate(const GeneratorSpec& spec) {
  if (spec.res < 8) throw InvalidSpecError("resolution too small: " + std::to_string(spec.res));
  std::string name = to_string(spec.kind);
  TriSurface s;
  switch (spec.kind) {
    case GenKind::Sphere:
      if (spec.R <= 0) throw InvalidSpecError("sphere radius must be positive");
      s = detail::make_sphere(spec.R, spec.res, name);
      break;
    case GenKind::TorusHorizontal:
      if (!(spec.r < spec.R) || spec.r <= 0)
        throw InvalidSpecError("torus requires 0 < r < R");
      s = detail::make_torus_horizontal(spec.R, spec.r, spec.res, name);
      break;
    case GenKind::TorusVerticalTilted:
      if (!(spec.r < spec.R) || spec.r <= 0)
        throw InvalidSpecError("torus requires 0 < r < R");
      s = detail::make_torus_vertical_tilted(spec.R, spec.r, spec.tilt_deg * detail::kPi / 180.0,
                                             spec.res, name);
      break;
    case GenKind::KnotTube:
      s = detail::make_knot_tube(spec, spec.knot == KnotName::Trefoil ? "trefoil-tube" : "figure8-tube");
      break;
    case GenKind::Genus2Pretzel:
      s = detail::make_pretzel(spec.res, name);
      break;
  }
  validate_surface(s);
  return s;
}

}  // namespace bdomain

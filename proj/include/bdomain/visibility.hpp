#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bdomain/classify.hpp"
#include "bdomain/errors.hpp"
#include "bdomain/mesh.hpp"
#include "bdomain/wirg.hpp"

namespace bdomain {

namespace raydetail {

/// Watertight ray/triangle intersection (shear-transform formulation).
/// Returns the hit parameter t > 0, or nothing.
struct WatertightRay {
  Vec3 org;
  int kx, ky, kz;
  double sx, sy, sz;

  WatertightRay(const Vec3& origin, const Vec3& dir) : org(origin) {
    double ax = std::abs(dir.x), ay = std::abs(dir.y), az = std::abs(dir.z);
    kz = az >= ax && az >= ay ? 2 : (ay >= ax ? 1 : 0);
    kx = (kz + 1) % 3;
    ky = (kx + 1) % 3;
    if (dir[kz] < 0.0) std::swap(kx, ky);
    sx = dir[kx] / dir[kz];
    sy = dir[ky] / dir[kz];
    sz = 1.0 / dir[kz];
  }

  std::optional<double> hit(const Vec3& va, const Vec3& vb, const Vec3& vc) const {
    Vec3 a = va - org, b = vb - org, c = vc - org;
    double ax = a[kx] - sx * a[kz], ay = a[ky] - sy * a[kz];
    double bx = b[kx] - sx * b[kz], by = b[ky] - sy * b[kz];
    double cx = c[kx] - sx * c[kz], cy = c[ky] - sy * c[kz];
    double u = cx * by - cy * bx;
    double v = ax * cy - ay * cx;
    double w = bx * ay - by * ax;
    if ((u < 0 || v < 0 || w < 0) && (u > 0 || v > 0 || w > 0)) return std::nullopt;
    double det = u + v + w;
    if (det == 0.0) return std::nullopt;
    double az = sz * a[kz], bz = sz * b[kz], cz = sz * c[kz];
    double t = (u * az + v * bz + w * cz) / det;
    if (t <= 0.0) return std::nullopt;
    return t;
  }
};

/// Independent second opinion for witness verification.
inline std::optional<double> moller_trumbore(const Vec3& org, const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c) {
  constexpr double kEps = 1e-12;
  Vec3 e1 = b - a, e2 = c - a;
  Vec3 p = cross(dir, e2);
  double det = dot(e1, p);
  if (std::abs(det) < kEps) return std::nullopt;
  double inv = 1.0 / det;
  Vec3 tv = org - a;
  double u = dot(tv, p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  Vec3 q = cross(tv, e1);
  double v = dot(dir, q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  double t = dot(e2, q) * inv;
  if (t <= 0.0) return std::nullopt;
  return t;
}

struct BvhNode {
  Aabb box;
  int left = -1, right = -1;  // children, or
  int first = 0, count = 0;   // leaf triangle range
};

}  // namespace raydetail

/// Median-split BVH for any-hit queries against a triangle surface.
class RayCaster {
 public:
  explicit RayCaster(const TriSurface& s) : s_(s) {
    int n = s.triangle_count();
    order_.resize(n);
    std::vector<Vec3> centroid(n);
    std::vector<Aabb> boxes(n);
    for (int t = 0; t < n; ++t) {
      order_[t] = t;
      const auto& tr = s.triangles[t];
      for (int k = 0; k < 3; ++k) boxes[t].expand(s.vertices[tr[k]]);
      centroid[t] = boxes[t].center();
    }
    nodes_.reserve(2 * n);
    build(0, n, centroid, boxes);
  }

  /// True when the ray from `org` along `dir` meets the surface at any t > 0.
  bool any_hit(const Vec3& org, const Vec3& dir) const {
    raydetail::WatertightRay ray(org, dir);
    Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const auto& node = nodes_[stack.back()];
      stack.pop_back();
      if (!box_hit(node.box, org, inv)) continue;
      if (node.count > 0) {
        for (int i = node.first; i < node.first + node.count; ++i) {
          const auto& tr = s_.triangles[order_[i]];
          if (ray.hit(s_.vertices[tr[0]], s_.vertices[tr[1]], s_.vertices[tr[2]])) return true;
        }
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
    return false;
  }

  /// Brute-force check with the independent intersector.
  bool any_hit_brute(const Vec3& org, const Vec3& dir) const {
    for (const auto& tr : s_.triangles)
      if (raydetail::moller_trumbore(org, dir, s_.vertices[tr[0]], s_.vertices[tr[1]],
                                     s_.vertices[tr[2]]))
        return true;
    return false;
  }

 private:
  int build(int first, int count, std::vector<Vec3>& centroid, std::vector<Aabb>& boxes) {
    int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Aabb box;
    for (int i = first; i < first + count; ++i) box.expand(boxes[order_[i]]);
    nodes_[id].box = box;
    if (count <= 4) {
      nodes_[id].first = first;
      nodes_[id].count = count;
      return id;
    }
    Vec3 ext = box.extent();
    int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    std::nth_element(order_.begin() + first, order_.begin() + first + count / 2,
                     order_.begin() + first + count,
                     [&](int a, int b) { return centroid[a][axis] < centroid[b][axis]; });
    int mid = count / 2;
    int left = build(first, mid, centroid, boxes);
    int right = build(first + mid, count - mid, centroid, boxes);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  static bool box_hit(const Aabb& b, const Vec3& org, const Vec3& inv) {
    double t0 = 0.0, t1 = 1e300;
    for (int k = 0; k < 3; ++k) {
      double lo = (b.lo[k] - org[k]) * inv[k];
      double hi = (b.hi[k] - org[k]) * inv[k];
      if (inv[k] < 0) std::swap(lo, hi);
      t0 = std::max(t0, lo);
      t1 = std::min(t1, hi);
    }
    return t0 <= t1;
  }

  const TriSurface& s_;
  std::vector<int> order_;
  std::vector<raydetail::BvhNode> nodes_;
};

// ---- visibility sampling ---------------------------------------------------

enum class PointStatus { Visible, Unknown };

struct SampledPoint {
  Vec3 point;
  PointStatus status = PointStatus::Unknown;
  Vec3 witness{0, 0, 0};  // ray direction when visible
  int rays_used = 0;
};

struct VisibilityReport {
  std::vector<SampledPoint> points;
  double visible_fraction = 0.0;
  long rays_used = 0;
};

namespace raydetail {

inline int thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BDOMAIN_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return static_cast<int>(hw);
}

template <typename Fn>
void parallel_for(int n, Fn fn) {
  int threads = std::min(thread_budget(), std::max(1, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

// Fibonacci sphere directions, pole first, rotated so the pole is `axis`.
inline std::vector<Vec3> stratified_directions(int count, const Vec3& axis) {
  std::vector<Vec3> dirs;
  dirs.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Vec3 pole{0, 0, 1};
  Vec3 rot_axis = cross(pole, axis);
  double rn = norm(rot_axis);
  double angle = std::atan2(rn, dot(pole, axis));
  rot_axis = rn > 1e-12 ? rot_axis / rn : Vec3{1, 0, 0};
  for (int i = 0; i < count; ++i) {
    double z = count == 1 ? 1.0 : 1.0 - 2.0 * i / (count - 1 + 1e-9);
    z = std::clamp(z, -1.0, 1.0);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = golden * i;
    Vec3 d{r * std::cos(th), r * std::sin(th), z};
    dirs.push_back(rotate_about(d, rot_axis, angle));
  }
  return dirs;
}

}  // namespace raydetail

/// Casts stratified rays from boundary points offset outward by
/// 1e-6 * bbox.  A point is Visible only when some ray misses the whole
/// surface under both intersection routines; otherwise Unknown — absence of
/// a witness within the budget is never treated as proof of invisibility.
inline VisibilityReport sample_visibility_at(const TriSurface& s,
                                             const std::vector<std::pair<Vec3, Vec3>>& point_normals,
                                             int rays_per_point) {
  RayCaster caster(s);
  double eps = 1e-6 * s.bounds().diagonal();
  VisibilityReport rep;
  rep.points.resize(point_normals.size());
  std::atomic<long> total_rays{0};

  raydetail::parallel_for(static_cast<int>(point_normals.size()), [&](int i) {
    const auto& [p, n] = point_normals[i];
    SampledPoint sp;
    sp.point = p;
    Vec3 org = p + n * eps;
    auto dirs = raydetail::stratified_directions(rays_per_point, n);
    for (const auto& d : dirs) {
      ++sp.rays_used;
      if (caster.any_hit(org, d)) continue;
      if (caster.any_hit_brute(org, d)) continue;  // cross-check the witness
      sp.status = PointStatus::Visible;
      sp.witness = d;
      break;
    }
    total_rays += sp.rays_used;
    rep.points[i] = sp;
  });

  rep.rays_used = total_rays;
  int visible = 0;
  for (const auto& sp : rep.points) visible += sp.status == PointStatus::Visible;
  rep.visible_fraction = rep.points.empty() ? 0.0 : static_cast<double>(visible) / rep.points.size();
  return rep;
}

/// Area-weighted random boundary samples.
inline VisibilityReport sample_visibility(const TriSurface& s, int samples, int rays_per_point,
                                          uint64_t seed) {
  if (samples < 1) throw InvalidSpecError("need at least one sample");
  std::vector<double> cumulative(s.triangle_count());
  double total = 0.0;
  for (int t = 0; t < s.triangle_count(); ++t) {
    total += 0.5 * norm(s.triangle_normal(t));
    cumulative[t] = total;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::pair<Vec3, Vec3>> pts;
  pts.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double pick = uni(rng) * total;
    int t = static_cast<int>(std::lower_bound(cumulative.begin(), cumulative.end(), pick) -
                             cumulative.begin());
    t = std::min(t, s.triangle_count() - 1);
    double u = uni(rng), v = uni(rng);
    double su = std::sqrt(u);
    double b0 = 1 - su, b1 = su * (1 - v), b2 = su * v;
    const auto& tr = s.triangles[t];
    Vec3 p = s.vertices[tr[0]] * b0 + s.vertices[tr[1]] * b1 + s.vertices[tr[2]] * b2;
    pts.emplace_back(p, normalized(s.triangle_normal(t)));
  }
  return sample_visibility_at(s, pts, rays_per_point);
}

inline nlohmann::json visibility_to_json(const VisibilityReport& rep) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& sp : rep.points) {
    nlohmann::json j;
    j["point"] = {sp.point.x, sp.point.y, sp.point.z};
    j["status"] = sp.status == PointStatus::Visible ? "visible" : "unknown";
    if (sp.status == PointStatus::Visible)
      j["witness"] = {sp.witness.x, sp.witness.y, sp.witness.z};
    j["rays"] = sp.rays_used;
    pts.push_back(j);
  }
  return nlohmann::json{{"points", pts},
                        {"visible_fraction", rep.visible_fraction},
                        {"rays_used", rep.rays_used}};
}

inline std::string visibility_to_ply(const TriSurface& s, const VisibilityReport& rep) {
  std::ostringstream os;
  os << "ply\nformat ascii 1.0\nelement vertex " << rep.points.size()
     << "\nproperty float x\nproperty float y\nproperty float z\n"
        "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  (void)s;
  for (const auto& sp : rep.points) {
    bool vis = sp.status == PointStatus::Visible;
    os << sp.point.x << " " << sp.point.y << " " << sp.point.z << " " << (vis ? "64 192 64" : "208 64 64")
       << "\n";
  }
  return os.str();
}

// ---- the basin automaton ---------------------------------------------------

/// Marks the automaton needs beyond the WIRG itself, keyed by node id.
struct BasinMarks {
  // trivalent merge: does the other incoming region arrive inside the basin?
  std::map<std::string, bool> arrival_interior;
  // as above but per walked lower edge (pipeline marks); takes precedence
  std::map<std::string, std::map<std::string, bool>> arrival_interior_by_edge;
  // trivalent split: WIRG edge id that keeps the basin
  std::map<std::string, std::string> split_continuation;
  // concave index-2 cap: does it cap an interior circle of the basin?
  std::map<std::string, bool> cap_interior;
};

enum class BasinOutcome { InvisibleWitness, CancellablePair, Continues, SphereAnomaly };

inline const char* to_string(BasinOutcome o) {
  switch (o) {
    case BasinOutcome::InvisibleWitness: return "invisible-witness";
    case BasinOutcome::CancellablePair: return "cancellable-pair";
    case BasinOutcome::Continues: return "continues";
    case BasinOutcome::SphereAnomaly: return "sphere-anomaly";
  }
  return "?";
}

struct BasinVerdict {
  std::string concave_min;
  std::vector<std::string> case_sequence;
  BasinOutcome outcome = BasinOutcome::Continues;
  std::string witness_node;  // the point that cannot be seen, or the pair partner
};

/// Replays the level-set case analysis upward from every concave index-0
/// node: (1) interior pinch -> invisible witness, (2) exterior pinch ->
/// grow and continue, (3) exterior arrival -> cancellable pair, (4)
/// interior arrival -> the inner convex minimum is invisible, (5) exterior
/// cap -> sphere anomaly, (6) interior cap -> cancellable pair.
inline std::vector<BasinVerdict> basin_analysis(const Wirg& g, const BasinMarks& marks = {}) {
  {
    auto v = validate(g);
    if (!v.empty())
      throw InvalidWirgError("basin analysis needs a valid graph: " + v[0].rule + " at " + v[0].subject);
  }
  std::vector<BasinVerdict> out;
  int guard = 4 * static_cast<int>(g.edges.size()) + 8;

  // lowest index-0 node reachable downward (the convex minimum of an island)
  auto lowest_min_below = [&](const std::string& node) {
    std::string cur = node;
    while (true) {
      auto below = g.edges_below(cur);
      if (below.empty()) return cur;
      const WirgEdge* next = below[0];
      for (const auto* e : below)
        if (g.node(e->lower)->height < g.node(next->lower)->height) next = e;
      cur = next->lower;
    }
  };

  for (const auto& start : g.nodes) {
    if (!(start.index && *start.index == 0 && start.convexity == Convexity::Concave)) continue;
    BasinVerdict verdict;
    verdict.concave_min = start.id;
    auto above = g.edges_above(start.id);
    const WirgEdge* edge = above.empty() ? nullptr : above[0];

    for (int step = 0; step < guard && edge; ++step) {
      const WirgNode& n = *g.node(edge->upper);
      auto below = g.edges_below(n.id);
      auto up = g.edges_above(n.id);

      if (below.size() == 1 && up.size() == 1) {  // bivalent event
        bool up_step = up[0]->weight == below[0]->weight + 1;
        if (n.index && *n.index == 1) {
          if (up_step && n.saddle_normal == SaddleNormal::Down) {
            verdict.case_sequence.push_back("(1)");
            verdict.outcome = BasinOutcome::InvisibleWitness;
            verdict.witness_node = n.id;
            break;
          }
          if (up_step && n.saddle_normal == SaddleNormal::Up) {
            verdict.case_sequence.push_back("(2)");
            edge = up[0];
            continue;
          }
          if (!up_step && n.saddle_normal == SaddleNormal::Up) {
            // the basin's outer boundary meets the region's outer circle
            verdict.case_sequence.push_back("(3)");
            verdict.outcome = BasinOutcome::CancellablePair;
            verdict.witness_node = n.id;
            break;
          }
          if (n.saddle_normal == SaddleNormal::NA)
            throw MissingMarksError("saddle " + n.id + " has no normal mark");
          // down-step with downward normal: holes of the same region merge
          verdict.case_sequence.push_back("(pass)");
          edge = up[0];
          continue;
        }
        if (n.index && *n.index == 2) {
          bool interior;
          auto it = marks.cap_interior.find(n.id);
          if (it != marks.cap_interior.end())
            interior = it->second;
          else if (below[0]->weight == 1)
            interior = false;  // the only hole is the basin: its cap closes a sphere
          else
            throw MissingMarksError("cap " + n.id + " needs an interior/exterior mark");
          if (interior) {
            verdict.case_sequence.push_back("(6)");
            verdict.outcome = BasinOutcome::CancellablePair;
            verdict.witness_node = n.id;
          } else {
            verdict.case_sequence.push_back("(5)");
            verdict.outcome = BasinOutcome::SphereAnomaly;
            verdict.witness_node = n.id;
          }
          break;
        }
        // a drive-by event on this region (another hole born elsewhere)
        verdict.case_sequence.push_back("(pass)");
        edge = up[0];
        continue;
      }

      if (below.size() == 2 && up.size() == 1) {  // trivalent merge
        const WirgEdge* other = below[0]->id == edge->id ? below[1] : below[0];
        std::optional<bool> interior;
        auto byedge = marks.arrival_interior_by_edge.find(n.id);
        if (byedge != marks.arrival_interior_by_edge.end()) {
          auto jt = byedge->second.find(edge->id);
          if (jt != byedge->second.end()) interior = jt->second;
        }
        if (!interior) {
          auto it0 = marks.arrival_interior.find(n.id);
          if (it0 != marks.arrival_interior.end()) interior = it0->second;
        }
        if (!interior) throw MissingMarksError("merge " + n.id + " needs an arrival mark");
        if (*interior) {
          verdict.case_sequence.push_back("(4)");
          verdict.outcome = BasinOutcome::InvisibleWitness;
          verdict.witness_node = lowest_min_below(other->lower);
        } else {
          verdict.case_sequence.push_back("(3)");
          verdict.outcome = BasinOutcome::CancellablePair;
          verdict.witness_node = n.id;
        }
        break;
      }

      if (below.size() == 1 && up.size() == 2) {  // trivalent split
        const WirgEdge* next = nullptr;
        auto it = marks.split_continuation.find(n.id);
        if (it != marks.split_continuation.end()) {
          next = up[0]->id == it->second ? up[0] : up[1];
        } else if ((up[0]->weight >= 1) != (up[1]->weight >= 1)) {
          next = up[0]->weight >= 1 ? up[0] : up[1];  // the basin hole follows the weight
        } else {
          throw MissingMarksError("split " + n.id + " needs a continuation mark");
        }
        verdict.case_sequence.push_back("(2)");
        edge = next;
        continue;
      }

      break;  // degree-1 top or malformed: stop conservatively
    }
    out.push_back(std::move(verdict));
  }
  return out;
}

/// Folds the geometric report and the combinatorial basin verdicts into the
/// one conditional statement the pipeline emits.
inline std::string visibility_verdict(const ClassificationReport& report,
                                      const std::vector<BasinVerdict>& basins) {
  bool invisible = false, cancellable = false;
  for (const auto& b : basins) {
    invisible |= b.outcome == BasinOutcome::InvisibleWitness;
    cancellable |= b.outcome == BasinOutcome::CancellablePair ||
                   b.outcome == BasinOutcome::SphereAnomaly;
  }
  if (invisible)
    return "under minNCP: not isotopically visible (invisible-witness found at minimal critical count)";
  if (cancellable) return "reducible — rerun after simplify (cancellable pairs present)";
  (void)report;
  return "handlebody — visibility unobstructed at Reeb level";
}

}  // namespace bdomain

#pragma once

// Brute-force dense-slicing oracle for the solid Reeb structure.  Written
// independently of the library's sweep/slice code paths: its own slicer, its
// own winding-number containment, its own region adjacency.  Used to verify
// solid_reeb up to edge subdivision.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "bdomain/mesh.hpp"
#include "bdomain/morse.hpp"
#include "bdomain/wirg.hpp"

namespace oracle {

using bdomain::HeightFunction;
using bdomain::TriSurface;
using bdomain::Vec3;

struct OracleGraph {
  struct Node {
    double h;
    bool event;  // inserted on a weight-change adjacency
  };
  struct Edge {
    int lower, upper, weight;
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

namespace detail {

struct Slice {
  double z;
  // circle id per crossed mesh edge (key: sorted vertex pair)
  std::map<std::pair<int, int>, int> circle_of_edge;
  int circle_count = 0;
  std::vector<std::vector<Vec3>> circle_points;  // unordered samples per circle
  std::vector<int> region_of;                    // per circle
  int region_count = 0;
  std::vector<int> region_weight;
};

// winding angle of polygon (ordered!) around point; our circle points are
// unordered, so containment instead uses ray parity against segments
struct Seg {
  double x1, y1, x2, y2;
};

inline bool parity_inside(const std::vector<Seg>& segs, double px, double py) {
  bool in = false;
  for (const auto& s : segs) {
    if ((s.y1 > py) != (s.y2 > py)) {
      double xc = s.x1 + (py - s.y1) / (s.y2 - s.y1) * (s.x2 - s.x1);
      if (xc > px) in = !in;
    }
  }
  return in;
}

}  // namespace detail

inline OracleGraph dense_slicing_reeb(const TriSurface& s, const HeightFunction& h, int min_slabs) {
  using detail::Seg;
  using detail::Slice;

  Vec3 d = h.direction;
  Vec3 u{0, 0, 0};
  u = std::abs(d.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = bdomain::normalized(bdomain::cross(d, u));
  Vec3 e2 = bdomain::cross(d, e1);

  std::vector<double> hv(s.vertex_count());
  double hmin = 1e300, hmax = -1e300;
  for (int v = 0; v < s.vertex_count(); ++v) {
    hv[v] = bdomain::dot(d, s.vertices[v]);
    hmin = std::min(hmin, hv[v]);
    hmax = std::max(hmax, hv[v]);
  }

  auto cps = bdomain::critical_points(s, h);
  std::vector<double> crit;
  for (const auto& cp : cps) crit.push_back(cp.height);

  // slice heights: even grid plus two interior slices per critical gap (so
  // every Reeb edge shows up as at least one plain region), nudged off
  // vertex heights
  std::set<double> zs;
  for (int i = 1; i < min_slabs; ++i) zs.insert(hmin + (hmax - hmin) * i / min_slabs);
  for (size_t i = 0; i + 1 < crit.size(); ++i) {
    zs.insert(crit[i] + (crit[i + 1] - crit[i]) / 3.0);
    zs.insert(crit[i] + 2.0 * (crit[i + 1] - crit[i]) / 3.0);
  }
  std::vector<double> sorted_hv = hv;
  std::sort(sorted_hv.begin(), sorted_hv.end());
  double tol = 1e-9 * (hmax - hmin);
  std::vector<double> heights;
  for (double z : zs) {
    auto near = [&](double y) {
      auto it = std::lower_bound(sorted_hv.begin(), sorted_hv.end(), y - tol);
      return it != sorted_hv.end() && *it <= y + tol;
    };
    while (near(z)) z += 3 * tol;
    if (z > hmin && z < hmax) heights.push_back(z);
  }
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

  // ---- per-slice circles and regions -----------------------------------
  std::vector<Slice> slices;
  slices.reserve(heights.size());
  for (double z : heights) {
    Slice sl;
    sl.z = z;
    // crossed edges and their union-find through triangles
    std::map<std::pair<int, int>, int> uf_id;
    std::vector<int> uf;
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    auto edge_key = [&](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    auto cut = [&](int a, int b) -> Vec3 {
      double t = (z - hv[a]) / (hv[b] - hv[a]);
      return s.vertices[a] + (s.vertices[b] - s.vertices[a]) * t;
    };
    std::vector<Vec3> pt_of;
    auto touch = [&](int a, int b) -> int {
      auto key = edge_key(a, b);
      auto [it, inserted] = uf_id.try_emplace(key, static_cast<int>(uf.size()));
      if (inserted) {
        uf.push_back(it->second);
        pt_of.push_back(cut(a, b));
      }
      return it->second;
    };
    std::vector<std::array<int, 2>> tri_segments;  // uf ids per triangle
    for (const auto& tri : s.triangles) {
      int ids[3] = {tri[0], tri[1], tri[2]};
      std::vector<int> cutids;
      for (int k = 0; k < 3; ++k) {
        int a = ids[k], b = ids[(k + 1) % 3];
        if ((hv[a] < z) != (hv[b] < z)) cutids.push_back(touch(a, b));
      }
      if (cutids.size() == 2) {
        uf[find(cutids[0])] = find(cutids[1]);
        tri_segments.push_back({cutids[0], cutids[1]});
      }
    }
    std::map<int, int> root_circle;
    for (const auto& [key, id] : uf_id) {
      int root = find(id);
      auto [it, inserted] = root_circle.try_emplace(root, sl.circle_count);
      if (inserted) {
        ++sl.circle_count;
        sl.circle_points.emplace_back();
      }
      sl.circle_of_edge[key] = it->second;
      sl.circle_points[it->second].push_back(pt_of[id]);
    }

    // region grouping: probe on the solid side of each circle, signature =
    // set of circles containing the probe
    std::vector<std::vector<Seg>> circle_segs(sl.circle_count);
    for (const auto& seg : tri_segments) {
      int c = root_circle[find(seg[0])];
      Vec3 p = pt_of[seg[0]], q = pt_of[seg[1]];
      circle_segs[c].push_back(
          {bdomain::dot(e1, p), bdomain::dot(e2, p), bdomain::dot(e1, q), bdomain::dot(e2, q)});
    }
    auto inside_circle = [&](int c, double px, double py) {
      return detail::parity_inside(circle_segs[c], px, py);
    };
    double eps = 2e-7 * (hmax - hmin);
    std::map<std::vector<int>, int> region_ids;
    sl.region_of.assign(sl.circle_count, -1);
    std::vector<char> outer(sl.circle_count, 0);
    for (int c = 0; c < sl.circle_count; ++c) {
      // longest segment of this circle, offset both ways; pick the side with
      // odd total parity (inside the solid)
      const Seg* best = nullptr;
      double best_len = -1;
      for (const auto& sg : circle_segs[c]) {
        double len = std::hypot(sg.x2 - sg.x1, sg.y2 - sg.y1);
        if (len > best_len) {
          best_len = len;
          best = &sg;
        }
      }
      double mx = 0.5 * (best->x1 + best->x2), my = 0.5 * (best->y1 + best->y2);
      double nx = -(best->y2 - best->y1) / best_len, ny = (best->x2 - best->x1) / best_len;
      double candx[2] = {mx + nx * eps, mx - nx * eps};
      double candy[2] = {my + ny * eps, my - ny * eps};
      int side = 0;
      for (int sdi = 0; sdi < 2; ++sdi) {
        int par = 0;
        for (int o = 0; o < sl.circle_count; ++o)
          if (inside_circle(o, candx[sdi], candy[sdi])) ++par;
        if (par % 2 == 1) {
          side = sdi;
          break;
        }
      }
      double px = candx[side], py = candy[side];
      std::vector<int> sig;
      for (int o = 0; o < sl.circle_count; ++o)
        if (inside_circle(o, px, py)) sig.push_back(o);
      outer[c] = std::find(sig.begin(), sig.end(), c) != sig.end();
      auto [it, inserted] = region_ids.try_emplace(sig, sl.region_count);
      if (inserted) ++sl.region_count;
      sl.region_of[c] = it->second;
    }
    sl.region_weight.assign(sl.region_count, -1);
    for (int c = 0; c < sl.circle_count; ++c) sl.region_weight[sl.region_of[c]] += 1;
    slices.push_back(std::move(sl));
  }

  // ---- adjacency between consecutive slices -----------------------------
  // Two regions are adjacent when a component of the boundary strip between
  // the slices touches circles of both.  Union-find over (crossed edges at
  // either slice) + (vertices strictly inside the strip); a triangle's strip
  // piece is convex, so everything it contributes is connected.
  int nslices = static_cast<int>(slices.size());
  std::vector<int> reg_offset(nslices + 1, 0);
  for (int i = 0; i < nslices; ++i) reg_offset[i + 1] = reg_offset[i] + slices[i].region_count;
  int total = reg_offset[nslices];
  std::vector<std::set<int>> up_adj(total), down_adj(total);
  for (int i = 0; i + 1 < nslices; ++i) {
    double zlo = slices[i].z, zhi = slices[i + 1].z;
    // strip item ids: 0..V-1 vertices, then per crossed edge of either slice
    std::map<std::pair<int, int>, int> lo_item, hi_item;
    int n_items = s.vertex_count();
    auto edge_key = [&](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    for (const auto& [key, c] : slices[i].circle_of_edge) lo_item.emplace(key, n_items++);
    for (const auto& [key, c] : slices[i + 1].circle_of_edge) hi_item.emplace(key, n_items++);
    std::vector<int> uf(n_items);
    for (int x = 0; x < n_items; ++x) uf[x] = x;
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    auto unite = [&](int a, int b) { uf[find(a)] = find(b); };

    for (const auto& tri : s.triangles) {
      std::vector<int> items;
      for (int k = 0; k < 3; ++k) {
        int v = tri[k];
        if (hv[v] > zlo && hv[v] < zhi) items.push_back(v);
        auto key = edge_key(tri[k], tri[(k + 1) % 3]);
        auto it = lo_item.find(key);
        if (it != lo_item.end()) items.push_back(it->second);
        it = hi_item.find(key);
        if (it != hi_item.end()) items.push_back(it->second);
      }
      for (size_t k = 1; k < items.size(); ++k) unite(items[0], items[k]);
    }

    for (const auto& [key_lo, c_lo] : slices[i].circle_of_edge)
      for (const auto& [key_hi, c_hi] : slices[i + 1].circle_of_edge) {
        if (find(lo_item[key_lo]) != find(hi_item[key_hi])) continue;
        int ra = reg_offset[i] + slices[i].region_of[c_lo];
        int rb = reg_offset[i + 1] + slices[i + 1].region_of[c_hi];
        up_adj[ra].insert(rb);
        down_adj[rb].insert(ra);
      }
  }

  // ---- contract to the merge structure ----------------------------------
  auto weight_of = [&](int rk) {
    int i = static_cast<int>(std::upper_bound(reg_offset.begin(), reg_offset.end(), rk) -
                             reg_offset.begin()) - 1;
    return slices[i].region_weight[rk - reg_offset[i]];
  };
  auto height_of = [&](int rk) {
    int i = static_cast<int>(std::upper_bound(reg_offset.begin(), reg_offset.end(), rk) -
                             reg_offset.begin()) - 1;
    return slices[i].z;
  };

  auto essential = [&](int rk) {
    return up_adj[rk].size() != 1 || down_adj[rk].size() != 1;
  };

  OracleGraph g;
  std::map<int, int> node_of;  // essential region key -> oracle node
  for (int rk = 0; rk < total; ++rk)
    if (essential(rk)) {
      node_of[rk] = static_cast<int>(g.nodes.size());
      g.nodes.push_back({height_of(rk), false});
    }

  // walk up from each essential region along each upward branch, inserting
  // an event node wherever the region weight steps
  for (const auto& [rk0, n0] : node_of) {
    for (int first : up_adj[rk0]) {
      int node_lo = n0;
      int prev = rk0;
      int w = weight_of(rk0);
      int next = first;
      while (true) {
        int wn = weight_of(next);
        if (wn != w) {
          int ev = static_cast<int>(g.nodes.size());
          g.nodes.push_back({0.5 * (height_of(prev) + height_of(next)), true});
          g.edges.push_back({node_lo, ev, w});
          node_lo = ev;
          w = wn;
        }
        if (essential(next)) {
          g.edges.push_back({node_lo, node_of[next], w});
          break;
        }
        prev = next;
        next = *up_adj[next].begin();
      }
    }
  }
  return g;
}

/// Order-preserving isomorphism test between the contracted oracle graph and
/// a WIRG: both are height-ordered, so the only candidate bijection sorts
/// nodes by height.
inline bool matches_wirg(const OracleGraph& g, const bdomain::Wirg& w, std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (g.nodes.size() != w.nodes.size())
    return fail("node count " + std::to_string(g.nodes.size()) + " vs " + std::to_string(w.nodes.size()));
  if (g.edges.size() != w.edges.size())
    return fail("edge count " + std::to_string(g.edges.size()) + " vs " + std::to_string(w.edges.size()));

  std::vector<int> gorder(g.nodes.size());
  for (size_t i = 0; i < gorder.size(); ++i) gorder[i] = static_cast<int>(i);
  std::sort(gorder.begin(), gorder.end(), [&](int a, int b) { return g.nodes[a].h < g.nodes[b].h; });
  std::vector<int> grank(g.nodes.size());
  for (size_t i = 0; i < gorder.size(); ++i) grank[gorder[i]] = static_cast<int>(i);

  bdomain::Wirg ww = w;
  ww.canonicalize();
  std::map<std::string, int> wrank;
  for (size_t i = 0; i < ww.nodes.size(); ++i) wrank[ww.nodes[i].id] = static_cast<int>(i);

  std::multiset<std::tuple<int, int, int>> ge, we;
  for (const auto& e : g.edges)
    ge.insert({std::min(grank[e.lower], grank[e.upper]), std::max(grank[e.lower], grank[e.upper]),
               e.weight});
  for (const auto& e : ww.edges)
    we.insert({std::min(wrank[e.lower], wrank[e.upper]), std::max(wrank[e.lower], wrank[e.upper]),
               e.weight});
  if (ge != we) return fail("edge multisets differ under the height-order bijection");
  return true;
}

}  // namespace oracle

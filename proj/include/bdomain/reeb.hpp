#pragma once

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bdomain/mesh.hpp"
#include "bdomain/morse.hpp"
#include "bdomain/slice.hpp"
#include "bdomain/wirg.hpp"

namespace bdomain {

enum class ReebFlavor { Surface, Solid };

struct ReebNode {
  int id = -1;
  double height = 0.0;
  int vertex = -1;  // source critical vertex
  int sub = 0;      // >0 for nodes from unfolded multi-events
};

struct ReebArc {
  int id = -1;
  int lower = -1;  // node ids; -1 while open during the sweep
  int upper = -1;
};

struct ReebGraph {
  ReebFlavor flavor = ReebFlavor::Surface;
  std::vector<ReebNode> nodes;
  std::vector<ReebArc> edges;

  int betti1() const { return static_cast<int>(edges.size()) - static_cast<int>(nodes.size()) + 1; }
  int degree(int node) const {
    int d = 0;
    for (const auto& e : edges) d += (e.lower == node) + (e.upper == node);
    return d;
  }
};

/// What happened to the level circles at one critical vertex.
struct SweepEvent {
  int vertex = -1;
  int cp = -1;  // index into the critical point list
  double height = 0.0;
  std::vector<int> consumed;  // circle class ids ending here
  std::vector<int> created;   // circle class ids starting here
  int surface_node = -1;      // primary surface Reeb node
};

/// One regular interval between consecutive critical values.
struct IntervalInfo {
  CrossSection section;
  std::vector<int> circle_class;         // per circle in section
  std::map<int, int> class_circle;       // inverse
  std::vector<std::string> region_edge;  // per region: WIRG edge id
};

/// Height-preserving map induced by inclusion of the boundary.
struct ReebMap {
  std::map<int, std::vector<std::string>> surface_edge_to_solid;  // surface arc -> WIRG edges, bottom-up
  std::map<int, std::string> surface_node_to_solid;               // surface node -> WIRG node id
};

struct SolidReebResult {
  ReebGraph surface;
  ReebGraph solid;
  Wirg wirg;
  ReebMap reeb_map;
  std::vector<CriticalPoint> critical;
  std::vector<SweepEvent> events;              // height order
  std::vector<IntervalInfo> intervals;         // size events-1
  std::map<std::string, int> wirg_node_event;  // WIRG node id -> event index
  Vec3 direction;
};

namespace sweepdetail {

/// Sweep over the tie-broken vertex order with explicit level-circle
/// tracking.  Each circle class lives on exactly one surface Reeb arc.
struct SurfaceSweep {
  const TriSurface& s;
  const HeightFunction& h;
  EdgeTable et;
  std::vector<int> order;   // order[k] = vertex at sweep position k
  std::vector<int> pos_of;  // inverse
  std::vector<std::vector<int>> incident_edges;
  std::vector<int> circle_class;  // per edge; -1 inactive
  int next_class = 0;

  ReebGraph graph{ReebFlavor::Surface, {}, {}};
  std::vector<int> class_arc;  // per class: its surface arc
  std::vector<SweepEvent> events;

  SurfaceSweep(const TriSurface& surf, const HeightFunction& hf) : s(surf), h(hf) {
    et = build_edge_table(s);
    order.resize(s.vertex_count());
    for (int v = 0; v < s.vertex_count(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return h.below(s, a, b); });
    pos_of.resize(s.vertex_count());
    for (int k = 0; k < s.vertex_count(); ++k) pos_of[order[k]] = k;
    circle_class.assign(et.count(), -1);
    incident_edges.resize(s.vertex_count());
    for (int e = 0; e < et.count(); ++e) {
      incident_edges[et.edge_verts[e].first].push_back(e);
      incident_edges[et.edge_verts[e].second].push_back(e);
    }
  }

  int fresh_class() {
    class_arc.push_back(-1);
    return next_class++;
  }
  int make_node(double height, int vertex, int sub) {
    int id = static_cast<int>(graph.nodes.size());
    graph.nodes.push_back({id, height, vertex, sub});
    return id;
  }
  int open_arc(int node) {
    int id = static_cast<int>(graph.edges.size());
    graph.edges.push_back({id, node, -1});
    return id;
  }
  void close_arc(int arc, int node) { graph.edges[arc].upper = node; }

  // level circle through `edge` at the cut just after sweep position `cut`
  std::vector<int> walk_circle(int edge, int cut) const {
    auto crossed = [&](int e) {
      auto [a, b] = et.edge_verts[e];
      return (pos_of[a] <= cut) != (pos_of[b] <= cut);
    };
    std::vector<int> out;
    int e = edge;
    int tri = et.edge_tri[e].first;
    while (true) {
      out.push_back(e);
      int enext = -1;
      const auto& t = s.triangles[tri];
      for (int k = 0; k < 3; ++k) {
        int cand = et.edge_id(t[k], t[(k + 1) % 3]);
        if (cand != e && crossed(cand)) {
          enext = cand;
          break;
        }
      }
      assert(enext != -1);
      if (enext == edge) break;
      tri = et.edge_tri[enext].first == tri ? et.edge_tri[enext].second : et.edge_tri[enext].first;
      e = enext;
    }
    return out;
  }

  // Runs the sweep.  `after_position(k)` fires once the vertex at position k
  // has been fully processed (snapshot hook).
  void run(const std::vector<CriticalPoint>& cps,
           const std::function<void(int)>& after_position = nullptr) {
    std::vector<int> cp_of_vertex(s.vertex_count(), -1);
    for (size_t i = 0; i < cps.size(); ++i) cp_of_vertex[cps[i].vertex] = static_cast<int>(i);

    for (int k = 0; k < s.vertex_count(); ++k) {
      int v = order[k];
      std::vector<int> lower_edges, upper_edges;
      for (int e : incident_edges[v]) {
        int u = et.edge_verts[e].first == v ? et.edge_verts[e].second : et.edge_verts[e].first;
        (pos_of[u] < k ? lower_edges : upper_edges).push_back(e);
      }

      if (cp_of_vertex[v] < 0) {
        assert(!lower_edges.empty() && !upper_edges.empty());
        int cls = circle_class[lower_edges[0]];
        for (int e : upper_edges) circle_class[e] = cls;
        if (after_position) after_position(k);
        continue;
      }

      const CriticalPoint& cp = cps[cp_of_vertex[v]];
      SweepEvent ev;
      ev.vertex = v;
      ev.cp = cp_of_vertex[v];
      ev.height = cp.height;
      for (int e : lower_edges) {
        int cls = circle_class[e];
        if (std::find(ev.consumed.begin(), ev.consumed.end(), cls) == ev.consumed.end())
          ev.consumed.push_back(cls);
      }
      for (int e : upper_edges) {
        if (circle_class[e] != -1) continue;  // relabeled by an earlier walk of this event
        std::vector<int> circle = walk_circle(e, k);
        int cls = fresh_class();
        for (int ce : circle) circle_class[ce] = cls;
        ev.created.push_back(cls);
      }
      for (int e : lower_edges) circle_class[e] = -1;

      // unfold the event into simple Reeb nodes (merge chain, split chain)
      int b = static_cast<int>(ev.consumed.size());
      int a = static_cast<int>(ev.created.size());
      int sub = 0;
      auto node_at = [&]() { return make_node(cp.height, v, sub++); };

      if (b == 0) {  // minimum
        assert(a == 1);
        int n = node_at();
        ev.surface_node = n;
        class_arc[ev.created[0]] = open_arc(n);
      } else if (a == 0) {  // maximum
        assert(b == 1);
        int n = node_at();
        ev.surface_node = n;
        close_arc(class_arc[ev.consumed[0]], n);
      } else if (b == 1 && a == 1) {
        // multi-saddle that pinches and immediately re-merges
        assert(cp.multiplicity >= 2);
        int n1 = node_at(), n2 = node_at();
        ev.surface_node = n1;
        close_arc(class_arc[ev.consumed[0]], n1);
        int v1 = open_arc(n1), v2 = open_arc(n1);
        close_arc(v1, n2);
        close_arc(v2, n2);
        class_arc[ev.created[0]] = open_arc(n2);
      } else {
        int current_arc = class_arc[ev.consumed[0]];
        for (int i = 1; i < b; ++i) {
          int n = node_at();
          if (ev.surface_node < 0) ev.surface_node = n;
          close_arc(current_arc, n);
          close_arc(class_arc[ev.consumed[i]], n);
          if (i == b - 1 && a == 1) {
            class_arc[ev.created[0]] = open_arc(n);
            current_arc = -1;
          } else {
            current_arc = open_arc(n);
          }
        }
        for (int i = 0; i + 1 < a; ++i) {
          int n = node_at();
          if (ev.surface_node < 0) ev.surface_node = n;
          close_arc(current_arc, n);
          class_arc[ev.created[i]] = open_arc(n);
          if (i + 2 < a)
            current_arc = open_arc(n);
          else
            class_arc[ev.created[i + 1]] = open_arc(n);
        }
      }
      events.push_back(std::move(ev));
      if (after_position) after_position(k);
    }
  }
};

}  // namespace sweepdetail

/// Reeb graph of the height function restricted to the boundary.  Fully
/// combinatorial; coincident critical values are fine.
inline ReebGraph surface_reeb(const TriSurface& s, const HeightFunction& h) {
  sweepdetail::SurfaceSweep sweep(s, h);
  sweep.run(critical_points(s, h));
  return sweep.graph;
}

/// Builds the surface Reeb graph, the solid Reeb graph with weights and
/// indices (the WIRG), and the induced boundary-to-solid map, in one sweep.
/// Critical values must be pairwise distinct (NotMorseAfterTieBreak
/// otherwise; use perturb_to_morse first).
inline SolidReebResult solid_reeb(const TriSurface& s, const HeightFunction& h) {
  SolidReebResult out;
  out.direction = h.direction;
  out.critical = critical_points(s, h);
  const auto& cps = out.critical;
  if (cps.size() < 2) throw NotMorseError("surface has fewer than two critical points");

  double sep = 1e-9 * s.bounds().diagonal();
  for (size_t i = 1; i < cps.size(); ++i)
    if (cps[i].height - cps[i - 1].height <= sep)
      throw NotMorseError("critical values at vertices " + std::to_string(cps[i - 1].vertex) + " and " +
                          std::to_string(cps[i].vertex) + " collide; perturb the direction");

  sweepdetail::SurfaceSweep sweep(s, h);
  int n_events = static_cast<int>(cps.size());

  // deterministic snapshot heights strictly inside each interval, off all
  // vertex heights
  std::vector<double> all_heights(s.vertex_count());
  for (int v = 0; v < s.vertex_count(); ++v) all_heights[v] = h.value(s, v);
  std::vector<double> sorted_heights = all_heights;
  std::sort(sorted_heights.begin(), sorted_heights.end());
  auto near_vertex_height = [&](double z) {
    auto it = std::lower_bound(sorted_heights.begin(), sorted_heights.end(), z - sep);
    return it != sorted_heights.end() && *it <= z + sep;
  };
  std::vector<double> snapshot_z(n_events - 1);
  std::vector<int> snapshot_cut(n_events - 1);
  for (int j = 0; j + 1 < n_events; ++j) {
    double lo = cps[j].height, hi = cps[j + 1].height;
    double z = 0.5 * (lo + hi);
    double step = (hi - lo) * 1e-5;
    while (near_vertex_height(z)) z += step;
    assert(z < hi);
    snapshot_z[j] = z;
    int below = static_cast<int>(
        std::lower_bound(sorted_heights.begin(), sorted_heights.end(), z) - sorted_heights.begin());
    assert(below > 0);
    snapshot_cut[j] = below - 1;
  }

  out.intervals.resize(std::max(0, n_events - 1));
  int next_snapshot = 0;
  auto take_snapshot = [&](int j) {
    double z = snapshot_z[j];
    auto lower = [&](int v) { return all_heights[v] < z; };
    auto cut_point = [&](int lo, int hi) -> Vec3 {
      double t = (z - all_heights[lo]) / (all_heights[hi] - all_heights[lo]);
      return s.vertices[lo] + (s.vertices[hi] - s.vertices[lo]) * t;
    };
    IntervalInfo info;
    info.section.height = z;
    info.section.circles = walk_level_circles(s, sweep.et, lower, cut_point, h.direction);
    detail::PlaneBasis basis = detail::plane_basis(h.direction);
    detail::group_regions(info.section, basis, 1e-7 * s.bounds().diagonal());
    for (const auto& c : info.section.circles) {
      int cls = sweep.circle_class[c.edges[0]];
      assert(cls >= 0);
      info.circle_class.push_back(cls);
      info.class_circle[cls] = static_cast<int>(info.circle_class.size()) - 1;
    }
    out.intervals[j] = std::move(info);
  };

  sweep.run(cps, [&](int k) {
    while (next_snapshot < n_events - 1 && snapshot_cut[next_snapshot] == k) {
      take_snapshot(next_snapshot);
      ++next_snapshot;
    }
  });
  assert(next_snapshot == n_events - 1);
  out.surface = sweep.graph;
  out.events = sweep.events;

  // ---- chain interval regions into solid edges -------------------------
  int n_intervals = n_events - 1;
  std::vector<int> region_offset(n_intervals + 1, 0);
  for (int j = 0; j < n_intervals; ++j)
    region_offset[j + 1] = region_offset[j] + out.intervals[j].section.region_count;
  int total_regions = region_offset[n_intervals];
  std::vector<int> parent(total_regions);
  for (int i = 0; i < total_regions; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto key = [&](int interval, int region) { return region_offset[interval] + region; };

  std::vector<int> begin_event(total_regions, -1), end_event(total_regions, -1);

  for (int eidx = 0; eidx < n_events; ++eidx) {
    const SweepEvent& ev = out.events[eidx];
    const IntervalInfo* below = eidx > 0 ? &out.intervals[eidx - 1] : nullptr;
    const IntervalInfo* above = eidx < n_intervals ? &out.intervals[eidx] : nullptr;

    auto region_below = [&](int cls) -> int {
      auto it = below->class_circle.find(cls);
      return it == below->class_circle.end() ? -1 : below->section.region_of[it->second];
    };
    auto region_above = [&](int cls) -> int {
      auto it = above->class_circle.find(cls);
      return it == above->class_circle.end() ? -1 : above->section.region_of[it->second];
    };

    std::set<int> touched_below, touched_above;
    if (below)
      for (int cls : ev.consumed) touched_below.insert(region_below(cls));
    if (above)
      for (int cls : ev.created) touched_above.insert(region_above(cls));

    std::set<std::pair<int, int>> linked;
    if (below && above) {
      for (size_t c = 0; c < below->circle_class.size(); ++c) {
        int cls = below->circle_class[c];
        int ra = region_above(cls);
        if (ra >= 0) linked.insert({below->section.region_of[c], ra});
      }
      for (int p : ev.consumed)
        for (int cnew : ev.created) {
          int rb = region_below(p), ra = region_above(cnew);
          if (rb >= 0 && ra >= 0) linked.insert({rb, ra});
        }
      for (auto [rb, ra] : linked) {
        if (!touched_below.count(rb) && !touched_above.count(ra))
          parent[find(key(eidx - 1, rb))] = find(key(eidx, ra));
        else {
          end_event[key(eidx - 1, rb)] = eidx;
          begin_event[key(eidx, ra)] = eidx;
        }
      }
    }
    if (below)
      for (int r = 0; r < below->section.region_count; ++r) {
        bool has_link = false;
        for (auto [rb, ra] : linked) has_link |= rb == r;
        if (!has_link) end_event[key(eidx - 1, r)] = eidx;
      }
    if (above)
      for (int r = 0; r < above->section.region_count; ++r) {
        bool has_link = false;
        for (auto [rb, ra] : linked) has_link |= ra == r;
        if (!has_link) begin_event[key(eidx, r)] = eidx;
      }
  }

  struct Chain {
    int begin_ev = -1, end_ev = -1;
    int weight = -1;
    std::vector<std::pair<int, int>> regions;  // ascending (interval, region)
  };
  std::map<int, int> chain_of_root;
  std::vector<Chain> chains;
  for (int j = 0; j < n_intervals; ++j)
    for (int r = 0; r < out.intervals[j].section.region_count; ++r) {
      int root = find(key(j, r));
      auto [it, inserted] = chain_of_root.try_emplace(root, static_cast<int>(chains.size()));
      if (inserted) chains.emplace_back();
      Chain& ch = chains[it->second];
      ch.regions.emplace_back(j, r);
      int w = out.intervals[j].section.weight(r);
      assert(ch.weight == -1 || ch.weight == w);
      ch.weight = w;
      if (begin_event[key(j, r)] >= 0) ch.begin_ev = begin_event[key(j, r)];
      if (end_event[key(j, r)] >= 0) ch.end_ev = end_event[key(j, r)];
    }
  for (auto& ch : chains) std::sort(ch.regions.begin(), ch.regions.end());

  // ---- solid graph and WIRG --------------------------------------------
  ReebGraph solid{ReebFlavor::Solid, {}, {}};
  Wirg wirg;

  std::vector<std::vector<int>> ends_at(n_events), begins_at(n_events);
  for (size_t c = 0; c < chains.size(); ++c) {
    assert(chains[c].begin_ev >= 0 && chains[c].end_ev >= 0);
    begins_at[chains[c].begin_ev].push_back(static_cast<int>(c));
    ends_at[chains[c].end_ev].push_back(static_cast<int>(c));
  }

  std::vector<int> chain_edge(chains.size(), -1);
  std::vector<std::string> chain_wedge(chains.size());
  int next_wedge = 0;
  std::map<std::string, int> wedge_index;  // WIRG edge id -> index in wirg.edges

  auto solid_node = [&](int eidx, int sub, std::optional<int> index, Convexity conv, SaddleNormal sn) {
    const SweepEvent& ev = out.events[eidx];
    double gap = eidx + 1 < n_events ? cps[eidx + 1].height - ev.height
                                     : ev.height - cps[eidx - 1].height;
    double hgt = ev.height + gap * 1e-7 * sub;
    int id = static_cast<int>(solid.nodes.size());
    solid.nodes.push_back({id, hgt, ev.vertex, sub});
    WirgNode n;
    n.id = "n" + std::to_string(id);
    n.height = hgt;
    n.index = index;
    n.convexity = conv;
    n.saddle_normal = sn;
    wirg.nodes.push_back(n);
    out.wirg_node_event[n.id] = eidx;
    return id;
  };
  auto new_wedge = [&](int node, int weight) {
    int arc = static_cast<int>(solid.edges.size());
    solid.edges.push_back({arc, node, -1});
    std::string id = "e" + std::to_string(next_wedge++);
    wedge_index[id] = static_cast<int>(wirg.edges.size());
    wirg.edges.push_back({id, wirg.nodes[node].id, "", weight});
    return std::pair<int, std::string>{arc, id};
  };
  auto close_wedge = [&](const std::pair<int, std::string>& handle, int node) {
    solid.edges[handle.first].upper = node;
    wirg.edges[wedge_index[handle.second]].upper = wirg.nodes[node].id;
  };
  auto open_chain = [&](int chain, int node) {
    auto handle = new_wedge(node, chains[chain].weight);
    chain_edge[chain] = handle.first;
    chain_wedge[chain] = handle.second;
  };
  auto close_chain = [&](int chain, int node) {
    close_wedge({chain_edge[chain], chain_wedge[chain]}, node);
  };

  for (int eidx = 0; eidx < n_events; ++eidx) {
    const CriticalPoint& cp = cps[out.events[eidx].cp];
    std::vector<int>& dn = ends_at[eidx];
    std::vector<int>& up = begins_at[eidx];
    std::sort(dn.begin(), dn.end());
    std::sort(up.begin(), up.end());
    int p = static_cast<int>(dn.size()), q = static_cast<int>(up.size());

    bool unit_step = !(p == 1 && q == 1 && std::abs(chains[dn[0]].weight - chains[up[0]].weight) > 1);
    if (p + q <= 3 && unit_step) {
      int n = solid_node(eidx, 0, cp.index, cp.convexity, cp.saddle_normal);
      for (int c : dn) close_chain(c, n);
      for (int c : up) open_chain(c, n);
    } else if (p == 1 && q == 1) {
      // multi-event weight jump: unfold into unit steps
      int wlo = chains[dn[0]].weight, whi = chains[up[0]].weight;
      int steps = std::abs(whi - wlo);
      int dir = whi > wlo ? 1 : -1;
      int n = solid_node(eidx, 0, cp.index, cp.convexity, cp.saddle_normal);
      close_chain(dn[0], n);
      for (int i = 1; i < steps; ++i) {
        auto handle = new_wedge(n, wlo + dir * i);
        int n2 = solid_node(eidx, i, 1, Convexity::NA, cp.saddle_normal);
        close_wedge(handle, n2);
        n = n2;
      }
      open_chain(up[0], n);
    } else {
      // merge chain then split chain over solid regions
      int sub = 0;
      std::pair<int, std::string> trunk{-1, ""};
      bool have_trunk = false;
      bool first_in_closed = false;
      int trunk_weight = p >= 1 ? chains[dn[0]].weight : 0;
      for (int i = 1; i < p; ++i) {
        int n = solid_node(eidx, sub++, cp.index, cp.convexity, cp.saddle_normal);
        if (have_trunk)
          close_wedge(trunk, n);
        else {
          close_chain(dn[0], n);
          first_in_closed = true;
        }
        close_chain(dn[i], n);
        trunk_weight += chains[dn[i]].weight;
        if (i == p - 1 && q == 1) {
          open_chain(up[0], n);
          have_trunk = false;
          trunk = {-1, ""};
          break;
        }
        trunk = new_wedge(n, trunk_weight);
        have_trunk = true;
      }
      for (int i = 0; i + 1 < q; ++i) {
        int n = solid_node(eidx, sub++, cp.index, cp.convexity, cp.saddle_normal);
        if (have_trunk)
          close_wedge(trunk, n);
        else {
          assert(p == 1 && !first_in_closed);
          close_chain(dn[0], n);
          first_in_closed = true;
        }
        open_chain(up[i], n);
        if (i + 2 < q) {
          int rem = 0;
          for (int kk = i + 1; kk < q; ++kk) rem += chains[up[kk]].weight;
          trunk = new_wedge(n, rem);
          have_trunk = true;
        } else {
          open_chain(up[i + 1], n);
          have_trunk = false;
        }
      }
    }
  }

  for (int j = 0; j < n_intervals; ++j)
    out.intervals[j].region_edge.assign(out.intervals[j].section.region_count, "");
  for (size_t c = 0; c < chains.size(); ++c)
    for (auto [j, r] : chains[c].regions) out.intervals[j].region_edge[r] = chain_wedge[c];

  // ---- the induced map --------------------------------------------------
  {
    std::vector<std::vector<std::string>> arc_solid(out.surface.edges.size());
    for (int j = 0; j < n_intervals; ++j) {
      const IntervalInfo& info = out.intervals[j];
      for (size_t c = 0; c < info.circle_class.size(); ++c) {
        int arc = sweep.class_arc[info.circle_class[c]];
        if (arc < 0) continue;
        const std::string& wedge = info.region_edge[info.section.region_of[c]];
        auto& list = arc_solid[arc];
        if (list.empty() || list.back() != wedge) list.push_back(wedge);
      }
    }
    for (size_t arc = 0; arc < arc_solid.size(); ++arc)
      out.reeb_map.surface_edge_to_solid[static_cast<int>(arc)] = arc_solid[arc];

    std::map<int, std::string> primary_node;  // event -> first WIRG node id
    for (const auto& n : wirg.nodes) {
      int ev = out.wirg_node_event[n.id];
      if (!primary_node.count(ev)) primary_node[ev] = n.id;
    }
    for (int eidx = 0; eidx < n_events; ++eidx)
      out.reeb_map.surface_node_to_solid[out.events[eidx].surface_node] = primary_node[eidx];
  }

  out.solid = solid;
  out.wirg = wirg;
  return out;
}

inline std::string to_dot(const ReebGraph& g, const std::string& title,
                          const std::vector<CriticalPoint>* cps = nullptr) {
  std::map<int, int> index_of;
  if (cps)
    for (const auto& cp : *cps) index_of[cp.vertex] = cp.index;
  std::ostringstream os;
  os << "graph \"" << title << "\" {\n  rankdir=BT;\n";
  for (const auto& n : g.nodes) {
    os << "  n" << n.id << " [label=\"h=" << n.height;
    auto it = index_of.find(n.vertex);
    if (it != index_of.end()) os << " i=" << it->second;
    os << "\"];\n";
  }
  for (const auto& e : g.edges) os << "  n" << e.lower << " -- n" << e.upper << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace bdomain

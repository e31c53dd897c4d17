#pragma once

#include <map>
#include <optional>
#include <string>

#include "bdomain/reeb.hpp"
#include "bdomain/rewrite.hpp"
#include "bdomain/slice.hpp"
#include "bdomain/visibility.hpp"

namespace bdomain {

/// Basin-automaton marks read off the pipeline cross sections: at every
/// trivalent merge, whether each incoming region arrives inside a hole of
/// the other; at every trivalent split, which branch keeps the holes.
inline BasinMarks basin_marks_from_pipeline(const SolidReebResult& res) {
  BasinMarks marks;
  detail::PlaneBasis basis = detail::plane_basis(res.direction);
  const Wirg& g = res.wirg;

  auto region_of_edge = [&](const IntervalInfo& info, const std::string& edge_id) {
    for (size_t r = 0; r < info.region_edge.size(); ++r)
      if (info.region_edge[r] == edge_id) return static_cast<int>(r);
    return -1;
  };

  for (const auto& n : g.nodes) {
    auto below = g.edges_below(n.id);
    auto above = g.edges_above(n.id);
    auto evit = res.wirg_node_event.find(n.id);
    if (evit == res.wirg_node_event.end()) continue;
    int eidx = evit->second;

    if (below.size() == 2 && above.size() == 1 && eidx - 1 >= 0 &&
        eidx - 1 < static_cast<int>(res.intervals.size())) {
      const IntervalInfo& info = res.intervals[eidx - 1];
      int ra = region_of_edge(info, below[0]->id);
      int rb = region_of_edge(info, below[1]->id);
      if (ra < 0 || rb < 0) continue;
      auto inside_hole_of = [&](int host, int guest) {
        int outer = info.section.outer_circle[guest];
        Vec3 probe = detail::solid_side_probe(info.section.circles[outer], res.direction, 0.0);
        for (int hole : info.section.region_holes[host])
          if (detail::circle_contains(info.section.circles, basis, hole, basis.project(probe)))
            return true;
        return false;
      };
      marks.arrival_interior_by_edge[n.id][below[0]->id] = inside_hole_of(ra, rb);
      marks.arrival_interior_by_edge[n.id][below[1]->id] = inside_hole_of(rb, ra);
    }

    if (below.size() == 1 && above.size() == 2 && eidx < static_cast<int>(res.intervals.size())) {
      // the branch whose region kept holes carries the basin
      const IntervalInfo& info = res.intervals[eidx];
      int r0 = region_of_edge(info, above[0]->id);
      int r1 = region_of_edge(info, above[1]->id);
      if (r0 < 0 || r1 < 0) continue;
      bool h0 = !info.section.region_holes[r0].empty();
      bool h1 = !info.section.region_holes[r1].empty();
      if (h0 != h1) marks.split_continuation[n.id] = h0 ? above[0]->id : above[1]->id;
    }
  }
  return marks;
}

/// Endpoint-type annotations for the weight-2 segments of a pipeline WIRG,
/// read off the cross-section geometry:
///   bivalent endpoints:  hole born/dies at a concave extremum -> (3);
///   a saddle splitting or merging against the region's outer circle -> (2);
///   against the other hole -> (1).
///   trivalent endpoints: the two annuli after the split sit side by side
///   -> (4) or nested -> (5).
/// Mirror marks are relative: when both endpoints reference an identifiable
/// hole (types 2, 3, 5) the prime records whether they reference different
/// holes.  Pair chirality for types (1) and (4) is not recoverable from the
/// weighted graph, so those marks stay unknown and downstream classification
/// is conservative.
inline std::map<std::string, std::pair<EndpointAnnotation, EndpointAnnotation>>
annotate_weight2_segments(const SolidReebResult& res) {
  std::map<std::string, std::pair<EndpointAnnotation, EndpointAnnotation>> out;
  detail::PlaneBasis basis = detail::plane_basis(res.direction);

  // trace a circle class forward/backward through interval relabelings is
  // not needed here: endpoint events carry the classes directly
  auto hole_classes_of_region = [&](const IntervalInfo& info, int region) {
    std::vector<int> holes;
    for (int c : info.section.region_holes[region]) holes.push_back(info.circle_class[c]);
    return holes;
  };

  for (const auto& seg : find_weight2_segments(res.wirg)) {
    bool clean = seg.interior_nodes.empty();
    struct Side {
      std::optional<EndpointType> type;
      std::optional<int> hole_ref;  // circle class identifying the involved hole
    };
    auto classify_end = [&](const std::string& node_id, bool is_lower) -> Side {
      Side side;
      auto evit = res.wirg_node_event.find(node_id);
      if (evit == res.wirg_node_event.end()) return side;
      const SweepEvent& ev = res.events[evit->second];
      // the pair-of-pants interval sits above a lower endpoint, below an
      // upper one
      int p_interval = is_lower ? evit->second : evit->second - 1;
      if (p_interval < 0 || p_interval >= static_cast<int>(res.intervals.size())) return side;
      const IntervalInfo& pinfo = res.intervals[p_interval];

      const Wirg& g = res.wirg;
      auto outward = is_lower ? g.edges_below(node_id) : g.edges_above(node_id);
      bool trivalent = outward.size() == 2;

      // classes consumed/created on the pair-of-pants side of the event
      const std::vector<int>& p_side = is_lower ? ev.created : ev.consumed;
      const std::vector<int>& a_side = is_lower ? ev.consumed : ev.created;

      if (!trivalent) {
        if (a_side.empty() || p_side.empty()) {
          // extremum: a hole born or capped
          side.type = EndpointType::T3;
          if (!p_side.empty()) side.hole_ref = p_side[0];
          else if (!a_side.empty()) side.hole_ref = a_side[0];
          return side;
        }
        // saddle: which circle split / which pair merged, seen from P
        // P-side has two circles of the segment region; find that region
        int region = -1;
        for (int cls : p_side) {
          auto it = pinfo.class_circle.find(cls);
          if (it != pinfo.class_circle.end()) region = pinfo.section.region_of[it->second];
        }
        if (region < 0) return side;
        int outer_cls = pinfo.circle_class[pinfo.section.outer_circle[region]];
        bool involves_outer = false;
        for (int cls : p_side) involves_outer |= cls == outer_cls;
        if (involves_outer) {
          side.type = EndpointType::T2;
          for (int cls : p_side)
            if (cls != outer_cls) side.hole_ref = cls;
        } else {
          side.type = EndpointType::T1;
        }
        return side;
      }

      // trivalent: side-by-side vs nested annuli on the two-annulus side
      int a_interval = is_lower ? evit->second - 1 : evit->second;
      if (a_interval < 0 || a_interval >= static_cast<int>(res.intervals.size())) return side;
      const IntervalInfo& ainfo = res.intervals[a_interval];
      std::vector<int> regions;
      for (int cls : a_side) {
        auto it = ainfo.class_circle.find(cls);
        if (it == ainfo.class_circle.end()) continue;
        int r = ainfo.section.region_of[it->second];
        if (std::find(regions.begin(), regions.end(), r) == regions.end()) regions.push_back(r);
      }
      if (regions.size() != 2) {
        // fall back: the regions of the two weight-1 edges
        regions.clear();
        for (const auto* e : outward)
          for (size_t c = 0; c < ainfo.circle_class.size(); ++c)
            if (ainfo.region_edge[ainfo.section.region_of[c]] == e->id) {
              int r = ainfo.section.region_of[c];
              if (std::find(regions.begin(), regions.end(), r) == regions.end()) regions.push_back(r);
            }
      }
      if (regions.size() != 2) return side;
      int out0 = ainfo.section.outer_circle[regions[0]];
      int out1 = ainfo.section.outer_circle[regions[1]];
      Vec3 probe1 = detail::solid_side_probe(ainfo.section.circles[out1], res.direction, 0.0);
      bool nested01 = detail::circle_contains(ainfo.section.circles, basis, out0, basis.project(probe1));
      Vec3 probe0 = detail::solid_side_probe(ainfo.section.circles[out0], res.direction, 0.0);
      bool nested10 = detail::circle_contains(ainfo.section.circles, basis, out1, basis.project(probe0));
      if (nested01 || nested10) {
        side.type = EndpointType::T5;
        // the nesting hole: the inner region's outer circle class
        side.hole_ref = ainfo.circle_class[nested01 ? out1 : out0];
      } else {
        side.type = EndpointType::T4;
      }
      return side;
    };

    Side lo = classify_end(seg.lower_node, true);
    Side up = classify_end(seg.upper_node, false);
    if (!lo.type || !up.type) continue;

    EndpointAnnotation alo{*lo.type, false, false};
    EndpointAnnotation aup{*up.type, false, false};
    if (clean && lo.hole_ref && up.hole_ref) {
      alo.mirrored = *lo.hole_ref != *up.hole_ref;
      alo.mirror_known = true;
      aup.mirror_known = true;
    }
    out.emplace(seg.edges[0], std::make_pair(alo, aup));
  }
  return out;
}

}  // namespace bdomain

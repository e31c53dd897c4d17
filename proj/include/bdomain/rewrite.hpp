#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bdomain/errors.hpp"
#include "bdomain/wirg.hpp"

namespace bdomain {

// ---- weight-2 segments and their endpoint case table --------------------
//
// A weight-2 segment is a maximal monotone chain of weight-2 edges (chained
// through trivalent nodes whose third edge has weight 0).  Its endpoints
// adjoin either one weight-1 edge (a bivalent node, local types 1..3) or two
// weight-1 edges (a trivalent node, types 4..5):
//   (1) one hole splits in two / two holes merge
//   (2) a hole splits off the outer boundary / merges into it
//   (3) a hole is born or dies at a concave extremum
//   (4) separating pinch of the outer circle: two side-by-side annuli
//   (5) separating pinch of a hole around the other: nested annuli
// A prime marks the left-right mirror relation between the two endpoint
// configurations.

enum class EndpointType { T1 = 1, T2, T3, T4, T5 };

struct EndpointAnnotation {
  EndpointType type = EndpointType::T1;
  bool mirrored = false;     // the prime mark, relative to the other endpoint
  bool mirror_known = true;  // pipelines cannot always determine chirality
};

struct Weight2Segment {
  std::vector<std::string> edges;  // weight-2 edges, bottom-up
  std::string lower_node, upper_node;
  std::vector<std::string> interior_nodes;  // trivalent weight-0 branch points
  std::optional<EndpointAnnotation> lower_type, upper_type;
};

enum class Weight2Verdict {
  ForbiddenCompressingDisk,
  ForbiddenSphere,
  ReducibleHeightSwap,
  ReducibleBirthDeath,
  Survivor,
  ForbiddenEndPart,
};

inline const char* to_string(Weight2Verdict v) {
  switch (v) {
    case Weight2Verdict::ForbiddenCompressingDisk: return "forbidden-compressing-disk";
    case Weight2Verdict::ForbiddenSphere: return "forbidden-sphere";
    case Weight2Verdict::ReducibleHeightSwap: return "reducible-height-swap";
    case Weight2Verdict::ReducibleBirthDeath: return "reducible-birth-death";
    case Weight2Verdict::Survivor: return "survivor";
    case Weight2Verdict::ForbiddenEndPart: return "forbidden-end-part";
  }
  return "?";
}

namespace rewritedetail {

// (upper type, lower type, lower primed) -> verdict; upper types are
// normalized unprimed.  24 entries: the listed pairs plus the upside-down
// duals (2)-(1), (3)-(1), (3)-(2).
struct PairKey {
  int upper, lower;
  bool primed;
  bool operator<(const PairKey& o) const {
    return std::tie(upper, lower, primed) < std::tie(o.upper, o.lower, o.primed);
  }
};

inline const std::map<PairKey, Weight2Verdict>& verdict_table() {
  using V = Weight2Verdict;
  static const std::map<PairKey, Weight2Verdict> table = {
      {{1, 1, false}, V::ForbiddenCompressingDisk},
      {{2, 2, false}, V::ForbiddenCompressingDisk},
      {{3, 3, false}, V::ForbiddenSphere},
      {{1, 1, true}, V::ReducibleHeightSwap},
      {{1, 2, false}, V::ReducibleHeightSwap},
      {{1, 3, true}, V::ReducibleHeightSwap},
      {{3, 3, true}, V::ReducibleHeightSwap},
      {{4, 1, false}, V::ReducibleHeightSwap},
      {{4, 3, false}, V::ReducibleHeightSwap},
      {{5, 1, true}, V::ReducibleHeightSwap},
      {{5, 2, false}, V::ReducibleHeightSwap},
      {{5, 3, false}, V::ReducibleHeightSwap},
      {{1, 3, false}, V::ReducibleBirthDeath},
      {{2, 3, false}, V::ReducibleBirthDeath},
      {{4, 2, false}, V::Survivor},
      {{5, 1, false}, V::Survivor},
      {{5, 3, true}, V::Survivor},
      {{4, 5, false}, V::Survivor},
      {{5, 5, true}, V::Survivor},
      {{4, 4, false}, V::ForbiddenEndPart},
      {{5, 5, false}, V::ForbiddenEndPart},
      // upside-down duals of the bivalent-bivalent reducible pairs
      {{2, 1, false}, V::ReducibleHeightSwap},
      {{3, 1, false}, V::ReducibleBirthDeath},
      {{3, 2, false}, V::ReducibleBirthDeath},
  };
  return table;
}

inline std::optional<Weight2Verdict> lookup_pair(int upper, bool upper_primed, int lower,
                                                 bool lower_primed) {
  // normalize: mirror the whole picture so the upper type is unprimed
  if (upper_primed) {
    upper_primed = false;
    lower_primed = !lower_primed;
  }
  const auto& table = verdict_table();
  auto it = table.find({upper, lower, lower_primed});
  if (it != table.end()) return it->second;
  // upside-down symmetry: swap roles, the prime travels with its endpoint
  int fu = lower, fl = upper;
  bool fup = lower_primed, flp = false;
  if (fup) {
    fup = false;
    flp = !flp;
  }
  it = table.find({fu, fl, flp});
  if (it != table.end()) return it->second;
  return std::nullopt;
}

}  // namespace rewritedetail

/// All maximal weight-2 segments of the graph, bottom-up.
inline std::vector<Weight2Segment> find_weight2_segments(const Wirg& g) {
  std::set<std::string> seen;
  std::vector<Weight2Segment> out;
  Wirg sorted = g;
  sorted.canonicalize();
  for (const auto& start : sorted.edges) {
    if (start.weight != 2 || seen.count(start.id)) continue;
    Weight2Segment seg;
    // walk down
    const WirgEdge* e = &start;
    while (true) {
      auto below = g.edges_below(e->lower);
      auto above = g.edges_above(e->lower);
      const WirgEdge* next = nullptr;
      if (below.size() + above.size() == 3) {
        for (const auto* cand : below)
          if (cand->weight == 2) next = cand;
      }
      if (!next) break;
      e = next;
    }
    // collect upward
    seg.lower_node = e->lower;
    while (true) {
      seg.edges.push_back(e->id);
      seen.insert(e->id);
      auto below = g.edges_below(e->upper);
      auto above = g.edges_above(e->upper);
      const WirgEdge* next = nullptr;
      if (below.size() + above.size() == 3) {
        for (const auto* cand : above)
          if (cand->weight == 2) next = cand;
      }
      if (!next) {
        seg.upper_node = e->upper;
        break;
      }
      seg.interior_nodes.push_back(e->upper);
      e = next;
    }
    out.push_back(std::move(seg));
  }
  return out;
}

/// True when the node's local structure matches the annotated endpoint kind:
/// types 1..3 need a bivalent node against one weight-1 edge, 4..5 a
/// trivalent node against two weight-1 edges.
inline bool endpoint_structure_ok(const Wirg& g, const std::string& node, bool is_lower,
                                  EndpointType t) {
  auto outward = is_lower ? g.edges_below(node) : g.edges_above(node);
  bool bivalent_kind = t == EndpointType::T1 || t == EndpointType::T2 || t == EndpointType::T3;
  if (bivalent_kind)
    return outward.size() == 1 && outward[0]->weight == 1;
  return outward.size() == 2 && outward[0]->weight == 1 && outward[1]->weight == 1;
}

/// Applies the endpoint case table to an annotated segment.
inline Weight2Verdict classify_weight2_segment(const Wirg& g, const Weight2Segment& seg) {
  if (!seg.lower_type || !seg.upper_type)
    throw UnknownTypePairError("segment at edge " + (seg.edges.empty() ? "?" : seg.edges[0]) +
                               " is missing endpoint annotations");
  const EndpointAnnotation& lo = *seg.lower_type;
  const EndpointAnnotation& up = *seg.upper_type;
  if (!endpoint_structure_ok(g, seg.lower_node, true, lo.type) ||
      !endpoint_structure_ok(g, seg.upper_node, false, up.type))
    throw UnknownTypePairError("endpoint annotation inconsistent with adjacent weights at segment " +
                               seg.edges[0]);

  auto resolve = [&](bool lo_primed) {
    return rewritedetail::lookup_pair(static_cast<int>(up.type), up.mirrored,
                                      static_cast<int>(lo.type), lo_primed);
  };
  if (lo.mirror_known && up.mirror_known) {
    auto v = resolve(lo.mirrored);
    // unlisted combination: never guess a reduction
    return v.value_or(Weight2Verdict::Survivor);
  }
  auto a = resolve(false), b = resolve(true);
  if (a && b && *a == *b) return *a;
  return Weight2Verdict::Survivor;
}

// ---- rewriting ------------------------------------------------------------

struct RewriteStep {
  std::string rule;  // birth-death-cancel | height-swap | whisker-trim |
                     // weight2-reduce | compressing-disk-witness | sphere-witness
  std::vector<std::string> affected;  // node/edge ids
  Wirg result;
};

struct SimplifyResult {
  Wirg graph;
  std::vector<RewriteStep> trace;
  bool budget_exhausted = false;
};

namespace rewritedetail {

inline void erase_node(Wirg& g, const std::string& id) {
  g.nodes.erase(std::remove_if(g.nodes.begin(), g.nodes.end(),
                               [&](const WirgNode& n) { return n.id == id; }),
                g.nodes.end());
}
inline void erase_edge(Wirg& g, const std::string& id) {
  g.edges.erase(std::remove_if(g.edges.begin(), g.edges.end(),
                               [&](const WirgEdge& e) { return e.id == id; }),
                g.edges.end());
}

struct WhiskerSite {
  std::string whisker_node, saddle_node, whisker_edge;
  std::string fuse_lower_edge, fuse_upper_edge;
  double height;
};

// A cancellable pair: degree-1 node whose trivalent partner joins a lower
// and an upper edge of equal weight into a straight continuation.
inline std::vector<WhiskerSite> whisker_sites(const Wirg& g) {
  std::vector<WhiskerSite> sites;
  if (g.edges.size() < 2) return sites;
  for (const auto& n : g.nodes) {
    auto below = g.edges_below(n.id);
    auto above = g.edges_above(n.id);
    if (below.size() + above.size() != 1) continue;
    const WirgEdge* e = below.empty() ? above[0] : below[0];
    std::string saddle = below.empty() ? e->upper : e->lower;
    auto sb = g.edges_below(saddle);
    auto sa = g.edges_above(saddle);
    if (sb.size() + sa.size() != 3) continue;
    // the saddle must keep one edge on each side after removing the whisker
    std::vector<const WirgEdge*> rb, ra;
    for (const auto* x : sb)
      if (x->id != e->id) rb.push_back(x);
    for (const auto* x : sa)
      if (x->id != e->id) ra.push_back(x);
    if (rb.size() != 1 || ra.size() != 1) continue;
    if (rb[0]->weight != ra[0]->weight) continue;
    sites.push_back({n.id, saddle, e->id, rb[0]->id, ra[0]->id, n.height});
  }
  std::sort(sites.begin(), sites.end(), [](const WhiskerSite& a, const WhiskerSite& b) {
    return a.height != b.height ? a.height < b.height : a.whisker_node < b.whisker_node;
  });
  return sites;
}

inline void apply_whisker_trim(Wirg& g, const WhiskerSite& site) {
  const WirgEdge lower = *g.edge(site.fuse_lower_edge);
  const WirgEdge upper = *g.edge(site.fuse_upper_edge);
  erase_edge(g, site.whisker_edge);
  erase_edge(g, site.fuse_upper_edge);
  erase_node(g, site.whisker_node);
  erase_node(g, site.saddle_node);
  for (auto& e : g.edges)
    if (e.id == lower.id) e.upper = upper.upper;
}

}  // namespace rewritedetail

/// Removes cancellable whisker pairs to a fixpoint.  Never changes betti1 or
/// any remaining weight; global extrema persist.
inline std::pair<Wirg, std::vector<RewriteStep>> cancel_pairs(const Wirg& graph) {
  Wirg g = graph;
  std::vector<RewriteStep> trace;
  while (true) {
    auto sites = rewritedetail::whisker_sites(g);
    if (sites.empty()) break;
    const auto& site = sites.front();
    RewriteStep step;
    step.rule = "whisker-trim";
    step.affected = {site.whisker_node, site.saddle_node, site.whisker_edge};
    rewritedetail::apply_whisker_trim(g, site);
    step.result = g;
    trace.push_back(std::move(step));
  }
  return {g, trace};
}

namespace rewritedetail {

// surgery for a reducible bivalent-bivalent segment (single weight-2 edge)
inline RewriteStep reduce_bivalent_segment(Wirg& g, const Weight2Segment& seg,
                                           Weight2Verdict verdict) {
  const WirgNode lo = *g.node(seg.lower_node);
  const WirgNode up = *g.node(seg.upper_node);
  const WirgEdge below = *g.edges_below(lo.id)[0];
  const WirgEdge above = *g.edges_above(up.id)[0];
  RewriteStep step;
  step.affected = {seg.edges[0], lo.id, up.id};

  if (verdict == Weight2Verdict::ReducibleBirthDeath) {
    // cancel both events; the two weight-1 edges fuse
    step.rule = "birth-death-cancel";
    erase_edge(g, seg.edges[0]);
    erase_edge(g, above.id);
    erase_node(g, lo.id);
    erase_node(g, up.id);
    for (auto& e : g.edges)
      if (e.id == below.id) e.upper = above.upper;
  } else {
    // swap the two events: the down-step now comes first and the segment
    // between them carries weight 0
    step.rule = "height-swap";
    for (auto& n : g.nodes) {
      if (n.id == lo.id) {
        n.index = up.index;
        n.convexity = up.convexity;
        n.saddle_normal = up.saddle_normal;
      } else if (n.id == up.id) {
        n.index = lo.index;
        n.convexity = lo.convexity;
        n.saddle_normal = lo.saddle_normal;
      }
    }
    for (auto& e : g.edges)
      if (e.id == seg.edges[0]) e.weight = 0;
  }
  step.result = g;
  return step;
}

// surgery for a reducible segment with a trivalent upper endpoint: the
// weight-1 edge below splits early, and the weight-0 branch steps up to
// weight 1 where the old trivalent node sat
inline RewriteStep reduce_trivalent_upper(Wirg& g, const Weight2Segment& seg) {
  const WirgNode lo = *g.node(seg.lower_node);
  const WirgNode up = *g.node(seg.upper_node);
  auto uppers = g.edges_above(up.id);
  std::sort(uppers.begin(), uppers.end(),
            [](const WirgEdge* a, const WirgEdge* b) { return a->id < b->id; });
  const std::string straight = uppers[0]->id;
  const std::string stepped = uppers[1]->id;
  RewriteStep step;
  step.rule = "weight2-reduce";
  step.affected = {seg.edges[0], lo.id, up.id};

  // lower node becomes the trivalent split, upper node the bivalent step
  for (auto& n : g.nodes) {
    if (n.id == lo.id) {
      n.index = 1;
      n.convexity = Convexity::NA;
      n.saddle_normal = up.saddle_normal;
    } else if (n.id == up.id) {
      n.index = 0;
      n.convexity = Convexity::Concave;
      n.saddle_normal = SaddleNormal::NA;
    }
  }
  // the old weight-2 edge becomes the weight-0 branch; the straight branch
  // jumps from the split directly to the old upper edge
  for (auto& e : g.edges) {
    if (e.id == seg.edges[0]) e.weight = 0;
    if (e.id == straight) e.lower = lo.id;
    (void)stepped;
  }
  step.result = g;
  return step;
}

// mirror image of the above for a trivalent lower endpoint
inline RewriteStep reduce_trivalent_lower(Wirg& g, const Weight2Segment& seg) {
  const WirgNode lo = *g.node(seg.lower_node);
  const WirgNode up = *g.node(seg.upper_node);
  auto lowers = g.edges_below(lo.id);
  std::sort(lowers.begin(), lowers.end(),
            [](const WirgEdge* a, const WirgEdge* b) { return a->id < b->id; });
  const std::string straight = lowers[0]->id;
  RewriteStep step;
  step.rule = "weight2-reduce";
  step.affected = {seg.edges[0], lo.id, up.id};
  for (auto& n : g.nodes) {
    if (n.id == up.id) {
      n.index = 1;
      n.convexity = Convexity::NA;
      n.saddle_normal = lo.saddle_normal;
    } else if (n.id == lo.id) {
      n.index = 2;
      n.convexity = Convexity::Concave;
      n.saddle_normal = SaddleNormal::NA;
    }
  }
  for (auto& e : g.edges) {
    if (e.id == seg.edges[0]) e.weight = 0;
    if (e.id == straight) e.upper = up.id;
  }
  step.result = g;
  return step;
}

}  // namespace rewritedetail

/// Applies whisker trims and every reducible weight-2 verdict to a fixpoint
/// or until the step budget runs out.  Forbidden configurations are recorded
/// as witness steps without modifying the graph.  `annotations` maps the id
/// of a segment's lowest weight-2 edge to its endpoint annotations.
/// order_seed = -1 applies the deterministic order (birth-death before
/// height-swap before whisker-trim, lowest site first); other seeds pick
/// applicable moves at random, which the confluence tests exercise.
inline SimplifyResult simplify(
    const Wirg& graph,
    const std::map<std::string, std::pair<EndpointAnnotation, EndpointAnnotation>>& annotations = {},
    int budget = 10000, int order_seed = -1) {
  SimplifyResult res;
  res.graph = graph;
  std::set<std::string> witnessed;
  int steps = 0;
  std::mt19937_64 rng(order_seed < 0 ? 0 : static_cast<uint64_t>(order_seed));

  while (true) {
    // gather applicable moves; priority birth-death > height-swap (and other
    // weight-2 reductions) > whisker-trim, then lowest site
    struct Move {
      int priority;
      double height;
      std::string key;
      Weight2Segment seg;
      Weight2Verdict verdict;
      bool is_whisker = false;
      rewritedetail::WhiskerSite site;
    };
    std::vector<Move> moves;

    for (auto& seg : find_weight2_segments(res.graph)) {
      auto it = annotations.find(seg.edges[0]);
      if (it != annotations.end()) {
        seg.lower_type = it->second.first;
        seg.upper_type = it->second.second;
      }
      if (!seg.lower_type || !seg.upper_type) continue;  // unannotated: leave alone
      if (!seg.interior_nodes.empty()) continue;         // trim branches first
      Weight2Verdict v = classify_weight2_segment(res.graph, seg);
      double h = res.graph.node(seg.lower_node)->height;
      if (v == Weight2Verdict::ReducibleBirthDeath)
        moves.push_back({0, h, seg.edges[0], seg, v});
      else if (v == Weight2Verdict::ReducibleHeightSwap)
        moves.push_back({1, h, seg.edges[0], seg, v});
      else if ((v == Weight2Verdict::ForbiddenCompressingDisk ||
                v == Weight2Verdict::ForbiddenSphere || v == Weight2Verdict::ForbiddenEndPart) &&
               !witnessed.count(seg.edges[0])) {
        RewriteStep step;
        step.rule = v == Weight2Verdict::ForbiddenSphere ? "sphere-witness" : "compressing-disk-witness";
        step.affected = {seg.edges[0], seg.lower_node, seg.upper_node};
        step.result = res.graph;
        res.trace.push_back(std::move(step));
        witnessed.insert(seg.edges[0]);
      }
    }
    for (const auto& site : rewritedetail::whisker_sites(res.graph)) {
      Move m;
      m.priority = 2;
      m.height = site.height;
      m.key = site.whisker_node;
      m.is_whisker = true;
      m.site = site;
      moves.push_back(std::move(m));
    }
    if (moves.empty()) break;
    if (steps >= budget) {
      res.budget_exhausted = true;  // applicable moves remain
      break;
    }
    std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
      return std::tie(a.priority, a.height, a.key) < std::tie(b.priority, b.height, b.key);
    });
    const Move& m = order_seed < 0 ? moves.front() : moves[rng() % moves.size()];
    if (m.is_whisker) {
      RewriteStep step;
      step.rule = "whisker-trim";
      step.affected = {m.site.whisker_node, m.site.saddle_node, m.site.whisker_edge};
      rewritedetail::apply_whisker_trim(res.graph, m.site);
      step.result = res.graph;
      res.trace.push_back(std::move(step));
    } else {
      bool lower_trivalent = res.graph.edges_below(m.seg.lower_node).size() == 2;
      bool upper_trivalent = res.graph.edges_above(m.seg.upper_node).size() == 2;
      if (!lower_trivalent && !upper_trivalent)
        res.trace.push_back(rewritedetail::reduce_bivalent_segment(res.graph, m.seg, m.verdict));
      else if (upper_trivalent && !lower_trivalent)
        res.trace.push_back(rewritedetail::reduce_trivalent_upper(res.graph, m.seg));
      else if (lower_trivalent && !upper_trivalent)
        res.trace.push_back(rewritedetail::reduce_trivalent_lower(res.graph, m.seg));
      else {
        // both ends trivalent: survivors only, nothing to do
        break;
      }
    }
    ++steps;
  }
  return res;
}

// ---- canonical form (isomorphism up to heights) ---------------------------

/// Canonical string of a WIRG under isomorphisms that preserve edge
/// direction, weights, indices and convexity but not exact heights.  Small
/// graphs only (refinement plus backtracking).
inline std::string canonical_signature(const Wirg& g) {
  int n = static_cast<int>(g.nodes.size());
  std::map<std::string, int> idx;
  for (int i = 0; i < n; ++i) idx[g.nodes[i].id] = i;

  // initial colors from local data
  std::vector<std::string> color(n);
  for (int i = 0; i < n; ++i) {
    const auto& node = g.nodes[i];
    std::vector<std::string> inc;
    for (const auto& e : g.edges) {
      if (e.lower == node.id) inc.push_back("u" + std::to_string(e.weight));
      if (e.upper == node.id) inc.push_back("d" + std::to_string(e.weight));
    }
    std::sort(inc.begin(), inc.end());
    std::string c = "i" + (node.index ? std::to_string(*node.index) : "-") +
                    std::string(to_string(node.convexity))[0] + ":";
    for (const auto& s : inc) c += s + ",";
    color[i] = c;
  }
  // refine by neighborhood colors
  for (int round = 0; round < n; ++round) {
    std::vector<std::string> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> nb;
      for (const auto& e : g.edges) {
        if (e.lower == g.nodes[i].id) nb.push_back("U" + std::to_string(e.weight) + color[idx[e.upper]]);
        if (e.upper == g.nodes[i].id) nb.push_back("D" + std::to_string(e.weight) + color[idx[e.lower]]);
      }
      std::sort(nb.begin(), nb.end());
      next[i] = color[i] + "|";
      for (const auto& s : nb) next[i] += s;
    }
    color = next;
  }
  // order nodes by refined color; break remaining ties by trying all permutations of
  // tied blocks and keeping the lexicographically smallest encoding
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return color[a] < color[b]; });

  auto encode = [&](const std::vector<int>& perm) {
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[perm[i]] = i;
    std::vector<std::string> lines;
    for (const auto& e : g.edges)
      lines.push_back(std::to_string(rank[idx[e.lower]]) + ">" + std::to_string(rank[idx[e.upper]]) +
                      "w" + std::to_string(e.weight));
    std::sort(lines.begin(), lines.end());
    std::string s;
    for (int i = 0; i < n; ++i) s += color[perm[i]].substr(0, 8) + ";";
    for (const auto& l : lines) s += l + ";";
    return s;
  };

  // permute within tied color blocks (blocks are tiny in practice)
  std::string best = encode(order);
  std::vector<std::pair<int, int>> blocks;
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || color[order[i]] != color[order[start]]) {
      if (i - start > 1) blocks.emplace_back(start, i);
      start = i;
    }
  }
  std::function<void(size_t)> permute_blocks = [&](size_t bi) {
    if (bi == blocks.size()) {
      best = std::min(best, encode(order));
      return;
    }
    auto [lo, hi] = blocks[bi];
    std::sort(order.begin() + lo, order.begin() + hi);
    do {
      permute_blocks(bi + 1);
    } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
  };
  if (!blocks.empty())
    permute_blocks(0);
  return best;
}

}  // namespace bdomain

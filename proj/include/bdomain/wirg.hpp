#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdomain/errors.hpp"
#include "bdomain/morse.hpp"

namespace bdomain {

/// Weighted indexed Reeb graph: the solid Reeb graph with per-edge weight
/// (1 - Euler characteristic of the level-set component, i.e. its hole
/// count) and per-vertex critical data.  A standalone validated model,
/// independent of any mesh.
struct WirgNode {
  std::string id;
  double height = 0.0;
  std::optional<int> index;  // 0, 1, 2, or unset
  Convexity convexity = Convexity::NA;
  SaddleNormal saddle_normal = SaddleNormal::NA;
};

struct WirgEdge {
  std::string id;
  std::string lower;
  std::string upper;
  int weight = 0;
};

struct Wirg {
  std::vector<WirgNode> nodes;
  std::vector<WirgEdge> edges;

  const WirgNode* node(const std::string& id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const WirgEdge* edge(const std::string& id) const {
    for (const auto& e : edges)
      if (e.id == id) return &e;
    return nullptr;
  }

  std::vector<const WirgEdge*> edges_below(const std::string& node_id) const {
    std::vector<const WirgEdge*> out;
    for (const auto& e : edges)
      if (e.upper == node_id) out.push_back(&e);
    return out;
  }
  std::vector<const WirgEdge*> edges_above(const std::string& node_id) const {
    std::vector<const WirgEdge*> out;
    for (const auto& e : edges)
      if (e.lower == node_id) out.push_back(&e);
    return out;
  }
  int degree(const std::string& node_id) const {
    int d = 0;
    for (const auto& e : edges) d += (e.lower == node_id) + (e.upper == node_id);
    return d;
  }

  int max_weight() const {
    int w = 0;
    for (const auto& e : edges) w = std::max(w, e.weight);
    return w;
  }

  /// Sorts nodes by (height, id) and edges by (lower, upper, id).
  void canonicalize() {
    std::sort(nodes.begin(), nodes.end(), [](const WirgNode& a, const WirgNode& b) {
      return a.height != b.height ? a.height < b.height : a.id < b.id;
    });
    std::sort(edges.begin(), edges.end(), [](const WirgEdge& a, const WirgEdge& b) {
      return std::tie(a.lower, a.upper, a.id) < std::tie(b.lower, b.upper, b.id);
    });
  }
};

struct WirgViolation {
  std::string rule;     // stable rule id
  std::string subject;  // node or edge id
  std::string detail;
};

inline bool wirg_connected(const Wirg& g) {
  if (g.nodes.empty()) return false;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : g.edges) {
    adj[e.lower].push_back(e.upper);
    adj[e.upper].push_back(e.lower);
  }
  std::set<std::string> seen{g.nodes[0].id};
  std::vector<std::string> stack{g.nodes[0].id};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (const auto& u : adj[v])
      if (seen.insert(u).second) stack.push_back(u);
  }
  return seen.size() == g.nodes.size();
}

/// Checks every WIRG invariant; a clean graph returns an empty list.
/// Violations are data, not errors.
inline std::vector<WirgViolation> validate(const Wirg& g) {
  std::vector<WirgViolation> out;
  if (g.nodes.empty()) {
    out.push_back({"connectivity", "", "graph has no nodes"});
    return out;
  }

  {
    std::set<std::string> ids;
    for (const auto& n : g.nodes)
      if (!ids.insert(n.id).second) out.push_back({"duplicate-id", n.id, "node id repeats"});
    std::set<std::string> eids;
    for (const auto& e : g.edges) {
      if (!eids.insert(e.id).second) out.push_back({"duplicate-id", e.id, "edge id repeats"});
      if (!g.node(e.lower) || !g.node(e.upper))
        out.push_back({"dangling-edge", e.id, "edge references a missing node"});
    }
    if (!out.empty()) return out;  // structural problems mask the rest
  }

  if (!wirg_connected(g)) out.push_back({"connectivity", g.nodes[0].id, "graph is not connected"});

  for (const auto& e : g.edges) {
    if (g.node(e.lower)->height >= g.node(e.upper)->height)
      out.push_back({"monotone-heights", e.id, "edge does not strictly increase in height"});
    if (e.weight < 0) out.push_back({"weight-range", e.id, "negative weight"});
  }

  for (const auto& n : g.nodes) {
    auto below = g.edges_below(n.id);
    auto above = g.edges_above(n.id);
    int deg = static_cast<int>(below.size() + above.size());
    if (deg == 0 || deg > 3) {
      out.push_back({"degree", n.id, "degree " + std::to_string(deg) + " outside {1,2,3}"});
      continue;
    }
    if (deg == 1) {
      bool bottom = !above.empty();
      int implied = bottom ? 0 : 2;
      if (n.index && *n.index != implied)
        out.push_back({"endpoint-index", n.id,
                       std::string(bottom ? "bottom" : "top") + " endpoint must have index " +
                           std::to_string(implied)});
      const WirgEdge* e = bottom ? above[0] : below[0];
      if (e->weight != 0)
        out.push_back({"endpoint-weight", n.id, "level set at an extremum is a disk; edge " + e->id +
                                                    " has weight " + std::to_string(e->weight)});
    } else if (deg == 2) {
      if (below.size() != 1 || above.size() != 1) {
        out.push_back({"bivalent-step", n.id, "degree-2 node needs one lower and one upper edge"});
        continue;
      }
      int wl = below[0]->weight, wu = above[0]->weight;
      if (std::abs(wl - wu) != 1) {
        out.push_back({"bivalent-step", n.id,
                       "adjacent weights " + std::to_string(wl) + "," + std::to_string(wu) +
                           " must differ by exactly 1"});
      } else if (n.index) {
        bool up_step = wu == wl + 1;
        if (up_step && *n.index == 2)
          out.push_back({"bivalent-index", n.id, "weight step k -> k+1 requires index 0 or 1"});
        if (!up_step && *n.index == 0)
          out.push_back({"bivalent-index", n.id, "weight step k -> k-1 requires index 2 or 1"});
      }
    } else {  // deg == 3
      if (n.index && *n.index != 1)
        out.push_back({"trivalent-index", n.id, "trivalent node must have index 1"});
      if (below.size() == 2 && above.size() == 1) {
        if (below[0]->weight + below[1]->weight != above[0]->weight)
          out.push_back({"weight-sum", n.id,
                         "lower weights " + std::to_string(below[0]->weight) + "+" +
                             std::to_string(below[1]->weight) + " != upper " +
                             std::to_string(above[0]->weight)});
      } else if (below.size() == 1 && above.size() == 2) {
        if (above[0]->weight + above[1]->weight != below[0]->weight)
          out.push_back({"weight-sum", n.id,
                         "upper weights " + std::to_string(above[0]->weight) + "+" +
                             std::to_string(above[1]->weight) + " != lower " +
                             std::to_string(below[0]->weight)});
      } else {
        out.push_back({"weight-sum", n.id, "trivalent node needs a 2+1 lower/upper split"});
      }
    }
  }
  return out;
}

/// First Betti number E - V + 1 of a connected graph.
inline int betti1(const Wirg& g) {
  if (!wirg_connected(g))
    throw NotConnectedError("betti1 requires a connected graph");
  return static_cast<int>(g.edges.size()) - static_cast<int>(g.nodes.size()) + 1;
}

// ---- canonical JSON codec ----------------------------------------------

inline nlohmann::json encode(const Wirg& graph) {
  Wirg g = graph;
  g.canonicalize();
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : g.nodes) {
    nlohmann::json jn;
    jn["id"] = n.id;
    jn["height"] = n.height;
    jn["index"] = n.index ? nlohmann::json(*n.index) : nlohmann::json(nullptr);
    jn["convexity"] =
        n.convexity == Convexity::NA ? nlohmann::json(nullptr) : nlohmann::json(to_string(n.convexity));
    jn["saddle_normal"] = n.saddle_normal == SaddleNormal::NA
                              ? nlohmann::json(nullptr)
                              : nlohmann::json(to_string(n.saddle_normal));
    nodes.push_back(jn);
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) {
    nlohmann::json je;
    je["id"] = e.id;
    je["lower"] = e.lower;
    je["upper"] = e.upper;
    je["weight"] = e.weight;
    edges.push_back(je);
  }
  return nlohmann::json{{"nodes", nodes}, {"edges", edges}};
}

namespace detail {

inline void require(bool ok, const std::string& pointer, const std::string& what) {
  if (!ok) throw SchemaError(what + " at " + pointer);
}

}  // namespace detail

inline Wirg decode(const nlohmann::json& j) {
  using detail::require;
  require(j.is_object(), "/", "document must be an object");
  require(j.contains("nodes") && j["nodes"].is_array(), "/nodes", "missing node array");
  require(j.contains("edges") && j["edges"].is_array(), "/edges", "missing edge array");
  Wirg g;
  int i = 0;
  for (const auto& jn : j["nodes"]) {
    std::string at = "/nodes/" + std::to_string(i++);
    require(jn.is_object(), at, "node must be an object");
    require(jn.contains("id") && jn["id"].is_string(), at + "/id", "node id must be a string");
    require(jn.contains("height") && jn["height"].is_number(), at + "/height", "height must be a number");
    WirgNode n;
    n.id = jn["id"].get<std::string>();
    n.height = jn["height"].get<double>();
    if (jn.contains("index") && !jn["index"].is_null()) {
      require(jn["index"].is_number_integer(), at + "/index", "index must be 0, 1 or 2");
      int idx = jn["index"].get<int>();
      require(idx >= 0 && idx <= 2, at + "/index", "index must be 0, 1 or 2");
      n.index = idx;
    }
    if (jn.contains("convexity") && !jn["convexity"].is_null()) {
      std::string c = jn["convexity"].get<std::string>();
      require(c == "convex" || c == "concave", at + "/convexity", "convexity must be convex or concave");
      n.convexity = c == "convex" ? Convexity::Convex : Convexity::Concave;
    }
    if (jn.contains("saddle_normal") && !jn["saddle_normal"].is_null()) {
      std::string sn = jn["saddle_normal"].get<std::string>();
      require(sn == "up" || sn == "down", at + "/saddle_normal", "saddle_normal must be up or down");
      n.saddle_normal = sn == "up" ? SaddleNormal::Up : SaddleNormal::Down;
    }
    g.nodes.push_back(n);
  }
  i = 0;
  for (const auto& je : j["edges"]) {
    std::string at = "/edges/" + std::to_string(i++);
    require(je.is_object(), at, "edge must be an object");
    require(je.contains("id") && je["id"].is_string(), at + "/id", "edge id must be a string");
    require(je.contains("lower") && je["lower"].is_string(), at + "/lower", "lower must be a string");
    require(je.contains("upper") && je["upper"].is_string(), at + "/upper", "upper must be a string");
    require(je.contains("weight") && je["weight"].is_number_integer(), at + "/weight",
            "weight must be an integer");
    WirgEdge e;
    e.id = je["id"].get<std::string>();
    e.lower = je["lower"].get<std::string>();
    e.upper = je["upper"].get<std::string>();
    e.weight = je["weight"].get<int>();
    require(e.weight >= 0, at + "/weight", "weight must be nonnegative");
    g.edges.push_back(e);
  }
  for (const auto& e : g.edges) {
    detail::require(g.node(e.lower) != nullptr, "/edges", "edge " + e.id + " lower node missing");
    detail::require(g.node(e.upper) != nullptr, "/edges", "edge " + e.id + " upper node missing");
  }
  return g;
}

inline std::string to_dot(const Wirg& graph, const std::string& title = "wirg") {
  Wirg g = graph;
  g.canonicalize();
  std::ostringstream os;
  os << "graph \"" << title << "\" {\n";
  os << "  rankdir=BT;\n";
  for (const auto& n : g.nodes) {
    os << "  \"" << n.id << "\" [label=\"" << n.id << "\\nh=" << n.height;
    if (n.index) os << " i=" << *n.index;
    if (n.convexity != Convexity::NA) os << " " << to_string(n.convexity);
    os << "\"];\n";
  }
  for (const auto& e : g.edges)
    os << "  \"" << e.lower << "\" -- \"" << e.upper << "\" [label=\"" << e.weight << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace bdomain

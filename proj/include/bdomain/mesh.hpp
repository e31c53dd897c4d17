#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "bdomain/errors.hpp"
#include "bdomain/vec3.hpp"

namespace bdomain {

using Triangle = std::array<int, 3>;

/// Closed oriented triangulated surface bounding a domain.  Triangle winding
/// gives the outward normal (right-hand rule); the domain is the bounded
/// component of the complement.
struct TriSurface {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string name;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  Aabb bounds() const {
    Aabb b;
    for (const auto& v : vertices) b.expand(v);
    return b;
  }

  Vec3 triangle_normal(int t) const {
    const auto& tri = triangles[t];
    return cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
  }
};

inline int euler_characteristic(const TriSurface& s) {
  // V - E + F with E counted through the closed-surface relation 2E = 3F.
  int v = s.vertex_count();
  int f = s.triangle_count();
  int e = 3 * f / 2;
  return v - e + f;
}

inline int genus(const TriSurface& s) { return (2 - euler_characteristic(s)) / 2; }

// Six times the signed enclosed volume; positive iff triangle normals point
// outward.  The surface is closed, so the choice of origin cancels; we still
// recenter for numerical balance.
inline double signed_volume6(const TriSurface& s) {
  Vec3 c{0, 0, 0};
  for (const auto& v : s.vertices) c += v;
  if (!s.vertices.empty()) c = c / static_cast<double>(s.vertices.size());
  double vol = 0.0;
  for (const auto& t : s.triangles) {
    Vec3 a = s.vertices[t[0]] - c, b = s.vertices[t[1]] - c, d = s.vertices[t[2]] - c;
    vol += dot(a, cross(b, d));
  }
  return vol;
}

namespace detail {

struct PairHash {
  size_t operator()(const std::pair<int, int>& p) const {
    return std::hash<int64_t>()((static_cast<int64_t>(p.first) << 32) ^ static_cast<uint32_t>(p.second));
  }
};

}  // namespace detail

/// Undirected edge table of a valid closed surface.  edge_tri[e] are the two
/// incident triangles; edge_verts[e] the endpoints with first < second.
struct EdgeTable {
  std::vector<std::pair<int, int>> edge_verts;
  std::vector<std::pair<int, int>> edge_tri;
  std::unordered_map<std::pair<int, int>, int, detail::PairHash> index;

  int edge_id(int a, int b) const {
    auto it = index.find(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    return it == index.end() ? -1 : it->second;
  }
  int count() const { return static_cast<int>(edge_verts.size()); }
};

inline EdgeTable build_edge_table(const TriSurface& s) {
  EdgeTable et;
  for (int t = 0; t < s.triangle_count(); ++t) {
    const auto& tri = s.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      auto [it, inserted] = et.index.try_emplace(key, et.count());
      if (inserted) {
        et.edge_verts.push_back(key);
        et.edge_tri.emplace_back(t, -1);
      } else {
        et.edge_tri[it->second].second = t;
      }
    }
  }
  return et;
}

/// Checks all TriSurface invariants; throws the named error with a witness
/// simplex on the first failure.
inline void validate_surface(const TriSurface& s) {
  if (s.vertex_count() < 3 || s.triangle_count() < 1)
    throw ParseError("surface needs vertices and triangles, got " +
                     std::to_string(s.vertex_count()) + "/" + std::to_string(s.triangle_count()));

  for (int t = 0; t < s.triangle_count(); ++t) {
    const auto& tri = s.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= s.vertex_count())
        throw ParseError("triangle " + std::to_string(t) + " references vertex " + std::to_string(tri[k]));
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw DegenerateError("triangle " + std::to_string(t) + " repeats a vertex");
    if (norm2(s.triangle_normal(t)) == 0.0)
      throw DegenerateError("triangle " + std::to_string(t) + " has zero area");
  }

  {
    std::unordered_map<std::pair<int, int>, int, detail::PairHash> seen;
    // quantize exact coordinates; coincident points are exact duplicates
    std::map<std::array<double, 3>, int> coords;
    for (int v = 0; v < s.vertex_count(); ++v) {
      auto [it, inserted] = coords.try_emplace({s.vertices[v].x, s.vertices[v].y, s.vertices[v].z}, v);
      if (!inserted)
        throw DegenerateError("vertices " + std::to_string(it->second) + " and " + std::to_string(v) +
                              " coincide");
    }
  }

  // Closed + consistently oriented: every directed edge appears exactly once
  // and its reverse appears exactly once.
  std::unordered_map<std::pair<int, int>, int, detail::PairHash> directed;
  for (int t = 0; t < s.triangle_count(); ++t) {
    const auto& tri = s.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (!directed.try_emplace({a, b}, t).second)
        throw NotOrientedError("directed edge (" + std::to_string(a) + "," + std::to_string(b) +
                               ") appears twice; second in triangle " + std::to_string(t));
    }
  }
  for (const auto& [e, t] : directed) {
    if (directed.find({e.second, e.first}) == directed.end())
      throw NotClosedError("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                           ") of triangle " + std::to_string(t) + " has one incident triangle");
  }

  // Connectivity over vertices through edges.
  {
    std::vector<std::vector<int>> adj(s.vertex_count());
    for (const auto& [e, t] : directed) adj[e.first].push_back(e.second);
    std::vector<char> seen(s.vertex_count(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : adj[v])
        if (!seen[u]) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
    }
    if (reached != s.vertex_count()) {
      int witness = 0;
      while (seen[witness]) ++witness;
      throw NotConnectedError("vertex " + std::to_string(witness) + " unreachable from vertex 0 (" +
                              std::to_string(reached) + "/" + std::to_string(s.vertex_count()) + " reached)");
    }
  }

  if (signed_volume6(s) <= 0.0)
    throw NotOrientedError("signed volume is non-positive; normals point inward");
}

enum class MeshFormat { Off, Obj };

inline MeshFormat format_from_path(const std::string& path) {
  auto dotpos = path.find_last_of('.');
  std::string ext = dotpos == std::string::npos ? "" : path.substr(dotpos + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == "off") return MeshFormat::Off;
  if (ext == "obj") return MeshFormat::Obj;
  throw ParseError("cannot infer mesh format from path: " + path);
}

inline TriSurface parse_off(std::istream& in, const std::string& name) {
  TriSurface s;
  s.name = name;
  std::string line;
  auto next_data_line = [&](std::string& out) -> bool {
    while (std::getline(in, out)) {
      auto h = out.find('#');
      if (h != std::string::npos) out = out.substr(0, h);
      if (out.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_data_line(line)) throw ParseError("empty OFF file");
  {
    std::istringstream ls(line);
    std::string magic;
    ls >> magic;
    if (magic != "OFF") throw ParseError("missing OFF header, got '" + magic + "'");
  }
  if (!next_data_line(line)) throw ParseError("missing OFF counts line");
  int nv = 0, nf = 0, ne = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> nv >> nf >> ne)) throw ParseError("bad OFF counts line: " + line);
  }
  s.vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    if (!next_data_line(line)) throw ParseError("unexpected EOF in vertex list");
    std::istringstream ls(line);
    Vec3 v;
    if (!(ls >> v.x >> v.y >> v.z)) throw ParseError("bad vertex line: " + line);
    s.vertices.push_back(v);
  }
  s.triangles.reserve(nf);
  for (int i = 0; i < nf; ++i) {
    if (!next_data_line(line)) throw ParseError("unexpected EOF in face list");
    std::istringstream ls(line);
    int k = 0;
    if (!(ls >> k)) throw ParseError("bad face line: " + line);
    if (k != 3) throw ParseError("face " + std::to_string(i) + " has " + std::to_string(k) +
                                 " vertices; only triangles are supported");
    Triangle t;
    if (!(ls >> t[0] >> t[1] >> t[2])) throw ParseError("bad face line: " + line);
    s.triangles.push_back(t);
  }
  return s;
}

inline TriSurface parse_obj(std::istream& in, const std::string& name) {
  TriSurface s;
  s.name = name;
  std::string line;
  auto face_index = [&](const std::string& tok) -> int {
    // "i", "i/j", "i/j/k", "i//k"; 1-based, negatives relative to end
    std::string first = tok.substr(0, tok.find('/'));
    int idx = 0;
    try {
      idx = std::stoi(first);
    } catch (...) {
      throw ParseError("bad face index token: " + tok);
    }
    if (idx < 0) idx = s.vertex_count() + idx + 1;
    if (idx <= 0 || idx > s.vertex_count()) throw ParseError("face index out of range: " + tok);
    return idx - 1;
  };
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z)) throw ParseError("bad vertex line: " + line);
      s.vertices.push_back(v);
    } else if (kw == "f") {
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (toks.size() != 3)
        throw ParseError("face with " + std::to_string(toks.size()) + " vertices; only triangles are supported");
      s.triangles.push_back({face_index(toks[0]), face_index(toks[1]), face_index(toks[2])});
    }
    // vn/vt/usemtl/... ignored
  }
  return s;
}

/// Loads and fully validates a surface from OFF or OBJ.
inline TriSurface load_surface(const std::string& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  TriSurface s = format == MeshFormat::Off ? parse_off(in, path) : parse_obj(in, path);
  validate_surface(s);
  return s;
}

inline TriSurface load_surface(const std::string& path) { return load_surface(path, format_from_path(path)); }

inline void save_off(const TriSurface& s, std::ostream& out) {
  out << "OFF\n" << s.vertex_count() << " " << s.triangle_count() << " 0\n";
  out.precision(17);
  for (const auto& v : s.vertices) out << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& t : s.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

inline void save_obj(const TriSurface& s, std::ostream& out) {
  out << "# " << s.name << "\n";
  out.precision(17);
  for (const auto& v : s.vertices) out << "v " << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& t : s.triangles) out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

inline void save_surface(const TriSurface& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  if (format_from_path(path) == MeshFormat::Off)
    save_off(s, out);
  else
    save_obj(s, out);
}

}  // namespace bdomain

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <vector>

#include "bdomain/mesh.hpp"
#include "bdomain/vec3.hpp"

namespace bdomain {

/// Extracts {f <= 0} from a scalar field sampled on a regular grid using
/// marching tetrahedra on the Freudenthal (6-tets-per-cube) subdivision.
/// The subdivision is translation-consistent, so shared cube faces carry the
/// same diagonal and the output is watertight.  Triangles are wound so the
/// normal points toward f > 0 (outward).
class ImplicitMesher {
 public:
  ImplicitMesher(Vec3 lo, Vec3 hi, int nx, int ny, int nz)
      : lo_(lo), hi_(hi), nx_(nx), ny_(ny), nz_(nz) {}

  TriSurface extract(const std::function<double(const Vec3&)>& f, const std::string& name) const {
    const int vx = nx_ + 1, vy = ny_ + 1, vz = nz_ + 1;
    std::vector<double> val(static_cast<size_t>(vx) * vy * vz);
    std::vector<Vec3> pos(val.size());
    Vec3 step{(hi_.x - lo_.x) / nx_, (hi_.y - lo_.y) / ny_, (hi_.z - lo_.z) / nz_};
    for (int k = 0; k < vz; ++k)
      for (int j = 0; j < vy; ++j)
        for (int i = 0; i < vx; ++i) {
          size_t id = idx(i, j, k);
          pos[id] = {lo_.x + i * step.x, lo_.y + j * step.y, lo_.z + k * step.z};
          double v = f(pos[id]);
          // keep grid values off the isolevel so cut parameters stay in (0,1)
          if (std::abs(v) < kSnap) v = v >= 0 ? kSnap : -kSnap;
          val[id] = v;
        }

    TriSurface s;
    s.name = name;
    std::unordered_map<uint64_t, int> edge_vertex;
    auto cut_vertex = [&](size_t a, size_t b) -> int {
      if (a > b) std::swap(a, b);
      uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
      auto it = edge_vertex.find(key);
      if (it != edge_vertex.end()) return it->second;
      double t = val[a] / (val[a] - val[b]);
      t = std::min(1.0 - 1e-9, std::max(1e-9, t));
      Vec3 p = pos[a] + (pos[b] - pos[a]) * t;
      int id = s.vertex_count();
      s.vertices.push_back(p);
      edge_vertex.emplace(key, id);
      return id;
    };

    // Kuhn tetrahedra of the unit cube: paths 000 -> 111 through axis steps.
    static const int kTets[6][4] = {
        {0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7}, {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};

    for (int k = 0; k < nz_; ++k)
      for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
          size_t corner[8];
          for (int c = 0; c < 8; ++c)
            corner[c] = idx(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
          for (const auto& tet : kTets) {
            size_t v[4] = {corner[tet[0]], corner[tet[1]], corner[tet[2]], corner[tet[3]]};
            emit_tet(s, val, pos, v, cut_vertex);
          }
        }
    return s;
  }

 private:
  static constexpr double kSnap = 1e-9;

  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(k) * (ny_ + 1) + j) * (nx_ + 1) + i;
  }

  template <typename CutFn>
  void emit_tet(TriSurface& s, const std::vector<double>& val, const std::vector<Vec3>& pos,
                const size_t v[4], CutFn& cut_vertex) const {
    int neg[4], npos = 0, nneg = 0;
    int posv[4];
    for (int i = 0; i < 4; ++i) {
      if (val[v[i]] < 0)
        neg[nneg++] = i;
      else
        posv[npos++] = i;
    }
    if (nneg == 0 || npos == 0) return;

    auto add_tri = [&](int a, int b, int c) {
      // orient so the normal points from the negative side to the positive side
      Vec3 pa = s.vertices[a], pb = s.vertices[b], pc = s.vertices[c];
      Vec3 n = cross(pb - pa, pc - pa);
      Vec3 to_pos{0, 0, 0};
      for (int i = 0; i < npos; ++i) to_pos += pos[v[posv[i]]];
      to_pos = to_pos / npos;
      Vec3 from_neg{0, 0, 0};
      for (int i = 0; i < nneg; ++i) from_neg += pos[v[neg[i]]];
      from_neg = from_neg / nneg;
      if (dot(n, to_pos - from_neg) >= 0)
        s.triangles.push_back({a, b, c});
      else
        s.triangles.push_back({a, c, b});
    };

    if (nneg == 1 || npos == 1) {
      int apex = nneg == 1 ? neg[0] : posv[0];
      int others[3], m = 0;
      for (int i = 0; i < 4; ++i)
        if (i != apex) others[m++] = i;
      int c0 = cut_vertex(v[apex], v[others[0]]);
      int c1 = cut_vertex(v[apex], v[others[1]]);
      int c2 = cut_vertex(v[apex], v[others[2]]);
      add_tri(c0, c1, c2);
    } else {
      // 2/2 split: quad across the tet, split along one diagonal
      int a = neg[0], b = neg[1], c = posv[0], d = posv[1];
      int ac = cut_vertex(v[a], v[c]);
      int ad = cut_vertex(v[a], v[d]);
      int bc = cut_vertex(v[b], v[c]);
      int bd = cut_vertex(v[b], v[d]);
      add_tri(ac, ad, bd);
      add_tri(ac, bd, bc);
    }
  }

  Vec3 lo_, hi_;
  int nx_, ny_, nz_;
};

/// Uniform Laplacian smoothing.  Marching-tetrahedra output wobbles at
/// sliver scale, which sprinkles spurious PL critical points over
/// near-horizontal areas; a few averaging passes remove them without
/// changing the topology.
inline void laplacian_smooth(TriSurface& s, int iterations = 8, double lambda = 0.5) {
  std::vector<std::vector<int>> nbr(s.vertex_count());
  for (const auto& t : s.triangles)
    for (int k = 0; k < 3; ++k) {
      nbr[t[k]].push_back(t[(k + 1) % 3]);
      nbr[t[k]].push_back(t[(k + 2) % 3]);
    }
  for (auto& list : nbr) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  std::vector<Vec3> next(s.vertex_count());
  for (int it = 0; it < iterations; ++it) {
    for (int v = 0; v < s.vertex_count(); ++v) {
      Vec3 avg{0, 0, 0};
      for (int u : nbr[v]) avg += s.vertices[u];
      avg = avg / static_cast<double>(nbr[v].size());
      next[v] = s.vertices[v] + (avg - s.vertices[v]) * lambda;
    }
    s.vertices.swap(next);
  }
}

}  // namespace bdomain

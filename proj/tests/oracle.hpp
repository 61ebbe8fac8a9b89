#pragma once

// Brute-force reference computations. They only read adjacency lists and
// piece membership from the library and recompute everything else densely.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "lpemb/graph.hpp"
#include "lpemb/pieces.hpp"

namespace oracle {

using lpemb::MetricGraph;
using lpemb::Vertex;
using Matrix = std::vector<std::vector<int>>;

inline Matrix distance_matrix(const MetricGraph& g) {
  const int n = g.vertex_count();
  Matrix D(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::vector<int> q{s};
    D[s][s] = 0;
    for (std::size_t h = 0; h < q.size(); ++h)
      for (Vertex w : g.neighbors(q[h]))
        if (D[s][w] < 0) {
          D[s][w] = D[s][q[h]] + 1;
          q.push_back(w);
        }
  }
  return D;
}

// Four-point defect, doubled: max over quadruples of (largest - middle pair sum).
inline int four_point_twice(const Matrix& D) {
  const int n = static_cast<int>(D.size());
  int best = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          int s[3] = {D[a][b] + D[c][d], D[a][c] + D[b][d], D[a][d] + D[b][c]};
          std::sort(s, s + 3);
          best = std::max(best, s[2] - s[1]);
        }
  return best;
}

// Every geodesic y -> z by depth-first search on the distance matrix.
inline std::vector<std::vector<Vertex>> geodesics(const MetricGraph& g, const Matrix& D, Vertex y, Vertex z) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur{y};
  std::function<void(Vertex)> go = [&](Vertex v) {
    if (v == z) {
      out.push_back(cur);
      return;
    }
    for (Vertex w : g.neighbors(v))
      if (D[w][z] == D[v][z] - 1) {
        cur.push_back(w);
        go(w);
        cur.pop_back();
      }
  };
  go(y);
  return out;
}

// Simple cycles (as sorted vertex sets) of a small graph, each found once.
inline std::vector<std::vector<Vertex>> simple_cycles(const MetricGraph& g) {
  const int n = g.vertex_count();
  std::set<std::vector<Vertex>> seen;
  std::vector<Vertex> path;
  std::vector<char> on(n, 0);
  std::function<void(Vertex, Vertex)> go = [&](Vertex start, Vertex v) {
    for (Vertex w : g.neighbors(v)) {
      if (w == start && path.size() >= 3) {
        auto c = path;
        std::sort(c.begin(), c.end());
        seen.insert(c);
      }
      if (w > start && !on[w]) {
        on[w] = 1;
        path.push_back(w);
        go(start, w);
        path.pop_back();
        on[w] = 0;
      }
    }
  };
  for (Vertex s = 0; s < n; ++s) {
    on[s] = 1;
    path = {s};
    go(s, s);
    on[s] = 0;
  }
  return {seen.begin(), seen.end()};
}

// Dense hyperbolic embedding: one block of n coordinates per scale.
// Trumpet membership straight from the definition: v on a geodesic from some
// y with d(x,y) <= k, at parameter d(y,v) in [n, 2n], outside B(e, 3 delta).
inline std::vector<double> dense_hyp(const MetricGraph& g, const Matrix& D, Vertex x,
                                     const std::vector<int>& scales, int twice_delta,
                                     const std::function<double(std::int64_t)>& f, double p) {
  const int nv = g.vertex_count();
  const Vertex e = g.basepoint();
  std::vector<double> out(scales.size() * nv, 0.0);
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const int n = scales[s];
    const double w = f(n) / std::pow(n, 1.0 / p);
    for (int k = 0; k <= n / 4; ++k)
      for (Vertex v = 0; v < nv; ++v) {
        if (2 * D[e][v] <= 3 * twice_delta) continue;
        bool hit = false;
        for (Vertex y = 0; y < nv && !hit; ++y) {
          if (D[x][y] > k) continue;
          int t = D[y][v];
          hit = D[y][v] + D[v][e] == D[y][e] && t >= n && t <= 2 * n;
        }
        if (hit) out[s * nv + v] += w / n;
      }
  }
  return out;
}

inline double dense_distance(const std::vector<double>& a, const std::vector<double>& b, double p) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::pow(std::abs(a[j] - b[j]), p);
  return std::pow(s, 1.0 / p);
}

// Boundary data of one point from the definitions, by geodesic enumeration.
struct DenseBoundary {
  int dist = 0;
  std::vector<std::set<Vertex>> by_k;
};

inline std::map<int, DenseBoundary> dense_boundaries(const MetricGraph& g, const Matrix& D,
                                                     const lpemb::PieceSystem& ps, Vertex x, int K) {
  const int nv = g.vertex_count();
  const Vertex e = g.basepoint();
  std::map<int, DenseBoundary> out;
  std::vector<int> dist(ps.size(), 1 << 30);
  for (int i = 0; i < ps.size(); ++i)
    for (Vertex a : ps.piece(i)) dist[i] = std::min(dist[i], D[x][a]);
  struct Dom {
    int piece;
    Vertex entry, exit;
  };
  auto domains = [&](const std::vector<Vertex>& path) {
    std::vector<Dom> ds;
    for (int i = 0; i < ps.size(); ++i) {
      Vertex en = -1, ex = -1;
      for (Vertex v : path)
        if (ps.contains(i, v)) {
          if (en < 0) en = v;
          ex = v;
        }
      if (en >= 0) ds.push_back({i, en, ex});
    }
    return ds;
  };
  int kmax = 0;
  for (int i = 0; i < ps.size(); ++i) kmax = std::max(kmax, dist[i] / 4);
  for (int k = 0; k <= kmax; ++k) {
    std::vector<Dom> all;
    for (Vertex y = 0; y < nv; ++y) {
      if (D[x][y] > k) continue;
      for (const auto& path : geodesics(g, D, y, e)) {
        auto ds = domains(path);
        all.insert(all.end(), ds.begin(), ds.end());
      }
    }
    auto forbidden = [&](int depth) {
      for (const auto& d : all) {
        int lo = D[e][d.exit], hi = D[e][d.entry];
        if (hi - lo + 1 >= 5 * K && depth >= lo + 2 * K && depth <= hi - 2 * K) return true;
      }
      return false;
    };
    for (const auto& d : all) {
      if (k > dist[d.piece] / 4 || forbidden(D[e][d.entry])) continue;
      auto& b = out[d.piece];
      b.dist = dist[d.piece];
      b.by_k.resize(dist[d.piece] / 4 + 1);
      b.by_k[k].insert(d.entry);
    }
  }
  return out;
}

}  // namespace oracle

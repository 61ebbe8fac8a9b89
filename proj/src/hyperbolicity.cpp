#include "lpemb/hyperbolicity.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace lpemb {

std::string HalfInt::str() const {
  std::string s = std::to_string(twice / 2);
  if (twice % 2 != 0) {
    if (twice < 0 && twice / 2 == 0) s = "-0";
    s += ".5";
  }
  return s;
}

HalfInt gromov_product(const MetricGraph& g, Vertex x, Vertex y, Vertex base) {
  return {g.distance(x, base) + g.distance(y, base) - g.distance(x, y)};
}

namespace {

std::vector<std::vector<int>> distance_matrix(const MetricGraph& g) {
  std::vector<std::vector<int>> d(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) d[v] = bfs_row(g, v);
  return d;
}

int four_point_twice(int ab, int cd, int ac, int bd, int ad, int bc) {
  std::array<int, 3> s{ab + cd, ac + bd, ad + bc};
  std::sort(s.begin(), s.end());
  return s[2] - s[1];
}

}  // namespace

FourPointResult four_point_delta(const MetricGraph& g, bool exhaustive, std::size_t samples,
                                 std::uint64_t seed) {
  FourPointResult out;
  const Vertex n = g.vertex_count();
  if (n < 4) return out;
  if (exhaustive) {
    auto d = distance_matrix(g);
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        for (Vertex c = b + 1; c < n; ++c)
          for (Vertex e = c + 1; e < n; ++e) {
            int t = four_point_twice(d[a][b], d[c][e], d[a][c], d[b][e], d[a][e], d[b][c]);
            if (t > out.delta.twice) {
              out.delta.twice = t;
              out.witness = {a, b, c, e};
            }
          }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    Vertex a = pick(rng), b = pick(rng), c = pick(rng), e = pick(rng);
    int t = four_point_twice(g.distance(a, b), g.distance(c, e), g.distance(a, c),
                             g.distance(b, e), g.distance(a, e), g.distance(b, c));
    if (t > out.delta.twice) {
      out.delta.twice = t;
      out.witness = {a, b, c, e};
    }
  }
  return out;
}

namespace {

// Max over points of one side of the distance to the union of the other two.
int triangle_thinness(const MetricGraph& g, LocalBfs& bfs, Vertex x, Vertex y, Vertex z) {
  auto side = [&](Vertex a, Vertex b) { return canonical_geodesic(geodesic_dag(g, a, b)); };
  std::array<std::vector<Vertex>, 3> sides{side(x, y), side(y, z), side(z, x)};
  int worst = 0;
  for (int s = 0; s < 3; ++s) {
    std::vector<Vertex> others;
    for (int t = 0; t < 3; ++t)
      if (t != s) others.insert(others.end(), sides[t].begin(), sides[t].end());
    int reach = static_cast<int>(sides[s].size());
    bfs.run(others, reach);
    for (Vertex p : sides[s]) worst = std::max(worst, bfs.dist(p));
  }
  return worst;
}

}  // namespace

RipsResult rips_delta_estimate(const MetricGraph& g, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("rips estimate needs at least one sample");
  RipsResult out;
  const Vertex n = g.vertex_count();
  LocalBfs bfs(g);
  auto consider = [&](Vertex x, Vertex y, Vertex z) {
    int t = triangle_thinness(g, bfs, x, y, z);
    ++out.triangles;
    if (2 * t > out.delta.twice) {
      out.delta.twice = 2 * t;
      out.witness = {x, y, z};
    }
  };
  const double all = static_cast<double>(n) * n * n;
  if (static_cast<double>(samples) >= all) {
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y = x; y < n; ++y)
        for (Vertex z = y; z < n; ++z) consider(x, y, z);
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    Vertex x = pick(rng), y = pick(rng), z = pick(rng);
    consider(x, y, z);
  }
  return out;
}

RipsResult rips_delta_exact(const MetricGraph& g) {
  RipsResult out;
  const Vertex n = g.vertex_count();
  auto d = distance_matrix(g);
  // BFS order from every sink, for the bottleneck recursion.
  std::vector<std::vector<Vertex>> order(n);
  for (Vertex w = 0; w < n; ++w) {
    order[w].resize(n);
    for (Vertex v = 0; v < n; ++v) order[w][v] = v;
    std::stable_sort(order[w].begin(), order[w].end(),
                     [&](Vertex a, Vertex b) { return d[w][a] < d[w][b]; });
  }
  // far[u][w]: max over geodesics u->w of the distance from p to that geodesic.
  std::vector<std::vector<int>> far(n, std::vector<int>(n));
  for (Vertex p = 0; p < n; ++p) {
    for (Vertex w = 0; w < n; ++w) {
      for (Vertex u : order[w]) {
        if (u == w) {
          far[u][w] = d[p][w];
          continue;
        }
        int best = -1;
        for (Vertex v : g.neighbors(u))
          if (d[w][v] == d[w][u] - 1) best = std::max(best, far[v][w]);
        far[u][w] = std::min(d[p][u], best);
      }
    }
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y = x; y < n; ++y) {
        if (d[x][p] + d[p][y] != d[x][y]) continue;
        for (Vertex z = 0; z < n; ++z) {
          int t = std::min(far[x][z], far[y][z]);
          ++out.triangles;
          if (2 * t > out.delta.twice) {
            out.delta.twice = 2 * t;
            out.witness = {x, y, z};
          }
        }
      }
  }
  return out;
}

HyperbolicityReport hyperbolicity_report(const MetricGraph& g, std::uint64_t seed,
                                         std::size_t samples) {
  HyperbolicityReport r;
  const Vertex n = g.vertex_count();
  const bool small = n <= 200;
  const bool tree = g.edge_count() + 1 == static_cast<std::size_t>(n);
  auto fp = four_point_delta(g, small, 20000, seed);
  r.delta_four_point = fp.delta;
  r.four_point_witness = fp.witness;
  r.four_point_exhaustive = small;
  if (tree) {
    r.delta_rips = {0};
    r.rips_exact = true;
    r.method = "tree: delta = 0";
  } else if (small) {
    auto rr = rips_delta_exact(g);
    r.delta_rips = rr.delta;
    r.rips_witness = rr.witness;
    r.rips_exact = true;
    r.method = "exact thin-triangle constant over all geodesics";
  } else {
    auto rr = rips_delta_estimate(g, samples, seed);
    r.delta_rips = {std::max(rr.delta.twice, fp.delta.twice)};
    r.rips_witness = rr.witness;
    r.method = "max(sampled canonical-triangle estimate, sampled four-point), " +
               std::to_string(samples) + " triangles, seed " + std::to_string(seed);
  }
  return r;
}

StabilityReport check_geodesic_stability(const MetricGraph& g, HalfInt delta, int n,
                                         std::size_t trials, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("stability check needs n >= 1");
  if (2 * n < 3 * delta.twice) throw std::invalid_argument("stability check needs n >= 3*delta");
  StabilityReport report;
  const int reach = (3 * delta.twice) / 2;
  std::vector<Vertex> eligible;
  for (Vertex x = 0; x < g.vertex_count(); ++x)
    if (g.depth(x) >= n) eligible.push_back(x);
  if (trials > 0 && trials < eligible.size()) {
    std::mt19937_64 rng(seed);
    std::vector<Vertex> chosen;
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    for (std::size_t t = 0; t < trials; ++t) chosen.push_back(eligible[pick(rng)]);
    eligible.swap(chosen);
  }
  LocalBfs bfs(g);
  std::vector<Vertex> layer, next;
  std::unordered_set<Vertex> marked;
  for (Vertex x : eligible) {
    // Points at parameter [n, 2n] on geodesics from y in B(x, n/4), tagged by y.
    std::vector<std::pair<Vertex, Vertex>> points;
    for (auto [y, dy] : g.ball(x, n / 4)) {
      (void)dy;
      layer.assign(1, y);
      for (int t = 0; t <= 2 * n && !layer.empty(); ++t) {
        if (t >= n)
          for (Vertex p : layer) points.emplace_back(p, y);
        next.clear();
        for (Vertex v : layer)
          for (Vertex w : g.neighbors(v))
            if (g.depth(w) == g.depth(v) - 1) next.push_back(w);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        layer.swap(next);
      }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end(),
                             [](auto& a, auto& b) { return a.first == b.first; }),
                 points.end());
    auto dag = geodesic_dag(g, x);
    const int dx = g.depth(x);
    for (auto [p, y] : points) {
      ++report.cases;
      bfs.run(p, reach);
      // Is there a geodesic x->e avoiding every window vertex within 3*delta of p?
      std::vector<char> alive(dag.size(), 0);
      auto blocked = [&](std::size_t i) {
        int t = dx - dag.level[i];
        return 2 * t >= n && 2 * t <= 5 * n && bfs.dist(dag.vertices[i]) != kUnreached;
      };
      alive[0] = !blocked(0);
      bool escaped = false;
      for (std::size_t i = 0; i < dag.size(); ++i) {
        if (!alive[i]) continue;
        if (dag.vertices[i] == dag.sink) escaped = true;
        for (Vertex w : dag.parents[i]) {
          auto j = static_cast<std::size_t>(dag.position(w));
          if (!alive[j] && !blocked(j)) alive[j] = 1;
        }
      }
      if (escaped) {
        ++report.violations;
        if (report.witnesses.size() < 16) report.witnesses.push_back({x, y, p, n});
      }
    }
  }
  return report;
}

std::optional<int> scale_cutoff(const MetricGraph& g, Vertex x, Vertex y, HalfInt delta) {
  if (g.depth(x) < g.depth(y)) std::swap(x, y);
  const int dxy = g.distance(x, y);
  if (dxy <= 6 * delta.twice)
    throw std::invalid_argument("scale cutoff needs d(x,y) > 12*delta");
  const int twice_product = g.depth(x) + dxy - g.depth(y);
  const int twice_excess = twice_product - 5 * delta.twice;
  if (twice_excess <= 0) return std::nullopt;
  int k = -1;
  for (int v = twice_excess; v > 1; v >>= 1) ++k;
  return k;
}

}  // namespace lpemb

#include "lpemb/hyp_embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace lpemb {

void TrumpetParams::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("p > 1 required");
  if (delta.twice < 0) throw std::invalid_argument("delta must be >= 0");
  for (int n : scales)
    if (n < 1 || 2 * n < 3 * delta.twice)
      throw std::invalid_argument("scale " + std::to_string(n) + " below max(1, 3*delta)");
}

std::vector<int> default_scales(HalfInt delta, int diameter) {
  int top = 1;
  while (top < std::max(diameter, 1)) top *= 2;
  std::vector<int> out;
  for (int n = 2; n <= std::max(top, 2); n *= 2)
    if (2 * n >= 3 * delta.twice) out.push_back(n);
  return out;
}

namespace {

// kmin[v] = least d(x,y) over y in B(x, kmax) whose geodesics reach v at parameter [n, 2n].
std::vector<std::pair<Vertex, int>> trumpet_kmin(const MetricGraph& g, Vertex x, int kmax, int n,
                                                 HalfInt delta) {
  std::unordered_map<Vertex, int> kmin;
  std::vector<Vertex> layer, next;
  for (auto [y, dy] : g.ball(x, kmax)) {
    layer.assign(1, y);
    for (int t = 0; t <= 2 * n && !layer.empty(); ++t) {
      if (t >= n)
        for (Vertex v : layer)
          if (2 * g.depth(v) > 3 * delta.twice) kmin.emplace(v, dy);
      if (t == 2 * n) break;
      next.clear();
      for (Vertex v : layer)
        for (Vertex w : g.neighbors(v))
          if (g.depth(w) == g.depth(v) - 1) next.push_back(w);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      layer.swap(next);
    }
  }
  std::vector<std::pair<Vertex, int>> out(kmin.begin(), kmin.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Vertex> trumpet_set(const MetricGraph& g, Vertex x, int k, int n, HalfInt delta) {
  if (k < 0 || 4 * k > n) throw std::invalid_argument("trumpet needs 0 <= k <= n/4");
  std::vector<Vertex> out;
  for (auto [v, km] : trumpet_kmin(g, x, k, n, delta)) out.push_back(v);
  return out;
}

std::vector<std::pair<Vertex, int>> trumpet_multiplicities(const MetricGraph& g, Vertex x, int n,
                                                           HalfInt delta) {
  const int kmax = n / 4;
  auto out = trumpet_kmin(g, x, kmax, n, delta);
  for (auto& [v, km] : out) km = kmax - km + 1;
  return out;
}

LpVector level_function(const MetricGraph& g, Vertex x, int n, HalfInt delta, double p) {
  std::vector<LpVector::Entry> entries;
  for (auto [v, c] : trumpet_multiplicities(g, x, n, delta))
    entries.emplace_back(CoordLabel{Space::Level, n, v}, static_cast<double>(c) / n);
  return LpVector(p, std::move(entries));
}

LpVector embed_hyperbolic(const MetricGraph& g, Vertex x, const TrumpetParams& params) {
  std::vector<LpVector::Entry> entries;
  for (int n : params.scales) {
    const double w = params.f(n) / std::pow(static_cast<double>(n), 1.0 / params.p);
    if (w == 0.0) continue;
    for (auto [v, c] : trumpet_multiplicities(g, x, n, params.delta))
      entries.emplace_back(CoordLabel{Space::Level, n, v}, w * c / n);
  }
  return LpVector(params.p, std::move(entries));
}

void BoundTally::record(bool ok, double ratio) {
  ++checks;
  if (!ok) ++violations;
  if (std::isfinite(ratio)) worst_ratio = std::max(worst_ratio, ratio);
}

bool HypLemmaReport::pass() const {
  for (const BoundTally* t : {&trumpet_upper, &trumpet_lower, &level_upper, &level_lower, &level_lipschitz})
    if (t->violations) return false;
  return true;
}

int max_ball_size(const MetricGraph& g, int r) {
  std::size_t best = 1;
  LocalBfs bfs(g);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    bfs.run(v, r);
    best = std::max(best, bfs.visited().size());
  }
  return static_cast<int>(best);
}

HypLemmaReport check_hyp_lemmas(const MetricGraph& g, HalfInt delta, double p,
                                const std::vector<Vertex>& vertices, int scale_min, int scale_max) {
  HypLemmaReport r;
  r.ball_bound = max_ball_size(g, (3 * delta.twice) / 2);
  r.C = 3.0 * r.ball_bound;
  const double tol = kRelTol;
  const double three_delta = 1.5 * delta.twice;
  std::vector<char> listed(g.vertex_count(), 0);
  for (Vertex v : vertices) listed[v] = 1;
  for (int n = std::max(scale_min, 1); n <= scale_max; ++n) {
    if (2 * n < 3 * delta.twice) continue;
    r.scales.push_back(n);
    const int kmax = n / 4;
    std::unordered_map<Vertex, LpVector> H;
    for (Vertex x : vertices) {
      auto kmin = trumpet_kmin(g, x, kmax, n, delta);
      // |F_{x,k,n}| for each k is the number of vertices with kmin <= k.
      std::vector<std::size_t> sizes(kmax + 1, 0);
      for (auto [v, km] : kmin) ++sizes[km];
      for (int k = 1; k <= kmax; ++k) sizes[k] += sizes[k - 1];
      for (int k = 0; k <= kmax; ++k) {
        const double sz = static_cast<double>(sizes[k]);
        r.trumpet_upper.record(sz <= r.C * n * (1 + tol), sz / (r.C * n));
        if (g.depth(x) >= 2 * n)
          r.trumpet_lower.record(sz >= (n - three_delta) * (1 - tol),
                                 sz > 0 ? (n - three_delta) / sz : INFINITY);
      }
      std::vector<LpVector::Entry> entries;
      for (auto [v, km] : kmin)
        entries.emplace_back(CoordLabel{Space::Level, n, v}, static_cast<double>(kmax - km + 1) / n);
      LpVector h(p, std::move(entries));
      const double upper = (kmax + 1) * std::pow(r.C * n, 1.0 / p) / n;
      const double norm = h.norm();
      r.level_upper.record(norm <= upper * (1 + tol), norm / upper);
      if (g.depth(x) >= 2 * n) {
        const double lower = (n - three_delta) / std::pow(4.0, p);
        const double np = h.norm_pow();
        r.level_lower.record(np >= lower * (1 - tol), np > 0 ? lower / np : INFINITY);
      }
      H.emplace(x, std::move(h));
    }
    const double lip = std::pow(4.0 * r.C, 1.0 / p) * std::pow(static_cast<double>(n), -(p - 1.0) / p);
    for (Vertex x : vertices)
      for (Vertex y : g.neighbors(x)) {
        if (y < x || !listed[y]) continue;
        const double d = distance(H.at(x), H.at(y));
        r.level_lipschitz.record(d <= lip * (1 + tol), d / lip);
      }
  }
  return r;
}

DisjointSupportReport check_disjoint_support(const MetricGraph& g, HalfInt delta,
                                             const std::vector<Vertex>& vertices) {
  DisjointSupportReport r;
  std::map<std::pair<Vertex, int>, std::vector<Vertex>> support;
  auto supp = [&](Vertex x, int n) -> const std::vector<Vertex>& {
    auto key = std::make_pair(x, n);
    auto it = support.find(key);
    if (it == support.end()) {
      std::vector<Vertex> s;
      for (auto [v, c] : trumpet_multiplicities(g, x, n, delta)) s.push_back(v);
      it = support.emplace(key, std::move(s)).first;
    }
    return it->second;
  };
  auto overlap = [](const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
      if (*i == *j) return true;
      if (*i < *j) ++i; else ++j;
    }
    return false;
  };
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      Vertex x = vertices[a], y = vertices[b];
      if (g.distance(x, y) <= 6 * delta.twice) continue;
      auto kx = scale_cutoff(g, x, y, delta);
      if (!kx || *kx < 1) continue;
      ++r.pairs;
      for (int j = 1; j <= *kx; ++j) {
        const int n = 1 << j;
        if (2 * n < 3 * delta.twice) continue;
        const bool hit = overlap(supp(x, n), supp(y, n));
        ++r.literal_checks;
        if (hit) {
          ++r.literal_overlaps;
          if (r.literal_witnesses.size() < 8) r.literal_witnesses.push_back({x, y, n});
        }
        if (j <= *kx - 2) {
          ++r.checks;
          if (hit) ++r.violations;
        }
      }
    }
  return r;
}

}  // namespace lpemb

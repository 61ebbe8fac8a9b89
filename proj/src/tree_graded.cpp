#include "lpemb/tree_graded.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace lpemb {

std::vector<std::vector<Vertex>> cyclic_blocks(const MetricGraph& g) {
  const Vertex n = g.vertex_count();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::pair<Vertex, Vertex>> edge_stack;
  std::vector<std::vector<Vertex>> blocks;
  struct Frame {
    Vertex v, parent;
    std::size_t next;
  };
  std::vector<Frame> stack;
  int timer = 0;
  auto pop_block = [&](Vertex u, Vertex v) {
    std::vector<Vertex> vs;
    std::size_t edges = 0;
    while (!edge_stack.empty()) {
      auto e = edge_stack.back();
      edge_stack.pop_back();
      ++edges;
      vs.push_back(e.first);
      vs.push_back(e.second);
      if (e.first == u && e.second == v) break;
    }
    if (edges >= 2) {
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      blocks.push_back(std::move(vs));
    }
  };
  for (Vertex root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto nb = g.neighbors(f.v);
      if (f.next < nb.size()) {
        Vertex w = nb[f.next++];
        if (w == f.parent) continue;
        if (disc[w] < 0) {
          edge_stack.emplace_back(f.v, w);
          disc[w] = low[w] = timer++;
          stack.push_back({w, f.v, 0});
        } else if (disc[w] < disc[f.v]) {
          edge_stack.emplace_back(f.v, w);
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        Vertex v = f.v, parent = f.parent;
        stack.pop_back();
        if (parent >= 0) {
          low[parent] = std::min(low[parent], low[v]);
          if (low[v] >= disc[parent]) pop_block(parent, v);
        }
      }
    }
  }
  return blocks;
}

TGValidation validate_tree_graded(const MetricGraph& g, const PieceSystem& ps) {
  TGValidation r;
  const Vertex n = g.vertex_count();
  for (Vertex v = 0; v < n; ++v)
    if (ps.pieces_of(v).empty()) r.uncovered.push_back(v);

  std::vector<char> mark(n, 0);
  LocalBfs bfs(g);
  for (int i = 0; i < ps.size(); ++i) {
    auto s = ps.piece(i);
    if (s.size() == 1) continue;
    // Connectivity of the induced subgraph via a BFS that never leaves the piece.
    for (Vertex v : s) mark[v] = 1;
    std::vector<Vertex> queue{s.front()};
    mark[s.front()] = 2;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (Vertex w : g.neighbors(queue[h]))
        if (mark[w] == 1) {
          mark[w] = 2;
          queue.push_back(w);
        }
    if (queue.size() != s.size()) r.disconnected_pieces.push_back(i);
    for (Vertex v : s) mark[v] = 0;
  }

  std::map<std::pair<int, int>, std::size_t> shared;
  for (Vertex v = 0; v < n; ++v) {
    auto ids = ps.pieces_of(v);
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) ++shared[{ids[a], ids[b]}];
  }
  for (const auto& [pr, c] : shared) {
    auto [i, j] = pr;
    if (c >= 2) r.overlaps.push_back(pr);
    if (c == ps.piece_size(i)) r.containments.emplace_back(i, j);
    else if (c == ps.piece_size(j)) r.containments.emplace_back(j, i);
  }

  for (auto& block : cyclic_blocks(g)) {
    bool inside = false;
    for (int i : ps.pieces_of(block.front())) {
      bool all = std::all_of(block.begin(), block.end(), [&](Vertex v) { return ps.contains(i, v); });
      if (all) {
        inside = true;
        break;
      }
    }
    if (!inside) r.loose_cycles.push_back(std::move(block));
  }
  return r;
}

TreeGraded::TreeGraded(const MetricGraph& g, const PieceSystem& ps) : g_(&g), ps_(&ps) {
  auto v = validate_tree_graded(g, ps);
  if (!v.pass()) throw GraphError("piece system is not tree-graded");
  build_tree();
}

namespace {

int common_piece(const PieceSystem& ps, Vertex u, Vertex v) {
  auto a = ps.pieces_of(u), b = ps.pieces_of(v);
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return *i;
    if (*i < *j) ++i; else ++j;
  }
  return -1;
}

}  // namespace

TGDecomposition TreeGraded::decompose_path(std::span<const Vertex> path) const {
  if (path.empty() || path.front() != g_->basepoint()) throw GraphError("decomposition needs a path from e");
  if (!is_geodesic(*g_, path)) throw GraphError("decomposition needs a geodesic");
  TGDecomposition d;
  const std::size_t m = path.size() - 1;
  std::vector<int> edge_piece(m);
  for (std::size_t t = 0; t < m; ++t) edge_piece[t] = common_piece(*ps_, path[t], path[t + 1]);
  std::size_t t = 0;
  while (t <= m) {
    bool starts_run = t < m && edge_piece[t] >= 0;
    bool ends_run = t > 0 && edge_piece[t - 1] >= 0;
    if (starts_run) {
      int i = edge_piece[t];
      std::size_t u = t;
      while (u < m && edge_piece[u] == i) ++u;
      d.pieces.push_back(i);
      d.entries.push_back(path[t]);
      d.transitions.push_back(path[u]);
      t = u;
      if (u < m && edge_piece[u] >= 0) continue;  // next run starts at the transition vertex
      ++t;
      continue;
    }
    if (!ends_run) {
      d.pieces.push_back(ps_->pieces_of(path[t]).front());
      d.entries.push_back(path[t]);
      d.transitions.push_back(path[t]);
    }
    ++t;
  }
  for (std::size_t j = 1; j < d.pieces.size(); ++j) {
    if (d.pieces[j] == d.pieces[j - 1]) throw GraphError("decomposition repeats a piece");
    if (g_->depth(d.entries[j]) <= g_->depth(d.entries[j - 1]))
      throw GraphError("decomposition entries not strictly nested");
  }
  return d;
}

TGDecomposition TreeGraded::decompose(Vertex x) const {
  std::vector<Vertex> path{x};
  while (path.back() != g_->basepoint()) {
    Vertex v = path.back(), next = -1;
    for (Vertex w : g_->neighbors(v))
      if (g_->depth(w) == g_->depth(v) - 1) {
        next = w;
        break;  // neighbours are sorted, so this is the smallest id
      }
    path.push_back(next);
  }
  std::reverse(path.begin(), path.end());
  return decompose_path(path);
}

void TreeGraded::build_tree() {
  const Vertex n = g_->vertex_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < ps_->size(); ++i) {
    auto s = ps_->piece(i);
    if (s.size() < 2) continue;
    // In a tree-graded graph d(e_i, v) = d(e, v) - d(e, e_i) on A_i.
    std::map<int, Vertex> level_rep;
    for (Vertex v : s) {
      auto [it, fresh] = level_rep.try_emplace(g_->depth(v), v);
      if (!fresh) parent[find(v)] = find(it->second);
    }
  }
  class_of_.assign(n, -1);
  std::vector<int> root_id(n, -1);
  class_count_ = 0;
  for (Vertex v = 0; v < n; ++v) {
    int r = find(v);
    if (root_id[r] < 0) root_id[r] = class_count_++;
    class_of_[v] = root_id[r];
  }
  auto edges = tree_edges();
  if (edges.size() + 1 != static_cast<std::size_t>(class_count_))
    throw GraphError("e-distance tree quotient contains a cycle");
  std::vector<std::vector<int>> adj(class_count_);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  class_parent_.assign(class_count_, -1);
  class_depth_.assign(class_count_, -1);
  int root = class_of_[g_->basepoint()];
  class_depth_[root] = 0;
  std::vector<int> queue{root};
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (int c : adj[queue[h]])
      if (class_depth_[c] < 0) {
        class_depth_[c] = class_depth_[queue[h]] + 1;
        class_parent_[c] = queue[h];
        queue.push_back(c);
      }
}

std::vector<std::pair<int, int>> TreeGraded::tree_edges() const {
  std::vector<std::pair<int, int>> edges;
  for (Vertex v = 0; v < g_->vertex_count(); ++v)
    for (Vertex w : g_->neighbors(v)) {
      int a = class_of_[v], b = class_of_[w];
      if (a < b) edges.emplace_back(a, b);
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

int TreeGraded::tree_distance(Vertex x, Vertex y) const {
  int a = class_of_[x], b = class_of_[y], d = 0;
  while (a != b) {
    if (class_depth_[a] >= class_depth_[b]) a = class_parent_[a];
    else b = class_parent_[b];
    ++d;
  }
  return d;
}

SplitMetric TreeGraded::split(Vertex x, Vertex y) const {
  SplitMetric s;
  s.sigma_T = tree_distance(x, y);
  auto dx = decompose(x), dy = decompose(y);
  std::map<int, std::pair<Vertex, Vertex>> primed;
  for (std::size_t j = 0; j < dx.pieces.size(); ++j) {
    int i = dx.pieces[j];
    primed[i] = {dx.transitions[j], ps_->anchor(i)};
  }
  for (std::size_t j = 0; j < dy.pieces.size(); ++j) {
    int i = dy.pieces[j];
    auto [it, fresh] = primed.try_emplace(i, ps_->anchor(i), dy.transitions[j]);
    if (!fresh) it->second.second = dy.transitions[j];
  }
  for (const auto& [i, pr] : primed)
    if (pr.first != pr.second) s.sigma_I += g_->distance(pr.first, pr.second);
  return s;
}

BilipschitzReport TreeGraded::check_bilipschitz(const std::vector<Vertex>& vertices) const {
  BilipschitzReport r;
  r.min_ratio = INFINITY;
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      Vertex x = vertices[a], y = vertices[b];
      int d = g_->distance(x, y);
      int dp = split(x, y).d_prime();
      ++r.pairs;
      double ratio = static_cast<double>(dp) / d;
      r.min_ratio = std::min(r.min_ratio, ratio);
      r.max_ratio = std::max(r.max_ratio, ratio);
      if (2 * dp < d || dp > 2 * d) {
        ++r.violations;
        if (r.witnesses.size() < 16) r.witnesses.emplace_back(x, y);
      }
    }
  if (r.pairs == 0) r.min_ratio = 0.0;
  return r;
}

LpVector TreeGraded::phi_T(Vertex x, const CompressionFunction& f, double p) const {
  auto d = decompose(x);
  std::vector<LpVector::Entry> entries;
  const int dx = g_->depth(x);
  for (std::size_t j = 0; j < d.entries.size(); ++j) {
    Vertex ej = d.entries[j];
    int to_x = dx - g_->depth(ej);
    if (to_x == 0) continue;
    int step = (j + 1 < d.entries.size() ? g_->depth(d.entries[j + 1]) : dx) - g_->depth(ej);
    double v = f(to_x) * std::pow(static_cast<double>(step) / to_x, 1.0 / p);
    entries.emplace_back(CoordLabel{Space::TreeRay, 0, ej}, v);
  }
  return LpVector(p, std::move(entries));
}

LpVector TreeGraded::phi_I(Vertex x, const PieceEmbedding& psi, double p) const {
  auto d = decompose(x);
  std::vector<LpVector::Entry> entries;
  for (std::size_t j = 0; j < d.pieces.size(); ++j) {
    int i = d.pieces[j];
    for (auto [key, v] : psi.image(i, d.transitions[j]))
      entries.emplace_back(CoordLabel{Space::PieceImage, i, key}, v);
  }
  return LpVector(p, std::move(entries));
}

LpVector TreeGraded::embed(Vertex x, const PieceEmbedding& psi, const CompressionFunction& f,
                           double p) const {
  return phi_T(x, f, p) + phi_I(x, psi, p);
}

}  // namespace lpemb

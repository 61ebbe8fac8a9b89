#include "lpemb/graph.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace lpemb {

struct MetricGraph::RowCache {
  std::mutex mu;
  std::unordered_map<Vertex, std::shared_ptr<const DistanceRow>> rows;
  std::deque<Vertex> order;
  std::size_t capacity = 64;
};

MetricGraph::MetricGraph() : MetricGraph(std::vector<std::vector<Vertex>>(1), 0) {}

namespace {
std::atomic<std::uint64_t> next_uid{1};
}

MetricGraph::MetricGraph(std::vector<std::vector<Vertex>> adjacency, Vertex basepoint)
    : basepoint_(basepoint), uid_(next_uid++), cache_(std::make_shared<RowCache>()) {
  const auto n = static_cast<Vertex>(adjacency.size());
  if (n == 0) throw GraphError("graph has no vertices");
  if (basepoint < 0 || basepoint >= n) throw GraphError("basepoint out of range");
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  std::size_t total = 0;
  for (Vertex v = 0; v < n; ++v) {
    auto& nb = adjacency[v];
    std::sort(nb.begin(), nb.end());
    for (std::size_t j = 0; j < nb.size(); ++j) {
      if (nb[j] < 0 || nb[j] >= n) throw GraphError("edge endpoint out of range");
      if (nb[j] == v) throw GraphError("loop at vertex " + std::to_string(v));
      if (j > 0 && nb[j] == nb[j - 1])
        throw GraphError("multi-edge " + std::to_string(v) + "-" + std::to_string(nb[j]));
    }
    total += nb.size();
    offsets_[v + 1] = static_cast<std::int64_t>(total);
    max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
  }
  adjacency_.reserve(total);
  for (auto& nb : adjacency) {
    adjacency_.insert(adjacency_.end(), nb.begin(), nb.end());
    std::vector<Vertex>().swap(nb);
  }
  finish();
}

MetricGraph MetricGraph::from_csr(std::vector<std::int64_t> offsets, std::vector<Vertex> adjacency,
                                  Vertex basepoint) {
  if (offsets.size() < 2) throw GraphError("graph has no vertices");
  MetricGraph g;
  g.basepoint_ = basepoint;
  g.uid_ = next_uid++;
  g.cache_ = std::make_shared<RowCache>();
  g.offsets_ = std::move(offsets);
  g.adjacency_ = std::move(adjacency);
  g.max_degree_ = 0;
  g.radius_ = 0;
  const Vertex n = g.vertex_count();
  if (basepoint < 0 || basepoint >= n) throw GraphError("basepoint out of range");
  if (g.offsets_.back() != static_cast<std::int64_t>(g.adjacency_.size()))
    throw GraphError("adjacency offsets inconsistent");
  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    for (std::size_t j = 0; j < nb.size(); ++j) {
      if (nb[j] < 0 || nb[j] >= n) throw GraphError("edge endpoint out of range");
      if (nb[j] == v) throw GraphError("loop at vertex " + std::to_string(v));
      if (j > 0 && nb[j] <= nb[j - 1]) throw GraphError("adjacency rows must be sorted and simple");
    }
    g.max_degree_ = std::max(g.max_degree_, static_cast<int>(nb.size()));
  }
  g.finish();
  return g;
}

void MetricGraph::finish() {
  const Vertex n = vertex_count();
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w : neighbors(v)) {
      auto nw = neighbors(w);
      if (!std::binary_search(nw.begin(), nw.end(), v))
        throw GraphError("asymmetric adjacency " + std::to_string(v) + "->" + std::to_string(w));
    }
  auto row = std::make_shared<DistanceRow>(bfs_row(*this, basepoint_));
  for (Vertex v = 0; v < n; ++v) {
    if ((*row)[v] == kUnreached)
      throw GraphError("graph is disconnected (vertex " + std::to_string(v) + " unreachable)");
    radius_ = std::max(radius_, (*row)[v]);
  }
  depths_ = row;
  std::size_t budget = std::size_t{1} << 27;
  cache_->capacity = std::max<std::size_t>(4, budget / (sizeof(int) * static_cast<std::size_t>(n)));
}

MetricGraph MetricGraph::from_edges(Vertex n, std::span<const std::pair<Vertex, Vertex>> edges,
                                    Vertex basepoint) {
  if (n <= 0) throw GraphError("vertex count must be positive");
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw GraphError("edge " + std::to_string(u) + " " + std::to_string(v) + " out of range");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return MetricGraph(std::move(adj), basepoint);
}

DistanceRow bfs_row(const MetricGraph& g, Vertex source) {
  DistanceRow dist(g.vertex_count(), kUnreached);
  std::vector<Vertex> queue;
  queue.reserve(g.vertex_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    for (Vertex w : g.neighbors(v))
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

std::shared_ptr<const DistanceRow> MetricGraph::distances_from(Vertex v) const {
  if (!valid(v)) throw GraphError("vertex out of range");
  if (v == basepoint_) return depths_;
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->rows.find(v);
    if (it != cache_->rows.end()) return it->second;
  }
  auto row = std::make_shared<const DistanceRow>(bfs_row(*this, v));
  std::lock_guard lock(cache_->mu);
  auto [it, inserted] = cache_->rows.emplace(v, row);
  if (inserted) {
    cache_->order.push_back(v);
    while (cache_->order.size() > cache_->capacity) {
      cache_->rows.erase(cache_->order.front());
      cache_->order.pop_front();
    }
  }
  return it->second;
}

void MetricGraph::set_cache_capacity(std::size_t rows) {
  std::lock_guard lock(cache_->mu);
  cache_->capacity = std::max<std::size_t>(1, rows);
}

std::size_t MetricGraph::cached_rows() const {
  std::lock_guard lock(cache_->mu);
  return cache_->rows.size();
}

int MetricGraph::distance(Vertex u, Vertex v) const {
  if (!valid(u) || !valid(v)) throw GraphError("vertex out of range");
  if (u == v) return 0;
  if (u == basepoint_) return depth(v);
  if (v == basepoint_) return depth(u);
  {
    std::lock_guard lock(cache_->mu);
    if (auto it = cache_->rows.find(u); it != cache_->rows.end()) return (*it->second)[v];
    if (auto it = cache_->rows.find(v); it != cache_->rows.end()) return (*it->second)[u];
  }
  // Bidirectional search; cheap for the short distances the algorithms ask for.
  std::unordered_map<Vertex, int> du{{u, 0}}, dv{{v, 0}};
  std::vector<Vertex> fu{u}, fv{v};
  int ru = 0, rv = 0;
  while (!fu.empty() && !fv.empty()) {
    bool grow_u = fu.size() <= fv.size();
    auto& front = grow_u ? fu : fv;
    auto& mine = grow_u ? du : dv;
    auto& other = grow_u ? dv : du;
    int& r = grow_u ? ru : rv;
    std::vector<Vertex> next;
    int best = -1;
    for (Vertex a : front)
      for (Vertex b : neighbors(a)) {
        if (mine.count(b)) continue;
        mine.emplace(b, r + 1);
        auto it = other.find(b);
        if (it != other.end()) {
          int cand = r + 1 + it->second;
          if (best < 0 || cand < best) best = cand;
        }
        next.push_back(b);
      }
    ++r;
    if (best >= 0) return best;
    front.swap(next);
  }
  throw GraphError("vertices not connected");
}

bool MetricGraph::on_geodesic(Vertex y, Vertex v, Vertex z) const {
  return distance(y, v) + distance(v, z) == distance(y, z);
}

std::vector<std::pair<Vertex, int>> MetricGraph::ball(Vertex center, int radius) const {
  return ball_within(center, radius, -1);
}

std::vector<std::pair<Vertex, int>> MetricGraph::ball_within(Vertex center, int radius,
                                                             int depth_limit) const {
  if (!valid(center)) throw GraphError("vertex out of range");
  thread_local std::unique_ptr<LocalBfs> scratch;
  thread_local std::uint64_t owner = 0;
  if (!scratch || owner != uid_) {
    scratch = std::make_unique<LocalBfs>(*this);
    owner = uid_;
  }
  scratch->run(center, radius, depth_limit);
  std::vector<std::pair<Vertex, int>> out;
  out.reserve(scratch->visited().size());
  for (Vertex v : scratch->visited()) out.emplace_back(v, scratch->dist(v));
  return out;
}

std::string MetricGraph::label(Vertex v) const {
  if (labeler_) return labeler_(v);
  return std::to_string(v);
}

std::optional<Vertex> MetricGraph::find_label(std::string_view word) const {
  if (finder_) return finder_(word);
  return std::nullopt;
}

void MetricGraph::set_labels(std::vector<std::string> labels) {
  if (static_cast<Vertex>(labels.size()) != vertex_count())
    throw GraphError("label count does not match vertex count");
  auto table = std::make_shared<std::vector<std::string>>(std::move(labels));
  auto lookup = std::make_shared<std::unordered_map<std::string, Vertex>>();
  for (Vertex v = 0; v < vertex_count(); ++v) lookup->emplace((*table)[v], v);
  labeler_ = [table](Vertex v) { return (*table)[v]; };
  finder_ = [lookup](std::string_view w) -> std::optional<Vertex> {
    auto it = lookup->find(std::string(w));
    if (it == lookup->end()) return std::nullopt;
    return it->second;
  };
}

void MetricGraph::set_labeler(std::function<std::string(Vertex)> labeler,
                              std::function<std::optional<Vertex>(std::string_view)> finder) {
  labeler_ = std::move(labeler);
  finder_ = std::move(finder);
}

LocalBfs::LocalBfs(const MetricGraph& g)
    : g_(&g), stamp_(g.vertex_count(), 0), dist_(g.vertex_count(), 0) {}

void LocalBfs::run(Vertex source, int radius, int depth_limit) {
  run(std::span<const Vertex>(&source, 1), radius, depth_limit);
}

void LocalBfs::run(std::span<const Vertex> sources, int radius, int depth_limit) {
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  order_.clear();
  for (Vertex s : sources) {
    if (stamp_[s] == generation_) continue;
    stamp_[s] = generation_;
    dist_[s] = 0;
    order_.push_back(s);
  }
  for (std::size_t head = 0; head < order_.size(); ++head) {
    Vertex v = order_[head];
    int dv = dist_[v];
    if (radius >= 0 && dv >= radius) continue;
    for (Vertex w : g_->neighbors(v)) {
      if (stamp_[w] == generation_) continue;
      if (depth_limit >= 0 && g_->depth(w) > depth_limit) continue;
      stamp_[w] = generation_;
      dist_[w] = dv + 1;
      order_.push_back(w);
    }
  }
}

void LocalBfs::run_until(Vertex source, const std::function<bool(Vertex, int)>& visit) {
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  order_.assign(1, source);
  stamp_[source] = generation_;
  dist_[source] = 0;
  for (std::size_t head = 0; head < order_.size(); ++head) {
    Vertex v = order_[head];
    if (visit(v, dist_[v])) return;
    for (Vertex w : g_->neighbors(v)) {
      if (stamp_[w] == generation_) continue;
      stamp_[w] = generation_;
      dist_[w] = dist_[v] + 1;
      order_.push_back(w);
    }
  }
}

int GeodesicDAG::position(Vertex v) const {
  auto it = index.find(v);
  if (it == index.end()) throw GraphError("vertex not in geodesic DAG");
  return it->second;
}

std::span<const Vertex> GeodesicDAG::parents_of(Vertex v) const {
  const auto& p = parents[position(v)];
  return {p.data(), p.size()};
}

double GeodesicDAG::path_count() const {
  std::vector<double> count(vertices.size(), 0.0);
  count[index.at(source)] = 1.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (Vertex w : parents[i]) count[index.at(w)] += count[i];
  return count[index.at(sink)];
}

namespace {

GeodesicDAG build_dag(const MetricGraph& g, Vertex source, Vertex sink, const DistanceRow& to_sink) {
  GeodesicDAG dag;
  dag.source = source;
  dag.sink = sink;
  std::vector<Vertex> frontier{source};
  int lvl = to_sink[source];
  while (!frontier.empty()) {
    std::sort(frontier.begin(), frontier.end());
    std::vector<Vertex> next;
    for (Vertex v : frontier) {
      dag.index.emplace(v, static_cast<int>(dag.vertices.size()));
      dag.vertices.push_back(v);
      dag.level.push_back(lvl);
      std::vector<Vertex> ps;
      if (lvl > 0)
        for (Vertex w : g.neighbors(v))
          if (to_sink[w] == lvl - 1) ps.push_back(w);
      next.insert(next.end(), ps.begin(), ps.end());
      dag.parents.push_back(std::move(ps));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier.swap(next);
    --lvl;
  }
  return dag;
}

}  // namespace

GeodesicDAG geodesic_dag(const MetricGraph& g, Vertex source) {
  if (!g.valid(source)) throw GraphError("vertex out of range");
  return build_dag(g, source, g.basepoint(), g.depths());
}

GeodesicDAG geodesic_dag(const MetricGraph& g, Vertex source, Vertex sink) {
  if (!g.valid(source) || !g.valid(sink)) throw GraphError("vertex out of range");
  if (sink == g.basepoint()) return geodesic_dag(g, source);
  auto row = g.distances_from(sink);
  return build_dag(g, source, sink, *row);
}

std::vector<Vertex> canonical_geodesic(const GeodesicDAG& dag) {
  std::vector<Vertex> path{dag.source};
  Vertex v = dag.source;
  while (v != dag.sink) {
    v = dag.parents_of(v).front();
    path.push_back(v);
  }
  return path;
}

std::vector<Vertex> reverse_canonical_geodesic(const GeodesicDAG& dag) {
  std::vector<Vertex> path{dag.source};
  Vertex v = dag.source;
  while (v != dag.sink) {
    v = dag.parents_of(v).back();
    path.push_back(v);
  }
  return path;
}

std::vector<std::vector<Vertex>> enumerate_geodesics(const GeodesicDAG& dag, std::size_t limit) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> path{dag.source};
  std::vector<std::size_t> choice{0};
  while (!path.empty() && out.size() < limit) {
    Vertex v = path.back();
    if (v == dag.sink) {
      out.push_back(path);
      path.pop_back();
      choice.pop_back();
      if (!choice.empty()) ++choice.back();
      continue;
    }
    auto ps = dag.parents_of(v);
    if (choice.back() >= ps.size()) {
      path.pop_back();
      choice.pop_back();
      if (!choice.empty()) ++choice.back();
      continue;
    }
    path.push_back(ps[choice.back()]);
    choice.push_back(0);
  }
  return out;
}

bool is_geodesic(const MetricGraph& g, std::span<const Vertex> path) {
  if (path.empty()) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto nb = g.neighbors(path[i - 1]);
    if (!std::binary_search(nb.begin(), nb.end(), path[i])) return false;
  }
  return g.distance(path.front(), path.back()) == static_cast<int>(path.size()) - 1;
}

MetricGraph path_graph(Vertex n) {
  if (n < 1) throw GraphError("path needs at least one vertex");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return MetricGraph::from_edges(n, edges, 0);
}

MetricGraph cycle_graph(Vertex n) {
  if (n < 3) throw GraphError("cycle needs at least three vertices");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return MetricGraph::from_edges(n, edges, 0);
}

MetricGraph read_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw GraphError("graph:" + std::to_string(lineno) + ": " + msg);
  };
  std::optional<std::tuple<long, long, long>> header;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::pair<Vertex, std::string>> labels;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string tag;
      long v;
      std::string word;
      if (ls >> tag && tag == "label") {
        if (!(ls >> v >> word)) fail("malformed label line");
        labels.emplace_back(static_cast<Vertex>(v), word);
      }
      continue;
    }
    std::istringstream ls(line);
    if (!header) {
      long n, m, e;
      if (!(ls >> n >> m >> e)) fail("expected header 'n m e0'");
      if (n <= 0 || m < 0 || e < 0 || e >= n) fail("invalid header values");
      header.emplace(n, m, e);
      continue;
    }
    long u, v;
    if (!(ls >> u >> v)) fail("expected edge 'u v'");
    std::string rest;
    if (ls >> rest) fail("trailing tokens on edge line");
    auto n = std::get<0>(*header);
    if (u < 0 || v < 0 || u >= n || v >= n) fail("edge endpoint out of range");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (!header) throw GraphError("graph: missing header");
  auto [n, m, e] = *header;
  if (static_cast<long>(edges.size()) != m)
    throw GraphError("graph: header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  auto g = MetricGraph::from_edges(static_cast<Vertex>(n), edges, static_cast<Vertex>(e));
  if (!labels.empty()) {
    std::vector<std::string> names(n);
    for (Vertex v = 0; v < n; ++v) names[v] = std::to_string(v);
    for (auto& [v, w] : labels) {
      if (v < 0 || v >= n) throw GraphError("graph: label vertex out of range");
      names[v] = w;
    }
    g.set_labels(std::move(names));
  }
  return g;
}

MetricGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const MetricGraph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << ' ' << g.basepoint() << '\n';
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    for (Vertex w : g.neighbors(v))
      if (v < w) out << v << ' ' << w << '\n';
  if (g.has_labels())
    for (Vertex v = 0; v < g.vertex_count(); ++v) out << "# label " << v << ' ' << g.label(v) << '\n';
}

}  // namespace lpemb

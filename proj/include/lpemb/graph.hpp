#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lpemb {

using Vertex = std::int32_t;
using DistanceRow = std::vector<int>;

inline constexpr int kUnreached = -1;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Connected simple undirected graph with a basepoint. Immutable once built;
// distance rows are computed on demand and cached behind a mutex.
class MetricGraph {
 public:
  MetricGraph();
  MetricGraph(std::vector<std::vector<Vertex>> adjacency, Vertex basepoint);

  static MetricGraph from_edges(Vertex n,
                                std::span<const std::pair<Vertex, Vertex>> edges,
                                Vertex basepoint);
  // Adjacency in compressed form; each row must already be sorted.
  static MetricGraph from_csr(std::vector<std::int64_t> offsets, std::vector<Vertex> adjacency,
                              Vertex basepoint);

  Vertex vertex_count() const { return static_cast<Vertex>(offsets_.size()) - 1; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  Vertex basepoint() const { return basepoint_; }
  int max_degree() const { return max_degree_; }
  bool valid(Vertex v) const { return v >= 0 && v < vertex_count(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  // Distance to the basepoint.
  int depth(Vertex v) const { return (*depths_)[v]; }
  const DistanceRow& depths() const { return *depths_; }
  int radius() const { return radius_; }

  std::shared_ptr<const DistanceRow> distances_from(Vertex v) const;
  int distance(Vertex u, Vertex v) const;
  bool on_geodesic(Vertex y, Vertex v, Vertex z) const;

  // Vertices within `radius` of `center` with their distances, in BFS order.
  std::vector<std::pair<Vertex, int>> ball(Vertex center, int radius) const;

  // Same as ball() but BFS never leaves {v : depth(v) <= depth_limit}.
  std::vector<std::pair<Vertex, int>> ball_within(Vertex center, int radius,
                                                   int depth_limit) const;

  bool has_labels() const { return static_cast<bool>(labeler_); }
  std::string label(Vertex v) const;
  std::optional<Vertex> find_label(std::string_view word) const;
  void set_labels(std::vector<std::string> labels);
  void set_labeler(std::function<std::string(Vertex)> labeler,
                   std::function<std::optional<Vertex>(std::string_view)> finder);

  void set_cache_capacity(std::size_t rows);
  std::size_t cached_rows() const;

 private:
  struct RowCache;
  void finish();

  std::vector<std::int64_t> offsets_;
  std::vector<Vertex> adjacency_;
  Vertex basepoint_ = 0;
  int max_degree_ = 0;
  int radius_ = 0;
  std::uint64_t uid_ = 0;
  std::shared_ptr<const DistanceRow> depths_;
  std::shared_ptr<RowCache> cache_;
  std::function<std::string(Vertex)> labeler_;
  std::function<std::optional<Vertex>(std::string_view)> finder_;
};

// Plain BFS over the whole graph.
DistanceRow bfs_row(const MetricGraph& g, Vertex source);

// Reusable per-thread BFS scratch: visiting a region costs O(region), not O(|V|).
class LocalBfs {
 public:
  explicit LocalBfs(const MetricGraph& g);

  // Runs BFS from `source` up to `radius` (negative = unbounded), never
  // entering vertices deeper than `depth_limit` (negative = no limit).
  void run(Vertex source, int radius, int depth_limit = -1);
  // Multi-source variant.
  void run(std::span<const Vertex> sources, int radius, int depth_limit = -1);
  // Unbounded BFS from `source` that stops as soon as `visit(v, dist)` returns true.
  void run_until(Vertex source, const std::function<bool(Vertex, int)>& visit);

  int dist(Vertex v) const { return stamp_[v] == generation_ ? dist_[v] : kUnreached; }
  const std::vector<Vertex>& visited() const { return order_; }

 private:
  const MetricGraph* g_;
  std::vector<std::uint32_t> stamp_;
  std::vector<int> dist_;
  std::vector<Vertex> order_;
  std::uint32_t generation_ = 0;
};

struct GeodesicDAG {
  Vertex source = 0;
  Vertex sink = 0;
  // Vertices of the DAG ordered by decreasing level, ties by id.
  std::vector<Vertex> vertices;
  std::vector<int> level;
  std::vector<std::vector<Vertex>> parents;
  std::unordered_map<Vertex, int> index;

  bool contains(Vertex v) const { return index.count(v) != 0; }
  int position(Vertex v) const;
  std::span<const Vertex> parents_of(Vertex v) const;
  int level_of(Vertex v) const { return level[position(v)]; }
  std::size_t size() const { return vertices.size(); }
  double path_count() const;
};

GeodesicDAG geodesic_dag(const MetricGraph& g, Vertex source);
GeodesicDAG geodesic_dag(const MetricGraph& g, Vertex source, Vertex sink);

// Always follows the smallest-id parent.
std::vector<Vertex> canonical_geodesic(const GeodesicDAG& dag);
// Always follows the largest-id parent.
std::vector<Vertex> reverse_canonical_geodesic(const GeodesicDAG& dag);
// All source-to-sink paths, stopping after `limit` of them.
std::vector<std::vector<Vertex>> enumerate_geodesics(const GeodesicDAG& dag,
                                                     std::size_t limit);

bool is_geodesic(const MetricGraph& g, std::span<const Vertex> path);

MetricGraph path_graph(Vertex n);
MetricGraph cycle_graph(Vertex n);

MetricGraph read_graph(std::istream& in);
MetricGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const MetricGraph& g);

}  // namespace lpemb

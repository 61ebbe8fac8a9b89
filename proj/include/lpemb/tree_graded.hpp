#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpemb/compression.hpp"
#include "lpemb/graph.hpp"
#include "lpemb/lp_vector.hpp"
#include "lpemb/pieces.hpp"

namespace lpemb {

struct TGValidation {
  std::vector<Vertex> uncovered;
  std::vector<int> disconnected_pieces;
  std::vector<std::pair<int, int>> overlaps;     // share >= 2 vertices
  std::vector<std::pair<int, int>> containments;  // first inside second
  // Biconnected components (as vertex lists) with >= 2 edges not inside one piece.
  std::vector<std::vector<Vertex>> loose_cycles;
  bool pass() const {
    return uncovered.empty() && disconnected_pieces.empty() && overlaps.empty() &&
           containments.empty() && loose_cycles.empty();
  }
};

TGValidation validate_tree_graded(const MetricGraph& g, const PieceSystem& ps);

// Vertex sets of the biconnected components that carry at least two edges.
std::vector<std::vector<Vertex>> cyclic_blocks(const MetricGraph& g);

struct TGDecomposition {
  std::vector<int> pieces;         // i_0, ..., i_k
  std::vector<Vertex> transitions;  // x_0, ..., x_k = x
  std::vector<Vertex> entries;      // e_0 = e, ..., e_k
  friend bool operator==(const TGDecomposition&, const TGDecomposition&) = default;
};

class TreeGraded;

struct SplitMetric {
  int sigma_T = 0;
  int sigma_I = 0;
  int d_prime() const { return sigma_T + sigma_I; }
};

struct BilipschitzReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double min_ratio = 0.0, max_ratio = 0.0;  // d' / d over distinct pairs
  std::vector<std::pair<Vertex, Vertex>> witnesses;
  bool pass() const { return violations == 0; }
};

// Tree-graded structure over a validated piece system: decompositions of
// geodesics from e, the e-distance tree, and the maps built on them.
class TreeGraded {
 public:
  // Throws if validation fails.
  TreeGraded(const MetricGraph& g, const PieceSystem& ps);

  const MetricGraph& graph() const { return *g_; }
  const PieceSystem& pieces() const { return *ps_; }

  // Decomposition read off a geodesic path e -> x.
  TGDecomposition decompose_path(std::span<const Vertex> path_from_e) const;
  // Along the canonical geodesic.
  TGDecomposition decompose(Vertex x) const;

  // e-distance tree.
  int tree_classes() const { return class_count_; }
  int tree_class(Vertex v) const { return class_of_[v]; }
  int tree_distance(Vertex x, Vertex y) const;
  std::vector<std::pair<int, int>> tree_edges() const;

  SplitMetric split(Vertex x, Vertex y) const;
  BilipschitzReport check_bilipschitz(const std::vector<Vertex>& vertices) const;

  LpVector phi_T(Vertex x, const CompressionFunction& f, double p) const;
  LpVector phi_I(Vertex x, const PieceEmbedding& psi, double p) const;
  LpVector embed(Vertex x, const PieceEmbedding& psi, const CompressionFunction& f, double p) const;

 private:
  void build_tree();

  const MetricGraph* g_;
  const PieceSystem* ps_;
  std::vector<int> class_of_;
  int class_count_ = 0;
  std::vector<int> class_parent_;
  std::vector<int> class_depth_;
};

}  // namespace lpemb

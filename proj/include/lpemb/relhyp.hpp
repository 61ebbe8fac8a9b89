#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lpemb/compression.hpp"
#include "lpemb/graph.hpp"
#include "lpemb/lp_vector.hpp"
#include "lpemb/pieces.hpp"

namespace lpemb {

struct DomainRecord {
  int piece = -1;
  Vertex entry = -1;  // first vertex of A_i met when walking from the far end
  Vertex exit = -1;   // last such vertex, nearest e
  int length = 0;     // d(exit, entry) + 1
};

// path runs from its source to e.
std::optional<DomainRecord> i_domain(const MetricGraph& g, const PieceSystem& ps,
                                     std::span<const Vertex> path, int piece);

struct DomainTriple {
  Vertex exit;
  Vertex entry;
  int exit_depth;
  int entry_depth;
  int length() const { return entry_depth - exit_depth + 1; }
  friend auto operator<=>(const DomainTriple&, const DomainTriple&) = default;
};

struct DomainProfile {
  int piece = -1;
  Vertex source = -1;
  std::vector<DomainTriple> triples;  // every (exit, entry) realized by some geodesic
  bool can_miss = true;               // some geodesic source -> e avoids A_i
};

// Exact profile by dynamic programming over the geodesic DAG.
DomainProfile domain_profile(const MetricGraph& g, const PieceSystem& ps, const GeodesicDAG& dag,
                             int piece);

struct RelHypOptions {
  int K = 1;
  bool shared_small_space = false;  // phi^s in one shared coordinate space
  bool merged_filter = false;       // one merged forbidden interval per (y, j)
};

// Per-point boundary data for one piece with nonempty boundary.
struct PieceBoundary {
  int piece = -1;
  int dist = 0;                             // d(x, A_i)
  std::vector<std::vector<Vertex>> by_k;    // boundary of G_{x,k}, k = 0..floor(dist/4)
  std::vector<Vertex> all;                  // union over k, sorted
  std::vector<int> count;                   // n_{x,i}(a) for a in all
  std::vector<int> anchor_dist;             // d(a, e_i) for a in all
  int min_depth = 0;                        // d(e, boundary)
  bool relevant = false;                    // i in I_x
  bool primed = false;                      // i in I'_x
  int cap(std::size_t j) const { return std::min(dist, anchor_dist[j] + 1); }  // d_{x,i}(a)
};

struct PointData {
  Vertex x = -1;
  std::vector<PieceBoundary> pieces;  // sorted by piece index
  const PieceBoundary* find(int piece) const;
};

struct RelevantPieces {
  std::vector<int> I;        // I_x
  std::vector<int> I_prime;  // I'_x
  std::map<int, std::vector<Vertex>> boundary;
  std::map<int, int> dists;
};

// Boundary sets, relevant pieces and the two halves of the embedding for a
// graph with pieces. Per-source and per-point data are memoized under a lock.
class RelHyp {
 public:
  RelHyp(const MetricGraph& g, const PieceSystem& ps, RelHypOptions opt = {});

  const MetricGraph& graph() const { return *g_; }
  const PieceSystem& pieces() const { return *ps_; }
  int K() const { return opt_.K; }

  struct SourceData {
    std::vector<int> pieces;                 // pieces meeting DAG(y), sorted
    std::vector<DomainProfile> profiles;     // parallel to pieces
    std::uint64_t forbidden = 0;             // depths excluded by long domains
    const DomainProfile* find(int piece) const;
  };

  std::shared_ptr<const SourceData> source(Vertex y) const;
  std::shared_ptr<const PointData> point(Vertex x) const;

  int piece_distance(Vertex x, int piece) const;
  std::vector<Vertex> boundary_set(Vertex x, int k, int piece) const;
  RelevantPieces relevant_pieces(Vertex x) const;
  int n_xi(Vertex x, int piece, Vertex a) const;

  LpVector small_trumpet(Vertex x, int k, int piece, double p) const;
  LpVector H_small(Vertex x, int piece, double p) const;
  LpVector embed_small(Vertex x, const CompressionFunction& f, double p) const;

  std::pair<int, int> thick_normaliser(Vertex x, int piece) const;  // (a_{x,i}, k_{x,i})
  LpVector H_large(Vertex x, int piece, const PieceEmbedding& psi, double p) const;
  LpVector embed_large(Vertex x, const PieceEmbedding& psi, double p) const;

  LpVector embed(Vertex x, const PieceEmbedding& psi, const CompressionFunction& f, double p) const;

  void clear_caches() const;

 private:
  std::shared_ptr<const SourceData> compute_source(Vertex y) const;
  std::shared_ptr<const PointData> compute_point(Vertex x) const;
  LpVector H_small_of(const PieceBoundary& b, double p, Space space, std::int64_t index,
                      double weight) const;

  const MetricGraph* g_;
  const PieceSystem* ps_;
  RelHypOptions opt_;
  mutable std::mutex mu_;
  mutable std::unordered_map<Vertex, std::shared_ptr<const SourceData>> sources_;
  mutable std::unordered_map<Vertex, std::shared_ptr<const PointData>> points_;
};

struct SpqrWitness {
  int condition = 0;
  Vertex x = -1, y = -1;
  int piece = -1, other = -1;
  int value = 0;
};

struct SpqrReport {
  int K = 1;
  int c1 = 0;             // max diameter of exit sets per piece
  int c2 = 0;             // max entry spread / short-domain bound
  int c3_membership = 0;  // max |{i : x in A_i}|
  int c3_overlap = 0;     // max diam(A_i cap A_j), i != j
  int c4 = 0;             // max |{i in I_x(K) : d(x,A_i) = t}|
  int min_membership = 0;
  std::vector<SpqrWitness> witnesses;  // worst case per condition
  std::optional<int> uniform_K;        // smallest K passing all four, if searched
  bool c1_pass() const { return c1 <= K; }
  bool c2_pass() const { return c2 <= K; }
  bool c3_pass() const { return min_membership >= 1 && c3_membership <= K && c3_overlap <= K; }
  bool c4_pass() const { return c4 <= K; }
  bool pass() const { return c1_pass() && c2_pass() && c3_pass() && c4_pass(); }
};

// Evaluates (C1)-(C4) over the listed vertices (the safe ball). With
// search_limit > 0, also finds the smallest uniform K up to that limit.
SpqrReport check_spqr(const MetricGraph& g, const PieceSystem& ps, const std::vector<Vertex>& vertices,
                      int K, int search_limit = 0);

struct CountStabilityReport {
  int R = 1;
  std::size_t pairs = 0, checks = 0, violations = 0;
  int worst = 0;  // max |n_x - n_y|
  bool pass() const { return violations == 0; }
};

// |n_{x,i}(a) - n_{y,i}(a)| <= 4R over listed pairs with 1 <= d(x,y) <= R.
CountStabilityReport check_count_stability(const RelHyp& rh, const std::vector<Vertex>& vertices, int R);

struct SmallTrumpetReport {
  std::size_t checks = 0;
  std::size_t lower_violations = 0, upper_violations = 0;
  std::size_t skipped_missing_entry = 0;  // canonical geodesic misses A_i
  std::size_t averaged_checks = 0, averaged_violations = 0;  // 4^-p * d_{x,i}
  std::size_t quarter_checks = 0, quarter_failures = 0;      // literal 1/4 * d_{x,i}
  double worst_quarter_ratio = 0.0;  // max of (d/4) / ||H||^p
  bool pass() const { return lower_violations == 0 && upper_violations == 0 && averaged_violations == 0; }
};

// Bounds on ||F_i(x,k)||^p and ||H_i(x)||^p against the canonical entry.
SmallTrumpetReport check_small_trumpets(const RelHyp& rh, const std::vector<Vertex>& vertices, double p);

struct ShapeReport {
  std::size_t checks = 0, skipped = 0;
  double constant = 0.0;  // measured C
  Vertex worst_x = -1, worst_y = -1;
  int worst_piece = -1;
};

// max over adjacent pairs of ||H_i(x)-H_i(y)||^p * d(x,A_i)^p / d_{x,i}(entry).
ShapeReport measure_small_shape(const RelHyp& rh, const std::vector<Vertex>& vertices, double p);
// max over adjacent pairs outside B(e,3K) of ||H'_i(x)-H'_i(y)|| * (d(x,A_i)+1).
ShapeReport measure_large_shape(const RelHyp& rh, const PieceEmbedding& psi,
                                const std::vector<Vertex>& vertices, double p);

}  // namespace lpemb

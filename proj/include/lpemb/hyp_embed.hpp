#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lpemb/compression.hpp"
#include "lpemb/graph.hpp"
#include "lpemb/hyperbolicity.hpp"
#include "lpemb/lp_vector.hpp"

namespace lpemb {

struct TrumpetParams {
  HalfInt delta;
  std::vector<int> scales;
  CompressionFunction f = CompressionFunction::power(0.5);
  double p = 2.0;

  void validate() const;
};

// Powers of two 2^j (j >= 1) with 2^j >= 3*delta, up to 2^ceil(log2 diameter).
std::vector<int> default_scales(HalfInt delta, int diameter);

// F_{x,k,n}: vertices at parameter t in [n, 2n] along some geodesic y -> e with
// d(x,y) <= k, excluding the closed ball B(e, 3*delta).
std::vector<Vertex> trumpet_set(const MetricGraph& g, Vertex x, int k, int n, HalfInt delta);

// For every vertex of F_{x,floor(n/4),n}, the number of k in [0, floor(n/4)]
// whose trumpet contains it. Sorted by vertex.
std::vector<std::pair<Vertex, int>> trumpet_multiplicities(const MetricGraph& g, Vertex x, int n,
                                                           HalfInt delta);

// H(x,n): multiplicity / n on each vertex, namespace (Level, n).
LpVector level_function(const MetricGraph& g, Vertex x, int n, HalfInt delta, double p);

// sum over scales n of f(n) / n^(1/p) * H(x,n).
LpVector embed_hyperbolic(const MetricGraph& g, Vertex x, const TrumpetParams& params);

struct BoundTally {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max of lhs/rhs for upper bounds, rhs/lhs for lower bounds
  void record(bool ok, double ratio);
};

struct HypLemmaReport {
  double C = 0.0;  // 3 * N(3 delta)
  int ball_bound = 0;
  std::vector<int> scales;
  BoundTally trumpet_upper, trumpet_lower;  // |F| <= C n ; |F| >= n - 3 delta
  BoundTally level_upper, level_lower;      // bounds on ||H||
  BoundTally level_lipschitz;               // adjacent pairs
  bool pass() const;
};

// Checks the three norm inequality families at every integer scale in
// [scale_min, scale_max] for each listed vertex (adjacent pairs within the list).
HypLemmaReport check_hyp_lemmas(const MetricGraph& g, HalfInt delta, double p,
                                const std::vector<Vertex>& vertices, int scale_min, int scale_max);

struct DisjointSupportReport {
  std::size_t pairs = 0;
  std::size_t checks = 0;        // (pair, scale) with scale <= 2^(k_x - 2)
  std::size_t violations = 0;
  std::size_t literal_checks = 0;  // (pair, scale) with scale <= 2^(k_x)
  std::size_t literal_overlaps = 0;
  std::vector<std::array<Vertex, 3>> literal_witnesses;  // x, y, scale
  bool pass() const { return violations == 0; }
};

DisjointSupportReport check_disjoint_support(const MetricGraph& g, HalfInt delta,
                                             const std::vector<Vertex>& vertices);

// Largest |B(v, r)| over all vertices.
int max_ball_size(const MetricGraph& g, int r);

}  // namespace lpemb

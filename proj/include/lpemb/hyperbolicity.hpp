#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpemb/graph.hpp"

namespace lpemb {

// Half-integers are carried as doubled ints throughout.
struct HalfInt {
  int twice = 0;
  double value() const { return twice / 2.0; }
  std::string str() const;
  friend bool operator==(HalfInt, HalfInt) = default;
};

// Standard product: (d(x,b) + d(y,b) - d(x,y)) / 2.
HalfInt gromov_product(const MetricGraph& g, Vertex x, Vertex y, Vertex base);

struct HyperbolicityReport {
  HalfInt delta_four_point;
  HalfInt delta_rips;
  bool rips_exact = false;
  bool four_point_exhaustive = false;
  std::string method;
  std::array<Vertex, 4> four_point_witness{};
  std::array<Vertex, 3> rips_witness{};
};

struct FourPointResult {
  HalfInt delta;
  std::array<Vertex, 4> witness{};
};

// Exhaustive when `exhaustive` is set (intended for |V| <= 200), otherwise
// `samples` random quadruples.
FourPointResult four_point_delta(const MetricGraph& g, bool exhaustive,
                                 std::size_t samples = 20000, std::uint64_t seed = 0);

struct RipsResult {
  HalfInt delta;
  std::array<Vertex, 3> witness{};
  std::size_t triangles = 0;
};

// Triangles built from canonical geodesics. Samples are drawn from a fixed
// stream, so a larger count only extends the sampled prefix. When samples
// covers all ordered triples the scan is exhaustive.
RipsResult rips_delta_estimate(const MetricGraph& g, std::size_t samples, std::uint64_t seed = 0);

// Exact thin-triangle constant over all triangles and all geodesic choices.
// Needs the full distance matrix; meant for small graphs.
RipsResult rips_delta_exact(const MetricGraph& g);

// Delta used by the embeddings: exact Rips value up to 200 vertices, 0 on
// trees, otherwise the larger of the sampled Rips and four-point values.
HyperbolicityReport hyperbolicity_report(const MetricGraph& g, std::uint64_t seed = 0,
                                         std::size_t samples = 2000);

struct StabilityViolation {
  Vertex x, y, p;
  int n;
};

struct StabilityReport {
  std::size_t cases = 0;  // (x, n, p) triples examined
  std::size_t violations = 0;
  std::vector<StabilityViolation> witnesses;
  bool pass() const { return violations == 0; }
};

// For x with d(x,e) >= n, y within n/4 of x and p on some geodesic y->e at
// parameter t in [n, 2n], checks that every geodesic x->e passes within 3*delta
// of p somewhere in its parameter window [n/2, 5n/2]. trials == 0 scans every
// eligible x; otherwise `trials` random ones.
StabilityReport check_geodesic_stability(const MetricGraph& g, HalfInt delta, int n,
                                         std::size_t trials = 0, std::uint64_t seed = 0);

// floor(log2(P - 5*delta)) with P = (d(x,e) + d(x,y) - d(y,e)) / 2 after
// ordering so that d(x,e) >= d(y,e). Empty when P <= 5*delta.
std::optional<int> scale_cutoff(const MetricGraph& g, Vertex x, Vertex y, HalfInt delta);

}  // namespace lpemb

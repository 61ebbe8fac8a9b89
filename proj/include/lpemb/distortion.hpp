#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lpemb/graph.hpp"
#include "lpemb/lp_vector.hpp"

namespace lpemb {

struct CurvePoint {
  int r = 0;
  double rho_minus = 0.0;
  double rho_plus = 0.0;
  std::size_t pairs = 0;
};

struct DistortionCurve {
  double p = 2.0;
  std::vector<CurvePoint> points;  // increasing r, only realized distances
  const CurvePoint* at(int r) const;
};

// Exhaustive scan over pairs of `vertices` (images parallel to it). Graph
// distances come from BFS that never goes deeper than `depth_limit`
// (negative = whole graph); pass the list radius for ball-convex groups.
DistortionCurve measure_distortion(const MetricGraph& g, const std::vector<Vertex>& vertices,
                                   const std::vector<LpVector>& images, int depth_limit = -1);

// max ||phi(x) - phi(y)|| over adjacent pairs of the list.
double adjacent_lipschitz(const MetricGraph& g, const std::vector<Vertex>& vertices,
                          const std::vector<LpVector>& images);

// Least-squares slope of log rho_minus against log r over the upper half of
// the distance range (points with rho_minus = 0 dropped). Needs five distances.
double compression_slope(const DistortionCurve& curve);
// The same slope clamped to [0, 1].
double estimate_compression(const DistortionCurve& curve);

struct LowerFit {
  double c = 0.0;
  double c_prime = 0.0;
  double alpha = 0.0;
};

// rho_minus(r) >= c r^alpha - c' for every point of the curve.
LowerFit fit_lower(const DistortionCurve& curve, double alpha);

// max rho_plus(r) / r.
double curve_lipschitz(const DistortionCurve& curve);

// min over points of rho_minus(r) / rho(r), skipping r with rho(r) == 0.
double min_ratio(const DistortionCurve& curve, const std::function<double(int)>& rho);

}  // namespace lpemb

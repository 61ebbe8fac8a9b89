#include "lpemb/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace lpemb {

const CurvePoint* DistortionCurve::at(int r) const {
  auto it = std::lower_bound(points.begin(), points.end(), r,
                             [](const CurvePoint& c, int v) { return c.r < v; });
  return it != points.end() && it->r == r ? &*it : nullptr;
}

DistortionCurve measure_distortion(const MetricGraph& g, const std::vector<Vertex>& vertices,
                                   const std::vector<LpVector>& images, int depth_limit) {
  if (vertices.empty()) throw std::invalid_argument("distortion needs a nonempty vertex list");
  if (images.size() != vertices.size()) throw std::invalid_argument("one image per vertex required");
  DistortionCurve curve;
  curve.p = images.front().p();
  std::map<int, CurvePoint> acc;
  LocalBfs bfs(g);
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    bfs.run(vertices[a], -1, depth_limit);
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      int d = bfs.dist(vertices[b]);
      if (d == kUnreached) throw GraphError("pair not connected inside the depth limit");
      double e = distance(images[a], images[b]);
      auto [it, fresh] = acc.try_emplace(d, CurvePoint{d, e, e, 0});
      it->second.rho_minus = std::min(it->second.rho_minus, e);
      it->second.rho_plus = std::max(it->second.rho_plus, e);
      ++it->second.pairs;
    }
  }
  for (auto& [r, pt] : acc) curve.points.push_back(pt);
  return curve;
}

double adjacent_lipschitz(const MetricGraph& g, const std::vector<Vertex>& vertices,
                          const std::vector<LpVector>& images) {
  std::vector<int> slot(g.vertex_count(), -1);
  for (std::size_t a = 0; a < vertices.size(); ++a) slot[vertices[a]] = static_cast<int>(a);
  double best = 0.0;
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (Vertex w : g.neighbors(vertices[a]))
      if (slot[w] > static_cast<int>(a)) best = std::max(best, distance(images[a], images[slot[w]]));
  return best;
}

double compression_slope(const DistortionCurve& curve) {
  if (curve.points.size() < 5) throw std::invalid_argument("compression estimate needs at least 5 distances");
  const double mid = 0.5 * (curve.points.front().r + curve.points.back().r);
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& c : curve.points) {
    if (c.r < mid || c.r < 1 || c.rho_minus <= 0) continue;
    double x = std::log(c.r), y = std::log(c.rho_minus);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  if (n < 2) throw std::invalid_argument("rho_minus vanishes on the upper half of the distance range");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double estimate_compression(const DistortionCurve& curve) { return std::clamp(compression_slope(curve), 0.0, 1.0); }

LowerFit fit_lower(const DistortionCurve& curve, double alpha) {
  LowerFit fit;
  fit.alpha = alpha;
  std::vector<const CurvePoint*> pts;
  for (const auto& c : curve.points)
    if (c.r >= 1 && c.rho_minus > 0) pts.push_back(&c);
  if (pts.empty()) return fit;
  double s = 0;
  std::size_t from = pts.size() / 2;
  for (std::size_t j = from; j < pts.size(); ++j)
    s += std::log(pts[j]->rho_minus) - alpha * std::log(pts[j]->r);
  fit.c = std::exp(s / static_cast<double>(pts.size() - from));
  for (const auto& c : curve.points)
    fit.c_prime = std::max(fit.c_prime, fit.c * std::pow(c.r, alpha) - c.rho_minus);
  return fit;
}

double curve_lipschitz(const DistortionCurve& curve) {
  double best = 0.0;
  for (const auto& c : curve.points)
    if (c.r >= 1) best = std::max(best, c.rho_plus / c.r);
  return best;
}

double min_ratio(const DistortionCurve& curve, const std::function<double(int)>& rho) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : curve.points) {
    double d = rho(c.r);
    if (c.r >= 1 && d > 0) best = std::min(best, c.rho_minus / d);
  }
  return best;
}

}  // namespace lpemb

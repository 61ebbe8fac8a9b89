#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpemb/config.hpp"
#include "lpemb/graph.hpp"
#include "lpemb/group.hpp"
#include "lpemb/lp_vector.hpp"
#include "lpemb/pieces.hpp"

namespace lpemb {

struct Fixture {
  FixtureSpec spec;
  std::shared_ptr<const CayleyBall> ball;     // group families only
  std::shared_ptr<const MetricGraph> owned;   // paths, cycles, files
  int radius = 0;                             // ball radius, or eccentricity of e
  int safe_radius = 0;
  bool convex = false;                        // BFS may stay inside the safe ball
  std::vector<Vertex> safe;                   // BFS order from e

  const MetricGraph& graph() const { return ball ? ball->graph : *owned; }
  const CayleyBall* cayley() const { return ball.get(); }
  int distance_depth_limit() const { return convex ? safe_radius : -1; }
};

// safe_radius < 0 picks half the ball radius for groups and the whole graph otherwise.
Fixture build_fixture(const FixtureSpec& spec, int safe_radius = -1);

// Pieces for the configured fixture ("auto" follows the family).
PieceSystem build_pieces(const Fixture& fx, const Config& cfg);

// Rounds to 12 significant digits; non-finite values become null.
nlohmann::json json_number(double v);

struct PipelineResult {
  nlohmann::json report;
  bool pass = true;
  std::vector<std::string> written;
};

// Builds the fixture, runs the configured checks and embedding, and writes
// report.json, embedding.csv and curve.csv under cfg.out_dir.
PipelineResult run_pipeline(const Config& cfg);

// Embedding of every safe-ball vertex for the configured map.
std::vector<LpVector> evaluate_embedding(const Fixture& fx, const Config& cfg);

void write_embedding_csv(std::ostream& out, const std::vector<Vertex>& vertices,
                         const std::vector<LpVector>& images);

}  // namespace lpemb

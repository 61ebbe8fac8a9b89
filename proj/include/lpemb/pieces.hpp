#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpemb/graph.hpp"
#include "lpemb/group.hpp"
#include "lpemb/hyp_embed.hpp"

namespace lpemb {

enum class PieceKind : std::uint8_t { Coset, Ball, Listed, Whole };

struct PieceInfo {
  PieceKind kind = PieceKind::Listed;
  int factor = -1;       // peripheral factor for cosets
  int radius = 0;        // neighbourhood radius (cosets) or ball radius
  Vertex center = -1;    // coset representative or ball centre
};

// Indexed cover {A_i} of the vertex set, stored in compressed form so that
// one singleton per vertex stays cheap on million-vertex balls.
class PieceSystem {
 public:
  PieceSystem() = default;

  int size() const { return static_cast<int>(info_.size()); }
  std::span<const Vertex> piece(int i) const {
    return {vertices_.data() + offsets_[i], vertices_.data() + offsets_[i + 1]};
  }
  std::size_t piece_size(int i) const { return offsets_[i + 1] - offsets_[i]; }
  Vertex anchor(int i) const { return anchors_[i]; }
  const PieceInfo& info(int i) const { return info_[i]; }
  std::span<const int> pieces_of(Vertex v) const {
    return {members_.data() + member_offsets_[v], members_.data() + member_offsets_[v + 1]};
  }
  bool contains(int i, Vertex v) const;
  std::string label(int i, const MetricGraph& g) const;
  Vertex vertex_count() const { return static_cast<Vertex>(member_offsets_.size()) - 1; }

  // SPQR constant used by the boundary filter and the relevance cut.
  int K = 1;

  class Builder {
   public:
    explicit Builder(const MetricGraph& g) : g_(&g) {}
    // Vertices need not be sorted; duplicates are removed.
    void add(std::vector<Vertex> vertices, PieceInfo info, std::string label = {});
    void add_singleton(Vertex v);
    // Anchors are the vertices nearest the basepoint, smallest id on ties.
    PieceSystem build(int K = 1);

   private:
    const MetricGraph* g_;
    std::vector<std::int64_t> offsets_{0};
    std::vector<Vertex> vertices_;
    std::vector<PieceInfo> info_;
    std::vector<std::pair<int, std::string>> labels_;
  };

 private:
  std::vector<std::int64_t> offsets_;
  std::vector<Vertex> vertices_;
  std::vector<Vertex> anchors_;
  std::vector<PieceInfo> info_;
  std::vector<std::int64_t> member_offsets_;
  std::vector<int> members_;
  std::vector<std::pair<int, std::string>> labels_;  // sorted by piece index
};

// "label: v1 v2 ..." per line; '#' starts a comment. Vertices may be ids or
// group words when the graph carries labels.
PieceSystem read_pieces(std::istream& in, const MetricGraph& g, int K = 1);
PieceSystem read_pieces_file(const std::string& path, const MetricGraph& g, int K = 1);
void write_pieces(std::ostream& out, const PieceSystem& ps, const MetricGraph& g);

enum class BallPieces { None, Uncovered, All };

struct CosetPieceOptions {
  std::vector<int> factors;  // top-level factor indices treated as peripheral
  int radius = 0;            // neighbourhood radius around each coset
  BallPieces balls = BallPieces::All;
  int ball_radius = 0;
  int K = 1;
};

// Cosets gH of the chosen factors (clipped to the ball), thickened by
// `radius`, plus balls around vertices standing in for the trivial subgroup.
PieceSystem pieces_from_cosets(const CayleyBall& ball, const CosetPieceOptions& opt);

// Adds the singleton {v} for every vertex not yet covered.
PieceSystem with_uncovered_singletons(const PieceSystem& ps, const MetricGraph& g);

PieceSystem whole_graph_piece(const MetricGraph& g, int K = 1);

// Sparse image of a piece map: (key, value) sorted by key.
using SparseImage = std::vector<std::pair<std::int64_t, double>>;

// The per-piece maps psi_i. Images are translated so that psi_i(e_i) = 0.
class PieceEmbedding {
 public:
  virtual ~PieceEmbedding() = default;
  virtual SparseImage image(int piece, Vertex v) const = 0;
  virtual std::string describe(int piece) const = 0;
};

enum class PsiMode { Auto, Indicator, Radial };

// Built-in catalog. Auto: abelian cosets get lattice coordinates (scaled by
// 1/2 from rank 2 on), free-factor cosets a scaled hyperbolic embedding of the
// factor, thickened cosets the coset map after closest-point projection, and
// everything else the indicator 1/2 (delta_v - delta_{e_i}). Radial maps v to
// the single coordinate d(e_i, v).
std::shared_ptr<const PieceEmbedding> make_piece_embedding(const PieceSystem& ps,
                                                           const MetricGraph& g,
                                                           const CayleyBall* ball, PsiMode mode,
                                                           double p);

}  // namespace lpemb

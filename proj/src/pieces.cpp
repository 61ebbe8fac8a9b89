#include "lpemb/pieces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace lpemb {

bool PieceSystem::contains(int i, Vertex v) const {
  auto s = piece(i);
  return std::binary_search(s.begin(), s.end(), v);
}

std::string PieceSystem::label(int i, const MetricGraph& g) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), i,
                             [](const auto& e, int k) { return e.first < k; });
  if (it != labels_.end() && it->first == i) return it->second;
  const PieceInfo& in = info_[i];
  auto name = [&](Vertex v) { return g.has_labels() ? g.label(v) : std::to_string(v); };
  switch (in.kind) {
    case PieceKind::Coset: {
      std::string s = name(in.center) + "H" + std::to_string(in.factor);
      if (in.radius > 0) s = "N" + std::to_string(in.radius) + "(" + s + ")";
      return s;
    }
    case PieceKind::Ball: return "B(" + name(in.center) + "," + std::to_string(in.radius) + ")";
    case PieceKind::Whole: return "X";
    case PieceKind::Listed: return "piece" + std::to_string(i);
  }
  return {};
}

void PieceSystem::Builder::add(std::vector<Vertex> vertices, PieceInfo info, std::string label) {
  if (vertices.empty()) throw GraphError("empty piece");
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  for (Vertex v : vertices)
    if (!g_->valid(v)) throw GraphError("piece vertex " + std::to_string(v) + " out of range");
  if (!label.empty()) labels_.emplace_back(static_cast<int>(info_.size()), std::move(label));
  vertices_.insert(vertices_.end(), vertices.begin(), vertices.end());
  offsets_.push_back(static_cast<std::int64_t>(vertices_.size()));
  info_.push_back(info);
}

void PieceSystem::Builder::add_singleton(Vertex v) {
  if (!g_->valid(v)) throw GraphError("piece vertex out of range");
  vertices_.push_back(v);
  offsets_.push_back(static_cast<std::int64_t>(vertices_.size()));
  info_.push_back({PieceKind::Ball, -1, 0, v});
}

PieceSystem PieceSystem::Builder::build(int K) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  PieceSystem ps;
  ps.K = K;
  ps.offsets_ = std::move(offsets_);
  ps.vertices_ = std::move(vertices_);
  ps.info_ = std::move(info_);
  ps.labels_ = std::move(labels_);
  const int n = static_cast<int>(ps.info_.size());
  ps.anchors_.resize(n);
  const Vertex nv = g_->vertex_count();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(nv) + 1, 0);
  for (int i = 0; i < n; ++i) {
    Vertex best = -1;
    for (Vertex v : ps.piece(i)) {
      ++counts[v + 1];
      if (best < 0 || g_->depth(v) < g_->depth(best)) best = v;  // ids ascend, so ties keep the smaller
    }
    ps.anchors_[i] = best;
  }
  for (Vertex v = 0; v < nv; ++v) counts[v + 1] += counts[v];
  ps.member_offsets_ = counts;
  ps.members_.resize(ps.vertices_.size());
  for (int i = 0; i < n; ++i)
    for (Vertex v : ps.piece(i)) ps.members_[counts[v]++] = i;
  offsets_ = {0};
  return ps;
}

namespace {

Vertex parse_vertex(const std::string& tok, const MetricGraph& g, int line) {
  auto fail = [&](const std::string& msg) {
    throw GraphError("pieces:" + std::to_string(line) + ": " + msg);
  };
  if (!tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) != 0)) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) fail("bad vertex '" + tok + "'");
    if (v < 0 || v >= g.vertex_count()) fail("vertex " + tok + " out of range");
    return static_cast<Vertex>(v);
  }
  if (auto v = g.find_label(tok)) return *v;
  fail("unknown vertex '" + tok + "'");
  return -1;
}

}  // namespace

PieceSystem read_pieces(std::istream& in, const MetricGraph& g, int K) {
  PieceSystem::Builder b(g);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw GraphError("pieces:" + std::to_string(lineno) + ": expected 'label: v1 v2 ...'");
    std::string label = line.substr(0, colon);
    label.erase(0, label.find_first_not_of(" \t"));
    label.erase(label.find_last_not_of(" \t") + 1);
    std::istringstream rest(line.substr(colon + 1));
    std::vector<Vertex> vs;
    std::string tok;
    while (rest >> tok) vs.push_back(parse_vertex(tok, g, lineno));
    if (vs.empty()) throw GraphError("pieces:" + std::to_string(lineno) + ": empty piece");
    b.add(std::move(vs), {PieceKind::Listed, -1, 0, -1}, label.empty() ? "piece" : label);
  }
  return b.build(K);
}

PieceSystem read_pieces_file(const std::string& path, const MetricGraph& g, int K) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open pieces file " + path);
  return read_pieces(in, g, K);
}

void write_pieces(std::ostream& out, const PieceSystem& ps, const MetricGraph& g) {
  for (int i = 0; i < ps.size(); ++i) {
    out << ps.label(i, g) << ':';
    for (Vertex v : ps.piece(i)) out << ' ' << v;
    out << '\n';
  }
}

PieceSystem pieces_from_cosets(const CayleyBall& ball, const CosetPieceOptions& opt) {
  const auto& g = ball.graph;
  const auto& grp = *ball.group;
  const int nf = grp.top_factor_count();
  if (!opt.factors.empty() && !ball.spec.is_product())
    throw std::invalid_argument("coset pieces need a free product or rh_model group");
  for (int f : opt.factors)
    if (f < 0 || f >= nf) throw std::invalid_argument("peripheral factor " + std::to_string(f) + " out of range");
  if (opt.radius < 0 || opt.ball_radius < 0) throw std::invalid_argument("negative piece radius");

  PieceSystem::Builder b(g);
  const Vertex n = g.vertex_count();
  std::vector<char> covered(n, 0);
  LocalBfs bfs(g);
  for (int f : opt.factors) {
    // Group vertices by coset representative: the word with a trailing f-syllable removed.
    std::unordered_map<Vertex, std::vector<Vertex>> cosets;
    std::vector<Vertex> order;
    for (Vertex v = 0; v < n; ++v) {
      auto w = ball.element(v);
      auto syl = grp.syllables(w);
      Vertex rep = v;
      if (!syl.empty() && syl.back().factor == f) {
        std::size_t cut = static_cast<std::size_t>(syl.back().payload.data() - w.data()) - 2;
        auto r = ball.elements->find(w.first(cut));
        if (!r) throw GraphError("coset representative missing from ball");
        rep = *r;
      }
      auto [it, fresh] = cosets.try_emplace(rep);
      if (fresh) order.push_back(rep);
      it->second.push_back(v);
    }
    for (Vertex rep : order) {
      auto& members = cosets[rep];
      if (members.size() == 1 && opt.radius == 0) {
        // A coset reduced to its representative by truncation carries no geometry.
        if (rep != g.basepoint() && g.depth(rep) == ball.radius) continue;
      }
      std::vector<Vertex> vs;
      if (opt.radius == 0) {
        vs = std::move(members);
      } else {
        bfs.run(members, opt.radius);
        vs = bfs.visited();
      }
      for (Vertex v : vs) covered[v] = 1;
      b.add(std::move(vs), {PieceKind::Coset, f, opt.radius, rep});
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (opt.balls == BallPieces::None) break;
    if (opt.balls == BallPieces::Uncovered && covered[v]) continue;
    if (opt.ball_radius == 0) {
      b.add_singleton(v);
    } else {
      bfs.run(v, opt.ball_radius);
      b.add(bfs.visited(), {PieceKind::Ball, -1, opt.ball_radius, v});
    }
  }
  auto ps = b.build(opt.K);
  for (Vertex v = 0; v < n; ++v)
    if (ps.pieces_of(v).empty())
      throw GraphError("piece system leaves vertex " + std::to_string(v) + " uncovered");
  return ps;
}

PieceSystem with_uncovered_singletons(const PieceSystem& ps, const MetricGraph& g) {
  PieceSystem::Builder b(g);
  for (int i = 0; i < ps.size(); ++i) {
    auto s = ps.piece(i);
    std::string label = ps.info(i).kind == PieceKind::Listed ? ps.label(i, g) : std::string{};
    b.add(std::vector<Vertex>(s.begin(), s.end()), ps.info(i), label);
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (ps.pieces_of(v).empty()) b.add_singleton(v);
  return b.build(ps.K);
}

PieceSystem whole_graph_piece(const MetricGraph& g, int K) {
  PieceSystem::Builder b(g);
  std::vector<Vertex> all(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) all[v] = v;
  b.add(std::move(all), {PieceKind::Whole, -1, 0, g.basepoint()});
  return b.build(K);
}

namespace {

SparseImage subtract(const SparseImage& a, const SparseImage& b) {
  SparseImage out;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      out.emplace_back(j->first, -j->second);
      ++j;
    } else {
      if (double d = i->second - j->second; d != 0.0) out.emplace_back(i->first, d);
      ++i;
      ++j;
    }
  }
  return out;
}

// Untranslated maps; the wrapper subtracts the anchor image.
class CatalogEmbedding final : public PieceEmbedding {
 public:
  CatalogEmbedding(const PieceSystem& ps, const MetricGraph& g, const CayleyBall* ball, PsiMode mode,
                   double p)
      : ps_(&ps), g_(&g), ball_(ball), mode_(mode) {
    if (ball_ && mode_ == PsiMode::Auto) {
      auto factors = ball_->spec.is_product() ? ball_->spec.top_factors() : std::vector<GroupSpec>{};
      for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f].family != GroupSpec::Family::Free) continue;
        auto fb = std::make_shared<FactorBall>();
        fb->ball = std::make_shared<CayleyBall>(build_cayley_ball(factors[f], ball_->radius));
        auto rep = hyperbolicity_report(fb->ball->graph);
        fb->params.delta = rep.delta_rips;
        fb->params.p = p;
        fb->params.f = CompressionFunction::power(1.0);
        fb->params.scales = default_scales(rep.delta_rips, 2 * ball_->radius);
        // Each scale contributes at most (4C)^(1/p) n^(1/p - 1) * n^(1 - 1/p) per edge.
        double C = 3.0 * max_ball_size(fb->ball->graph, (3 * rep.delta_rips.twice) / 2);
        fb->scale = 1.0 / (static_cast<double>(fb->params.scales.size()) * std::pow(4.0 * C, 1.0 / p));
        hyperbolic_[static_cast<int>(f)] = fb;
      }
    }
  }

  std::string describe(int piece) const override {
    const PieceInfo& in = ps_->info(piece);
    if (mode_ == PsiMode::Radial) return "radial";
    if (mode_ == PsiMode::Indicator || in.kind != PieceKind::Coset || !ball_) return "indicator";
    std::string base;
    const auto fs = ball_->spec.top_factors();
    const auto& fspec = fs[in.factor];
    if (fspec.family == GroupSpec::Family::Abelian)
      base = fspec.rank == 1 ? "line" : "lattice/2";
    else if (hyperbolic_.count(in.factor))
      base = "hyperbolic";
    else
      base = "indicator";
    return in.radius > 0 ? "projected " + base : base;
  }

 SparseImage image(int piece, Vertex v) const override {
    SparseImage img = untranslated(piece, v);
    SparseImage base = untranslated(piece, ps_->anchor(piece));
    return subtract(img, base);
  }

 private:
  struct FactorBall {
    std::shared_ptr<CayleyBall> ball;
    TrumpetParams params;
    double scale = 1.0;
  };

  SparseImage indicator(Vertex v) const { return {{v, 0.5}}; }

  SparseImage untranslated(int piece, Vertex v) const {
    if (!ps_->contains(piece, v)) throw std::invalid_argument("psi evaluated outside its piece");
    const PieceInfo& in = ps_->info(piece);
    if (mode_ == PsiMode::Radial) return {{0, static_cast<double>(g_->distance(ps_->anchor(piece), v))}};
    if (mode_ == PsiMode::Indicator || in.kind != PieceKind::Coset || !ball_) return indicator(v);
    Vertex u = in.radius > 0 ? project(piece, v) : v;
    const auto fs = ball_->spec.top_factors();
    const auto& fspec = fs[in.factor];
    auto w = ball_->element(u);
    auto syl = ball_->group->syllables(w);
    std::span<const std::int16_t> payload;
    if (!syl.empty() && syl.back().factor == in.factor && u != in.center) payload = syl.back().payload;
    if (fspec.family == GroupSpec::Family::Abelian) {
      SparseImage out;
      const double s = fspec.rank == 1 ? 1.0 : 0.5;
      for (std::size_t j = 0; j < payload.size(); ++j)
        if (payload[j] != 0) out.emplace_back(static_cast<std::int64_t>(j), s * payload[j]);
      return out;
    }
    if (auto it = hyperbolic_.find(in.factor); it != hyperbolic_.end()) {
      const FactorBall& fb = *it->second;
      Vertex fv = fb.ball->graph.basepoint();
      if (!payload.empty()) {
        auto found = fb.ball->elements->find(payload);
        if (!found) throw GraphError("factor element missing from factor ball");
        fv = *found;
      }
      LpVector h = embed_hyperbolic(fb.ball->graph, fv, fb.params);
      SparseImage out;
      for (const auto& [l, val] : h.entries()) out.emplace_back(pack_key(l.index, l.key), fb.scale * val);
      return out;
    }
    return indicator(u);
  }

  // Closest point of the underlying coset, smallest id on ties.
  Vertex project(int piece, Vertex v) const {
    const PieceInfo& in = ps_->info(piece);
    Vertex best = -1;
    int bd = 0;
    for (Vertex u : ps_->piece(piece)) {
      if (!on_coset(u, in)) continue;
      int d = g_->distance(u, v);
      if (best < 0 || d < bd) {
        best = u;
        bd = d;
      }
    }
    return best;
  }

  bool on_coset(Vertex u, const PieceInfo& in) const {
    if (u == in.center) return true;
    auto w = ball_->element(u);
    auto syl = ball_->group->syllables(w);
    if (syl.empty() || syl.back().factor != in.factor) return false;
    std::size_t cut = static_cast<std::size_t>(syl.back().payload.data() - w.data()) - 2;
    auto r = ball_->elements->find(w.first(cut));
    return r && *r == in.center;
  }

  const PieceSystem* ps_;
  const MetricGraph* g_;
  const CayleyBall* ball_;
  PsiMode mode_;
  std::unordered_map<int, std::shared_ptr<FactorBall>> hyperbolic_;
};

}  // namespace

std::shared_ptr<const PieceEmbedding> make_piece_embedding(const PieceSystem& ps,
                                                           const MetricGraph& g,
                                                           const CayleyBall* ball, PsiMode mode,
                                                           double p) {
  return std::make_shared<CatalogEmbedding>(ps, g, ball, mode, p);
}

}  // namespace lpemb

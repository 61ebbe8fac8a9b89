#include "lpemb/relhyp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace lpemb {

namespace {

constexpr std::size_t kSourceMemo = 1u << 17;
constexpr std::size_t kPointMemo = 1u << 15;

// Smallest-id descent from x to e.
std::vector<Vertex> canonical_path(const MetricGraph& g, Vertex x) {
  std::vector<Vertex> path{x};
  while (path.back() != g.basepoint()) {
    Vertex v = path.back();
    for (Vertex w : g.neighbors(v))
      if (g.depth(w) == g.depth(v) - 1) {
        path.push_back(w);
        break;
      }
  }
  return path;
}

std::uint64_t depth_bits(int lo, int hi) {
  std::uint64_t m = 0;
  for (int d = std::max(lo, 0); d <= hi && d < 64; ++d) m |= std::uint64_t{1} << d;
  return m;
}

}  // namespace

std::optional<DomainRecord> i_domain(const MetricGraph& g, const PieceSystem& ps,
                                     std::span<const Vertex> path, int piece) {
  if (path.empty() || path.back() != g.basepoint() || !is_geodesic(g, path))
    throw GraphError("i-domain needs a geodesic ending at e");
  DomainRecord r;
  r.piece = piece;
  for (Vertex v : path)
    if (ps.contains(piece, v)) {
      if (r.entry < 0) r.entry = v;
      r.exit = v;
    }
  if (r.entry < 0) return std::nullopt;
  r.length = g.depth(r.entry) - g.depth(r.exit) + 1;
  return r;
}

DomainProfile domain_profile(const MetricGraph& g, const PieceSystem& ps, const GeodesicDAG& dag,
                             int piece) {
  DomainProfile prof;
  prof.piece = piece;
  prof.source = dag.source;
  const std::size_t n = dag.size();
  std::vector<char> in(n), reach(n, 0);
  std::vector<std::vector<int>> up(n);  // parent positions
  for (std::size_t a = 0; a < n; ++a) {
    in[a] = ps.contains(piece, dag.vertices[a]) ? 1 : 0;
    for (Vertex p : dag.parents[a]) up[a].push_back(dag.position(p));
  }
  reach[dag.position(dag.source)] = 1;
  for (std::size_t a = 0; a < n; ++a)
    if (reach[a] && !in[a])
      for (int b : up[a]) reach[b] = 1;
  // last[a]: possible last hits of A_i on paths a -> e (-1 for none).
  std::vector<std::vector<Vertex>> last(n);
  for (std::size_t a = n; a-- > 0;) {
    auto& L = last[a];
    if (up[a].empty()) {
      L.push_back(in[a] ? dag.vertices[a] : -1);
      continue;
    }
    for (int b : up[a]) L.insert(L.end(), last[b].begin(), last[b].end());
    std::sort(L.begin(), L.end());
    L.erase(std::unique(L.begin(), L.end()), L.end());
    if (in[a] && !L.empty() && L.front() == -1) {
      L.front() = dag.vertices[a];
      std::sort(L.begin(), L.end());
      L.erase(std::unique(L.begin(), L.end()), L.end());
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!(reach[a] && in[a])) continue;
    Vertex u = dag.vertices[a];
    for (Vertex w : last[a]) prof.triples.push_back({w, u, g.depth(w), g.depth(u)});
  }
  std::sort(prof.triples.begin(), prof.triples.end());
  const auto& L0 = last[dag.position(dag.source)];
  prof.can_miss = !L0.empty() && L0.front() == -1;
  return prof;
}

const DomainProfile* RelHyp::SourceData::find(int piece) const {
  auto it = std::lower_bound(pieces.begin(), pieces.end(), piece);
  if (it == pieces.end() || *it != piece) return nullptr;
  return &profiles[it - pieces.begin()];
}

const PieceBoundary* PointData::find(int piece) const {
  auto it = std::lower_bound(pieces.begin(), pieces.end(), piece,
                             [](const PieceBoundary& b, int i) { return b.piece < i; });
  if (it == pieces.end() || it->piece != piece) return nullptr;
  return &*it;
}

RelHyp::RelHyp(const MetricGraph& g, const PieceSystem& ps, RelHypOptions opt)
    : g_(&g), ps_(&ps), opt_(opt) {
  if (opt_.K < 1) throw std::invalid_argument("K must be >= 1");
  if (g.radius() >= 64) throw std::invalid_argument("graph radius above 63 is not supported");
  if (ps.vertex_count() != g.vertex_count()) throw std::invalid_argument("piece system built for another graph");
}

void RelHyp::clear_caches() const {
  std::lock_guard lock(mu_);
  sources_.clear();
  points_.clear();
}

std::shared_ptr<const RelHyp::SourceData> RelHyp::source(Vertex y) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = sources_.find(y); it != sources_.end()) return it->second;
  }
  auto s = compute_source(y);
  std::lock_guard lock(mu_);
  if (sources_.size() >= kSourceMemo) sources_.clear();
  sources_.emplace(y, s);
  return s;
}

std::shared_ptr<const PointData> RelHyp::point(Vertex x) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = points_.find(x); it != points_.end()) return it->second;
  }
  auto p = compute_point(x);
  std::lock_guard lock(mu_);
  if (points_.size() >= kPointMemo) points_.clear();
  points_.emplace(x, p);
  return p;
}

std::shared_ptr<const RelHyp::SourceData> RelHyp::compute_source(Vertex y) const {
  auto sd = std::make_shared<SourceData>();
  GeodesicDAG dag = geodesic_dag(*g_, y);
  std::vector<int> level_count(g_->depth(y) + 1, 0);
  for (Vertex v : dag.vertices) {
    ++level_count[g_->depth(v)];
    for (int i : ps_->pieces_of(v)) sd->pieces.push_back(i);
  }
  std::sort(sd->pieces.begin(), sd->pieces.end());
  sd->pieces.erase(std::unique(sd->pieces.begin(), sd->pieces.end()), sd->pieces.end());
  const int K = opt_.K;
  for (int i : sd->pieces) {
    DomainProfile prof;
    if (ps_->piece_size(i) == 1) {
      Vertex v = ps_->piece(i)[0];
      int d = g_->depth(v);
      prof.piece = i;
      prof.source = y;
      prof.triples.push_back({v, v, d, d});
      prof.can_miss = level_count[d] > 1;
    } else {
      prof = domain_profile(*g_, *ps_, dag, i);
    }
    if (opt_.merged_filter) {
      int lo = 1 << 30, hi = -1;
      bool is_long = false;
      for (const auto& t : prof.triples) {
        lo = std::min(lo, t.exit_depth);
        hi = std::max(hi, t.entry_depth);
        is_long = is_long || t.length() >= 5 * K;
      }
      if (is_long) sd->forbidden |= depth_bits(lo + 2 * K, hi - 2 * K);
    } else {
      for (const auto& t : prof.triples)
        if (t.length() >= 5 * K) sd->forbidden |= depth_bits(t.exit_depth + 2 * K, t.entry_depth - 2 * K);
    }
    sd->profiles.push_back(std::move(prof));
  }
  return sd;
}

std::shared_ptr<const PointData> RelHyp::compute_point(Vertex x) const {
  auto pd = std::make_shared<PointData>();
  pd->x = x;
  const int kcap = g_->depth(x) / 2;
  auto ball = g_->ball(x, kcap);
  std::vector<std::shared_ptr<const SourceData>> src;
  src.reserve(ball.size());
  std::vector<std::uint64_t> mask(kcap + 1, 0);
  std::unordered_map<int, int> dist;
  for (auto [y, dy] : ball) {
    src.push_back(source(y));
    mask[dy] |= src.back()->forbidden;
    for (int i : src.back()->pieces) dist.emplace(i, -1);
  }
  for (int k = 1; k <= kcap; ++k) mask[k] |= mask[k - 1];

  // d(x, A_i) for every candidate piece by one BFS that stops once all are met.
  std::size_t resolved = 0;
  LocalBfs bfs(*g_);
  bfs.run_until(x, [&](Vertex v, int d) {
    for (int i : ps_->pieces_of(v)) {
      auto it = dist.find(i);
      if (it != dist.end() && it->second < 0) {
        it->second = d;
        ++resolved;
      }
    }
    return resolved == dist.size();
  });

  std::unordered_map<int, std::vector<std::pair<Vertex, int>>> hits;
  for (std::size_t b = 0; b < ball.size(); ++b) {
    const int dy = ball[b].second;
    const auto& sd = *src[b];
    for (std::size_t j = 0; j < sd.pieces.size(); ++j) {
      int i = sd.pieces[j];
      if (dy > dist.at(i) / 4) continue;
      auto& h = hits[i];
      for (const auto& t : sd.profiles[j].triples) h.emplace_back(t.entry, dy);
    }
  }
  const int K = opt_.K;
  for (auto& [i, h] : hits) {
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end(), [](auto& a, auto& b) { return a.first == b.first; }), h.end());
    PieceBoundary pb;
    pb.piece = i;
    pb.dist = dist.at(i);
    const int kmax = pb.dist / 4;
    pb.by_k.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k)
      for (auto [u, dy] : h)
        if (dy <= k && !((mask[k] >> g_->depth(u)) & 1u)) pb.by_k[k].push_back(u);
    for (const auto& s : pb.by_k) pb.all.insert(pb.all.end(), s.begin(), s.end());
    std::sort(pb.all.begin(), pb.all.end());
    pb.all.erase(std::unique(pb.all.begin(), pb.all.end()), pb.all.end());
    if (pb.all.empty()) continue;
    pb.count.assign(pb.all.size(), 0);
    for (const auto& s : pb.by_k)
      for (Vertex u : s) ++pb.count[std::lower_bound(pb.all.begin(), pb.all.end(), u) - pb.all.begin()];
    Vertex anchor = ps_->anchor(i);
    pb.min_depth = 1 << 30;
    for (Vertex u : pb.all) {
      pb.anchor_dist.push_back(u == anchor ? 0 : g_->distance(u, anchor));
      pb.min_depth = std::min(pb.min_depth, g_->depth(u));
    }
    pb.relevant = pb.min_depth >= 3 * K;
    pb.primed = pb.relevant && pb.dist > 0;
    pd->pieces.push_back(std::move(pb));
  }
  std::sort(pd->pieces.begin(), pd->pieces.end(),
            [](const PieceBoundary& a, const PieceBoundary& b) { return a.piece < b.piece; });
  return pd;
}

int RelHyp::piece_distance(Vertex x, int piece) const {
  if (auto b = point(x)->find(piece)) return b->dist;
  if (ps_->contains(piece, x)) return 0;
  int out = -1;
  LocalBfs bfs(*g_);
  bfs.run_until(x, [&](Vertex v, int d) {
    if (ps_->contains(piece, v)) {
      out = d;
      return true;
    }
    return false;
  });
  return out;
}

std::vector<Vertex> RelHyp::boundary_set(Vertex x, int k, int piece) const {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  auto pd = point(x);
  if (auto b = pd->find(piece)) {
    if (k > b->dist / 4) throw std::invalid_argument("k exceeds d(x,A_i)/4");
    return b->by_k[k];
  }
  if (k > piece_distance(x, piece) / 4) throw std::invalid_argument("k exceeds d(x,A_i)/4");
  return {};
}

RelevantPieces RelHyp::relevant_pieces(Vertex x) const {
  RelevantPieces r;
  for (const auto& b : point(x)->pieces) {
    r.boundary[b.piece] = b.all;
    r.dists[b.piece] = b.dist;
    if (b.relevant) r.I.push_back(b.piece);
    if (b.primed) r.I_prime.push_back(b.piece);
  }
  return r;
}

int RelHyp::n_xi(Vertex x, int piece, Vertex a) const {
  auto pd = point(x);
  auto b = pd->find(piece);
  if (!b) return 0;
  auto it = std::lower_bound(b->all.begin(), b->all.end(), a);
  if (it == b->all.end() || *it != a) return 0;
  return b->count[it - b->all.begin()];
}

namespace {

const PieceBoundary& require(const PointData& pd, int piece, bool primed) {
  auto b = pd.find(piece);
  if (!b || (primed ? !b->primed : !b->relevant))
    throw std::invalid_argument(std::string("piece not in ") + (primed ? "I'_x" : "I_x"));
  return *b;
}

}  // namespace

LpVector RelHyp::small_trumpet(Vertex x, int k, int piece, double p) const {
  auto pd = point(x);
  const auto& b = require(*pd, piece, true);
  if (k < 0 || k > b.dist / 4) throw std::invalid_argument("k exceeds d(x,A_i)/4");
  std::vector<LpVector::Entry> e;
  for (Vertex u : b.by_k[k]) {
    std::size_t j = std::lower_bound(b.all.begin(), b.all.end(), u) - b.all.begin();
    e.emplace_back(CoordLabel{Space::SmallTrumpet, piece, u}, std::pow(b.cap(j), 1.0 / p));
  }
  return LpVector(p, std::move(e));
}

LpVector RelHyp::H_small_of(const PieceBoundary& b, double p, Space space, std::int64_t index,
                            double weight) const {
  std::vector<LpVector::Entry> e;
  for (std::size_t j = 0; j < b.all.size(); ++j)
    e.emplace_back(CoordLabel{space, index, b.all[j]},
                   weight * b.count[j] * std::pow(b.cap(j), 1.0 / p) / b.dist);
  return LpVector(p, std::move(e));
}

LpVector RelHyp::H_small(Vertex x, int piece, double p) const {
  auto pd = point(x);
  const auto& b = require(*pd, piece, true);
  return H_small_of(b, p, Space::SmallTrumpet, piece, 1.0);
}

LpVector RelHyp::embed_small(Vertex x, const CompressionFunction& f, double p) const {
  auto pd = point(x);
  std::vector<LpVector::Entry> e;
  for (const auto& b : pd->pieces) {
    if (!b.primed) continue;
    double w = f(b.dist) / std::pow(static_cast<double>(b.dist), 1.0 / p);
    auto h = H_small_of(b, p, Space::SmallTrumpet, opt_.shared_small_space ? 0 : b.piece, w);
    e.insert(e.end(), h.entries().begin(), h.entries().end());
  }
  return LpVector(p, std::move(e));
}

std::pair<int, int> RelHyp::thick_normaliser(Vertex x, int piece) const {
  auto pd = point(x);
  const auto& b = require(*pd, piece, false);
  int a = 0;
  for (const auto& s : b.by_k) a += static_cast<int>(s.size());
  return {a, std::min(a, 1 + b.dist / 4)};
}

LpVector RelHyp::H_large(Vertex x, int piece, const PieceEmbedding& psi, double p) const {
  auto pd = point(x);
  const auto& b = require(*pd, piece, false);
  int kx = thick_normaliser(x, piece).second;
  if (kx == 0) return LpVector(p);
  std::vector<LpVector::Entry> e;
  for (std::size_t j = 0; j < b.all.size(); ++j)
    for (auto [key, v] : psi.image(piece, b.all[j]))
      e.emplace_back(CoordLabel{Space::LargeTrumpet, piece, key}, b.count[j] * v / kx);
  return LpVector(p, std::move(e));
}

LpVector RelHyp::embed_large(Vertex x, const PieceEmbedding& psi, double p) const {
  auto pd = point(x);
  std::vector<LpVector::Entry> e;
  for (const auto& b : pd->pieces) {
    if (!b.relevant) continue;
    auto h = H_large(x, b.piece, psi, p);
    e.insert(e.end(), h.entries().begin(), h.entries().end());
  }
  return LpVector(p, std::move(e));
}

LpVector RelHyp::embed(Vertex x, const PieceEmbedding& psi, const CompressionFunction& f, double p) const {
  return embed_small(x, f, p) + embed_large(x, psi, p);
}

namespace {

int max_pair_distance(const MetricGraph& g, const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  int best = 0;
  for (Vertex u : a)
    for (Vertex v : b)
      if (u != v) best = std::max(best, g.distance(u, v));
  return best;
}

std::vector<Vertex> entries_of(const DomainProfile& prof) {
  std::vector<Vertex> out;
  for (const auto& t : prof.triples) out.push_back(t.entry);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int c4_constant(const RelHyp& rh, const std::vector<Vertex>& vertices, SpqrWitness* w) {
  int best = 0;
  for (Vertex x : vertices) {
    std::map<int, int> by_t;
    for (const auto& b : rh.point(x)->pieces)
      if (b.relevant) ++by_t[b.dist];
    for (auto [t, c] : by_t)
      if (c > best) {
        best = c;
        if (w) *w = {4, x, -1, -1, -1, c};
      }
  }
  return best;
}

}  // namespace

SpqrReport check_spqr(const MetricGraph& g, const PieceSystem& ps, const std::vector<Vertex>& vertices,
                      int K, int search_limit) {
  SpqrReport r;
  r.K = K;
  RelHyp rh(g, ps, {K});
  std::vector<char> listed(g.vertex_count(), 0);
  for (Vertex v : vertices) listed[v] = 1;

  // (C1): exits of all geodesics from listed points meeting a piece.
  std::map<int, std::vector<Vertex>> exits;
  for (Vertex y : vertices) {
    auto sd = rh.source(y);
    for (const auto& prof : sd->profiles)
      if (ps.piece_size(prof.piece) > 1)
        for (const auto& t : prof.triples) exits[prof.piece].push_back(t.exit);
  }
  SpqrWitness w1{1};
  for (auto& [i, ex] : exits) {
    std::sort(ex.begin(), ex.end());
    ex.erase(std::unique(ex.begin(), ex.end()), ex.end());
    int d = max_pair_distance(g, ex, ex);
    if (d > r.c1) {
      r.c1 = d;
      w1 = {1, ex.front(), ex.back(), i, -1, d};
    }
  }

  // (C2): entries from nearby sources, and short domains when a geodesic misses.
  SpqrWitness w2{2};
  for (Vertex x : vertices) {
    auto sx = rh.source(x);
    std::unordered_map<int, int> dist;
    for (int i : sx->pieces) dist.emplace(i, -1);
    std::size_t resolved = 0;
    LocalBfs bfs(g);
    bfs.run_until(x, [&](Vertex v, int d) {
      for (int i : ps.pieces_of(v))
        if (auto it = dist.find(i); it != dist.end() && it->second < 0) {
          it->second = d;
          ++resolved;
        }
      return resolved == dist.size();
    });
    for (std::size_t j = 0; j < sx->pieces.size(); ++j) {
      int i = sx->pieces[j];
      const auto& px = sx->profiles[j];
      auto ex = entries_of(px);
      int longest = 0;
      for (const auto& t : px.triples) longest = std::max(longest, t.length());
      int rad = std::max(dist.at(i) / 4, 1);
      for (auto [y, dy] : g.ball(x, rad)) {
        if (!listed[y]) continue;
        auto sy = rh.source(y);
        const DomainProfile* py = sy->find(i);
        if (py) {
          int d = max_pair_distance(g, ex, entries_of(*py));
          if (d > r.c2) {
            r.c2 = d;
            w2 = {2, x, y, i, -1, d};
          }
        }
        if ((!py || py->can_miss) && longest > r.c2) {
          r.c2 = longest;
          w2 = {2, x, y, i, -1, longest};
        }
      }
    }
  }

  // (C3)
  SpqrWitness w3{3};
  r.min_membership = vertices.empty() ? 0 : 1 << 30;
  std::set<std::pair<int, int>> seen;
  for (Vertex v : vertices) {
    auto ids = ps.pieces_of(v);
    int c = static_cast<int>(ids.size());
    r.min_membership = std::min(r.min_membership, c);
    if (c > r.c3_membership) {
      r.c3_membership = c;
      w3 = {3, v, -1, -1, -1, c};
    }
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (!seen.insert({ids[a], ids[b]}).second) continue;
        std::vector<Vertex> common;
        auto s = ps.piece(ids[a]), t = ps.piece(ids[b]);
        std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(common));
        int d = max_pair_distance(g, common, common);
        if (d > r.c3_overlap) {
          r.c3_overlap = d;
          w3 = {3, common.front(), common.back(), ids[a], ids[b], d};
        }
      }
  }

  SpqrWitness w4{4};
  r.c4 = c4_constant(rh, vertices, &w4);
  r.witnesses = {w1, w2, w3, w4};

  if (search_limit > 0) {
    int base = std::max({1, r.c1, r.c2, r.c3_membership, r.c3_overlap});
    for (int k = base; k <= search_limit; ++k) {
      int c4 = k == K ? r.c4 : c4_constant(RelHyp(g, ps, {k}), vertices, nullptr);
      if (c4 <= k && r.min_membership >= 1) {
        r.uniform_K = k;
        break;
      }
    }
  }
  return r;
}

CountStabilityReport check_count_stability(const RelHyp& rh, const std::vector<Vertex>& vertices, int R) {
  CountStabilityReport r;
  r.R = R;
  const auto& g = rh.graph();
  std::vector<char> listed(g.vertex_count(), 0);
  for (Vertex v : vertices) listed[v] = 1;
  for (Vertex x : vertices) {
    auto px = rh.point(x);
    for (auto [y, d] : g.ball(x, R)) {
      if (d == 0 || y < x || !listed[y]) continue;
      ++r.pairs;
      auto py = rh.point(y);
      std::set<int> ids;
      for (const auto& b : px->pieces) ids.insert(b.piece);
      for (const auto& b : py->pieces) ids.insert(b.piece);
      for (int i : ids) {
        const PieceBoundary* bx = px->find(i);
        const PieceBoundary* by = py->find(i);
        std::vector<Vertex> as;
        if (bx) as.insert(as.end(), bx->all.begin(), bx->all.end());
        if (by) as.insert(as.end(), by->all.begin(), by->all.end());
        std::sort(as.begin(), as.end());
        as.erase(std::unique(as.begin(), as.end()), as.end());
        for (Vertex a : as) {
          int diff = std::abs(rh.n_xi(x, i, a) - rh.n_xi(y, i, a));
          ++r.checks;
          r.worst = std::max(r.worst, diff);
          if (diff > 4 * R) ++r.violations;
        }
      }
    }
  }
  return r;
}

SmallTrumpetReport check_small_trumpets(const RelHyp& rh, const std::vector<Vertex>& vertices, double p) {
  SmallTrumpetReport r;
  const auto& g = rh.graph();
  const auto& ps = rh.pieces();
  const double K = rh.K();
  for (Vertex x : vertices) {
    auto pd = rh.point(x);
    std::vector<Vertex> path;
    for (const auto& b : pd->pieces) {
      if (!b.primed) continue;
      if (path.empty()) path = canonical_path(g, x);
      auto dom = i_domain(g, ps, path, b.piece);
      if (!dom) {
        ++r.skipped_missing_entry;
        continue;
      }
      const Vertex entry = dom->entry;
      const Vertex anchor = ps.anchor(b.piece);
      const double d_entry = std::min(b.dist, (entry == anchor ? 0 : g.distance(entry, anchor)) + 1);
      bool in_all = true;
      for (const auto& S : b.by_k) {
        double Fp = 0.0;
        for (Vertex u : S) Fp += b.cap(std::lower_bound(b.all.begin(), b.all.end(), u) - b.all.begin());
        bool has = std::binary_search(S.begin(), S.end(), entry);
        in_all = in_all && has;
        ++r.checks;
        if (has && Fp < d_entry * (1 - kRelTol)) ++r.lower_violations;
        if (Fp > S.size() * (d_entry + K) * (1 + kRelTol)) ++r.upper_violations;
      }
      if (!in_all) continue;
      double Hp = 0.0;
      for (std::size_t j = 0; j < b.all.size(); ++j)
        Hp += std::pow(static_cast<double>(b.count[j]), p) * b.cap(j) / std::pow(b.dist, p);
      ++r.averaged_checks;
      if (Hp < std::pow(4.0, -p) * d_entry * (1 - kRelTol)) ++r.averaged_violations;
      ++r.quarter_checks;
      r.worst_quarter_ratio = std::max(r.worst_quarter_ratio, 0.25 * d_entry / Hp);
      if (Hp < 0.25 * d_entry * (1 - kRelTol)) ++r.quarter_failures;
    }
  }
  return r;
}

ShapeReport measure_small_shape(const RelHyp& rh, const std::vector<Vertex>& vertices, double p) {
  ShapeReport r;
  const auto& g = rh.graph();
  const auto& ps = rh.pieces();
  std::vector<char> listed(g.vertex_count(), 0);
  for (Vertex v : vertices) listed[v] = 1;
  for (Vertex x : vertices) {
    auto px = rh.point(x);
    auto path = canonical_path(g, x);
    for (Vertex y : g.neighbors(x)) {
      if (!listed[y]) continue;
      auto py = rh.point(y);
      std::set<int> ids;
      for (const auto& b : px->pieces)
        if (b.primed) ids.insert(b.piece);
      for (const auto& b : py->pieces)
        if (b.primed) ids.insert(b.piece);
      for (int i : ids) {
        auto dom = i_domain(g, ps, path, i);
        if (!dom) {
          ++r.skipped;
          continue;
        }
        int dx = rh.piece_distance(x, i);
        if (dx == 0) {
          ++r.skipped;
          continue;
        }
        const PieceBoundary* bx = px->find(i);
        const PieceBoundary* by = py->find(i);
        LpVector hx = bx && bx->primed ? rh.H_small(x, i, p) : LpVector(p);
        LpVector hy = by && by->primed ? rh.H_small(y, i, p) : LpVector(p);
        Vertex anchor = ps.anchor(i);
        double d_entry = std::min(dx, (dom->entry == anchor ? 0 : g.distance(dom->entry, anchor)) + 1);
        double c = distance_pow(hx, hy) * std::pow(dx, p) / d_entry;
        ++r.checks;
        if (c > r.constant) {
          r.constant = c;
          r.worst_x = x;
          r.worst_y = y;
          r.worst_piece = i;
        }
      }
    }
  }
  return r;
}

ShapeReport measure_large_shape(const RelHyp& rh, const PieceEmbedding& psi,
                                const std::vector<Vertex>& vertices, double p) {
  ShapeReport r;
  const auto& g = rh.graph();
  std::vector<char> listed(g.vertex_count(), 0);
  for (Vertex v : vertices) listed[v] = 1;
  const int cut = 3 * rh.K();
  for (Vertex x : vertices) {
    if (g.depth(x) <= cut) continue;
    auto px = rh.point(x);
    for (Vertex y : g.neighbors(x)) {
      if (!listed[y] || g.depth(y) <= cut) continue;
      auto py = rh.point(y);
      std::set<int> ids;
      for (const auto& b : px->pieces)
        if (b.relevant) ids.insert(b.piece);
      for (const auto& b : py->pieces)
        if (b.relevant) ids.insert(b.piece);
      for (int i : ids) {
        const PieceBoundary* bx = px->find(i);
        const PieceBoundary* by = py->find(i);
        LpVector hx = bx && bx->relevant ? rh.H_large(x, i, psi, p) : LpVector(p);
        LpVector hy = by && by->relevant ? rh.H_large(y, i, psi, p) : LpVector(p);
        double c = distance(hx, hy) * (rh.piece_distance(x, i) + 1);
        ++r.checks;
        if (c > r.constant) {
          r.constant = c;
          r.worst_x = x;
          r.worst_y = y;
          r.worst_piece = i;
        }
      }
    }
  }
  return r;
}

}  // namespace lpemb

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "lpemb/pipeline.hpp"
#include "lpemb/relhyp.hpp"
#include "oracle.hpp"

using namespace lpemb;

namespace {

struct Model {
  Fixture fx;
  PieceSystem ps;
  Model(const std::string& text, int K = 1) : fx(build_fixture(FixtureSpec::parse(text))) {
    Config cfg;
    cfg.fixture = fx.spec;
    cfg.K = K;
    ps = build_pieces(fx, cfg);
  }
  const MetricGraph& g() const { return fx.graph(); }
  Vertex v(const char* w) const { return fx.cayley()->vertex(w); }
  int line_through(Vertex u, Vertex w) const {
    for (int i : ps.pieces_of(u))
      if (ps.contains(i, w)) return i;
    return -1;
  }
};

// Path 0..12 rooted at 0: the segment {2..9} plus one singleton per vertex.
PieceSystem segment_with_singletons(const MetricGraph& g) {
  PieceSystem::Builder b(g);
  b.add({2, 3, 4, 5, 6, 7, 8, 9}, {}, "segment");
  for (Vertex v = 0; v < g.vertex_count(); ++v) b.add_singleton(v);
  return b.build(1);
}

int singleton_of(const PieceSystem& ps, Vertex v) {
  for (int i : ps.pieces_of(v))
    if (ps.piece_size(i) == 1) return i;
  return -1;
}

}  // namespace

TEST(Domain, PathSegment) {
  auto g = path_graph(9);
  PieceSystem::Builder b(g);
  b.add({3, 4, 5}, {});
  b.add({7}, {});
  auto ps = b.build();
  auto path = canonical_geodesic(geodesic_dag(g, 8));
  auto d = i_domain(g, ps, path, 0);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->entry, 5);
  EXPECT_EQ(d->exit, 3);
  EXPECT_EQ(d->length, 3);
  std::vector<Vertex> short_path{4, 3, 2, 1, 0};
  EXPECT_FALSE(i_domain(g, ps, short_path, 1).has_value());
  std::vector<Vertex> bad{4, 2, 0};
  EXPECT_ANY_THROW(i_domain(g, ps, bad, 0));
}

TEST(Domain, FreeProductLine) {
  Model m("zxz(6)");
  Vertex x = m.v("a^2b^2"), e = m.g().basepoint();
  int line = m.line_through(e, m.v("a"));
  auto path = canonical_geodesic(geodesic_dag(m.g(), x));
  auto d = i_domain(m.g(), m.ps, path, line);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->entry, m.v("a^2"));
  EXPECT_EQ(d->exit, e);
  EXPECT_EQ(d->length, 3);
}

TEST(DomainProfile, TreeHasOneTriple) {
  Model m("zxz(5)");
  Vertex x = m.v("a^2b^-2a");
  auto dag = geodesic_dag(m.g(), x);
  for (int i : {m.line_through(m.g().basepoint(), m.v("a")), m.line_through(m.v("a^2"), m.v("a^2b"))}) {
    auto p = domain_profile(m.g(), m.ps, dag, i);
    EXPECT_EQ(p.triples.size(), 1u);
    EXPECT_FALSE(p.can_miss);
  }
}

TEST(DomainProfile, CycleArc) {
  auto g = cycle_graph(8);
  PieceSystem::Builder b(g);
  b.add({5, 6}, {});
  b.add({2}, {});
  auto ps = b.build();
  auto dag = geodesic_dag(g, 4);
  auto p = domain_profile(g, ps, dag, 0);
  ASSERT_EQ(p.triples.size(), 1u);
  EXPECT_EQ(p.triples[0].entry, 5);
  EXPECT_EQ(p.triples[0].exit, 6);
  EXPECT_TRUE(p.can_miss);
  auto far = domain_profile(g, ps, geodesic_dag(g, 1), 0);
  EXPECT_TRUE(far.triples.empty());
  EXPECT_TRUE(far.can_miss);
}

TEST(Boundary, LineEntry) {
  Model m("zxz(8)");
  RelHyp rh(m.g(), m.ps, {1});
  int line = m.line_through(m.g().basepoint(), m.v("a"));
  EXPECT_EQ(rh.boundary_set(m.v("a^2b^2"), 0, line), std::vector<Vertex>{m.v("a^2")});
  EXPECT_EQ(rh.piece_distance(m.v("a^2b^2"), line), 2);
}

TEST(Boundary, LongSegmentFiltersInnerSingletons) {
  auto g = path_graph(13);
  auto ps = segment_with_singletons(g);
  RelHyp rh(g, ps, {1});
  EXPECT_TRUE(rh.boundary_set(12, 0, singleton_of(ps, 5)).empty());
  EXPECT_TRUE(rh.boundary_set(12, 0, singleton_of(ps, 7)).empty());
  EXPECT_EQ(rh.boundary_set(12, 0, singleton_of(ps, 3)), std::vector<Vertex>{3});
  EXPECT_EQ(rh.boundary_set(12, 0, singleton_of(ps, 8)), std::vector<Vertex>{8});
  EXPECT_EQ(rh.boundary_set(12, 0, 0), std::vector<Vertex>{9});
}

TEST(Boundary, PointInsidePiece) {
  Model m("zxz(6)");
  RelHyp rh(m.g(), m.ps, {1});
  Vertex x = m.v("a^3");
  int line = m.line_through(m.g().basepoint(), x);
  EXPECT_EQ(rh.piece_distance(x, line), 0);
  EXPECT_EQ(rh.boundary_set(x, 0, line), std::vector<Vertex>{x});
}

// Boundaries from dynamic programming over DAGs match enumeration of all
// geodesics from every source, with the forbidden-depth filter applied by hand.
TEST(Boundary, MatchesEnumerationOracle) {
  for (const char* text : {"zxz(4)", "z2xz(3)"}) {
    Model m(text);
    RelHyp rh(m.g(), m.ps, {1});
    auto D = oracle::distance_matrix(m.g());
    for (Vertex x = 0; x < m.g().vertex_count(); ++x) {
      auto want = oracle::dense_boundaries(m.g(), D, m.ps, x, 1);
      auto got = rh.point(x);
      std::set<int> seen;
      for (const auto& b : got->pieces) {
        seen.insert(b.piece);
        auto it = want.find(b.piece);
        ASSERT_NE(it, want.end()) << text << " x=" << x << " piece " << b.piece;
        EXPECT_EQ(b.dist, it->second.dist);
        ASSERT_EQ(b.by_k.size(), it->second.by_k.size());
        for (std::size_t k = 0; k < b.by_k.size(); ++k)
          EXPECT_EQ(std::set<Vertex>(b.by_k[k].begin(), b.by_k[k].end()), it->second.by_k[k]);
      }
      for (const auto& [i, b] : want) EXPECT_TRUE(seen.count(i)) << text << " x=" << x << " piece " << i;
    }
  }
}

TEST(RelevantPieces, ThreeKCut) {
  Model m("zxz(8)");
  RelHyp rh(m.g(), m.ps, {1});
  int line = m.line_through(m.g().basepoint(), m.v("a"));
  auto far = rh.relevant_pieces(m.v("a^4b^4"));
  EXPECT_TRUE(std::count(far.I_prime.begin(), far.I_prime.end(), line));
  auto near = rh.relevant_pieces(m.v("a^2b^2"));
  EXPECT_FALSE(std::count(near.I.begin(), near.I.end(), line));
  EXPECT_TRUE(rh.relevant_pieces(m.g().basepoint()).I_prime.empty());
}

TEST(RelevantPieces, PrimedExcludesOwnPieces) {
  Model m("zxz(8)");
  RelHyp rh(m.g(), m.ps, {1});
  for (Vertex x : m.fx.safe) {
    auto r = rh.relevant_pieces(x);
    for (int i : r.I_prime) {
      EXPECT_FALSE(m.ps.contains(i, x));
      EXPECT_TRUE(std::count(r.I.begin(), r.I.end(), i));
    }
  }
}

TEST(SmallHalf, FreeProductExample) {
  Model m("zxz(8)");
  RelHyp rh(m.g(), m.ps, {1});
  Vertex x = m.v("a^4b^4"), a4 = m.v("a^4");
  int line = m.line_through(m.g().basepoint(), m.v("a"));
  EXPECT_EQ(rh.n_xi(x, line, a4), 2);
  EXPECT_EQ(rh.n_xi(x, line, m.v("a^3")), 0);
  auto F = rh.small_trumpet(x, 0, line, 2);
  ASSERT_EQ(F.size(), 1u);
  EXPECT_DOUBLE_EQ(F.entries()[0].second, 2.0);
  auto H = rh.H_small(x, line, 2);
  ASSERT_EQ(H.size(), 1u);
  EXPECT_DOUBLE_EQ(H.entries()[0].second, 1.0);
  EXPECT_DOUBLE_EQ(H.norm_pow(), 1.0);
  auto f = CompressionFunction::power(0.5);
  auto phi = rh.embed_small(x, f, 2);
  bool found = false;
  for (const auto& [lab, val] : phi.entries())
    if (lab.index == line && lab.key == a4) {
      EXPECT_DOUBLE_EQ(val, 1.0);
      found = true;
    }
  EXPECT_TRUE(found);
  EXPECT_TRUE(rh.embed_small(m.g().basepoint(), f, 2).empty());
}

TEST(SmallHalf, RejectsPointInsidePiece) {
  Model m("zxz(6)");
  RelHyp rh(m.g(), m.ps, {1});
  Vertex x = m.v("a^3");
  EXPECT_ANY_THROW(rh.H_small(x, m.line_through(m.g().basepoint(), x), 2));
}

TEST(LargeHalf, FreeProductExample) {
  Model m("zxz(8)");
  RelHyp rh(m.g(), m.ps, {1});
  auto psi = make_piece_embedding(m.ps, m.g(), m.fx.cayley(), PsiMode::Auto, 2);
  Vertex x = m.v("a^4b^4");
  int line = m.line_through(m.g().basepoint(), m.v("a"));
  EXPECT_EQ(rh.thick_normaliser(x, line), std::make_pair(2, 2));
  auto H = rh.H_large(x, line, *psi, 2);
  ASSERT_EQ(H.size(), 1u);
  EXPECT_DOUBLE_EQ(std::abs(H.entries()[0].second), 4.0);
  EXPECT_TRUE(rh.embed_large(m.g().basepoint(), *psi, 2).empty());
  EXPECT_TRUE(rh.embed(m.g().basepoint(), *psi, CompressionFunction::power(0.5), 2).empty());
}

TEST(LargeHalf, InsidePieceUsesOneK) {
  Model m("zxz(6)");
  RelHyp rh(m.g(), m.ps, {1});
  Vertex x = m.v("a^3");
  auto [a, k] = rh.thick_normaliser(x, m.line_through(m.g().basepoint(), x));
  EXPECT_EQ(a, 1);
  EXPECT_EQ(k, 1);
}

TEST(Embedding, HalvesAreNamespaceDisjoint) {
  Model m("z2xz(6)");
  RelHyp rh(m.g(), m.ps, {1});
  auto psi = make_piece_embedding(m.ps, m.g(), m.fx.cayley(), PsiMode::Auto, 2);
  auto f = CompressionFunction::power(0.5);
  for (Vertex x : m.fx.safe) {
    double parts = rh.embed_small(x, f, 2).norm_pow() + rh.embed_large(x, *psi, 2).norm_pow();
    EXPECT_NEAR(rh.embed(x, *psi, f, 2).norm_pow(), parts, 1e-9);
  }
}

TEST(CountStability, FreeProduct) {
  Model m("zxz(8)");
  RelHyp rh(m.g(), m.ps, {1});
  for (int R : {1, 2}) {
    auto r = check_count_stability(rh, m.fx.safe, R);
    EXPECT_TRUE(r.pass()) << R;
    EXPECT_LE(r.worst, 4 * R);
    EXPECT_GT(r.checks, 0u);
  }
}

TEST(SmallTrumpets, Bounds) {
  Model m("zxz(8)");
  RelHyp rh(m.g(), m.ps, {1});
  auto r = check_small_trumpets(rh, m.fx.safe, 2);
  EXPECT_TRUE(r.pass());
  EXPECT_GT(r.checks, 0u);
}

TEST(Spqr, FreeProductLines) {
  Model m("zxz(6)", 2);
  auto r = check_spqr(m.g(), m.ps, m.fx.safe, 2, 8);
  EXPECT_TRUE(r.pass());
  EXPECT_LE(r.c1, 4);
  EXPECT_LE(r.c2, 4);
  EXPECT_LE(r.c3_membership, 4);
  EXPECT_LE(r.c4, 4);
  ASSERT_TRUE(r.uniform_K.has_value());
  EXPECT_LE(*r.uniform_K, 2);
}

TEST(Spqr, SinglePieceCover) {
  auto g = cycle_graph(8);
  auto ps = whole_graph_piece(g);
  std::vector<Vertex> all{0, 1, 2, 3, 4, 5, 6, 7};
  auto r = check_spqr(g, ps, all, 1);
  EXPECT_TRUE(r.c3_pass());
  EXPECT_TRUE(r.c4_pass());
  EXPECT_EQ(r.c3_membership, 1);
}

TEST(RelHypCtor, RejectsBadConstant) {
  auto g = path_graph(5);
  auto ps = whole_graph_piece(g);
  EXPECT_ANY_THROW(RelHyp(g, ps, {0}));
}

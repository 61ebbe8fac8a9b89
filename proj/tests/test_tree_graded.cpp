#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lpemb/pipeline.hpp"
#include "lpemb/tree_graded.hpp"
#include "oracle.hpp"

using namespace lpemb;

namespace {

struct ZxZ {
  Fixture fx;
  PieceSystem ps;
  explicit ZxZ(int R) : fx(build_fixture(FixtureSpec::parse("zxz(" + std::to_string(R) + ")"))) {
    Config cfg;
    cfg.fixture = fx.spec;
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

PieceSystem listed(const MetricGraph& g, std::vector<std::vector<Vertex>> pieces) {
  PieceSystem::Builder b(g);
  for (auto& p : pieces) b.add(p, {});
  return b.build();
}

}  // namespace

TEST(Validation, FreeProductLines) {
  ZxZ z(4);
  EXPECT_TRUE(validate_tree_graded(z.g(), z.ps).pass());
}

TEST(Validation, OverlappingPieces) {
  auto g = path_graph(3);
  auto ps = listed(g, {{0, 1}, {0, 1, 2}, {1, 2}});
  auto r = validate_tree_graded(g, ps);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.overlaps.empty());
  EXPECT_FALSE(r.containments.empty());
}

TEST(Validation, MissingVertex) {
  auto g = path_graph(3);
  auto r = validate_tree_graded(g, listed(g, {{0, 1}}));
  EXPECT_EQ(r.uncovered, std::vector<Vertex>{2});
}

TEST(Validation, CycleOutsidePieces) {
  auto g = cycle_graph(5);
  auto ps = with_uncovered_singletons(PieceSystem::Builder(g).build(), g);
  auto r = validate_tree_graded(g, ps);
  EXPECT_EQ(r.loose_cycles.size(), 1u);
  EXPECT_THROW(TreeGraded(g, ps), std::exception);
}

// Every simple cycle of a small fixture sits inside one piece exactly when
// validation accepts the loose-cycle axiom.
TEST(Validation, CyclesAgreeWithOracle) {
  auto z2 = build_fixture(FixtureSpec::parse("abelian(2,2)"));
  const auto& g = z2.graph();
  ASSERT_LE(g.vertex_count(), 30);
  auto cycles = oracle::simple_cycles(g);
  EXPECT_FALSE(cycles.empty());
  auto whole = whole_graph_piece(g);
  EXPECT_TRUE(validate_tree_graded(g, whole).loose_cycles.empty());
  auto singles = with_uncovered_singletons(PieceSystem::Builder(g).build(), g);
  EXPECT_FALSE(validate_tree_graded(g, singles).loose_cycles.empty());

  ZxZ z(2);
  auto zc = oracle::simple_cycles(z.g());
  EXPECT_TRUE(zc.empty());
  EXPECT_TRUE(cyclic_blocks(z.g()).empty());
}

TEST(Decomposition, TwoSyllables) {
  ZxZ z(4);
  TreeGraded tg(z.g(), z.ps);
  Vertex e = z.g().basepoint(), a = z.v("a"), ab = z.v("ab");
  auto d = tg.decompose(ab);
  EXPECT_EQ(d.pieces, (std::vector<int>{z.line_through(e, a), z.line_through(a, ab)}));
  EXPECT_EQ(d.transitions, (std::vector<Vertex>{a, ab}));
  EXPECT_EQ(d.entries, (std::vector<Vertex>{e, a}));
}

TEST(Decomposition, BasepointAndOneSyllable) {
  ZxZ z(4);
  TreeGraded tg(z.g(), z.ps);
  Vertex e = z.g().basepoint();
  auto d0 = tg.decompose(e);
  EXPECT_EQ(d0.transitions, std::vector<Vertex>{e});
  auto d = tg.decompose(z.v("a^3"));
  EXPECT_EQ(d.pieces.size(), 1u);
  EXPECT_EQ(d.transitions, std::vector<Vertex>{z.v("a^3")});
}

TEST(Decomposition, UniqueAcrossGeodesics) {
  auto fx = build_fixture(FixtureSpec::parse("z2xz(6)"));
  Config cfg;
  cfg.fixture = fx.spec;
  auto ps = build_pieces(fx, cfg);
  TreeGraded tg(fx.graph(), ps);
  std::size_t multi = 0;
  for (Vertex x : fx.safe) {
    auto dag = geodesic_dag(fx.graph(), fx.graph().basepoint(), x);
    if (dag.path_count() < 2) continue;
    ++multi;
    auto want = tg.decompose(x);
    for (auto path : enumerate_geodesics(dag, 8)) ASSERT_EQ(tg.decompose_path(path), want) << x;
  }
  EXPECT_GT(multi, 0u);
}

TEST(DistanceTree, FreeProductRadiusTwo) {
  ZxZ z(2);
  TreeGraded tg(z.g(), z.ps);
  EXPECT_EQ(tg.tree_classes(), 9);
  EXPECT_EQ(tg.tree_class(z.v("a")), tg.tree_class(z.v("a^-1")));
  EXPECT_NE(tg.tree_class(z.v("a")), tg.tree_class(z.v("b")));
  EXPECT_EQ(tg.tree_edges().size(), 8u);
}

TEST(DistanceTree, PathWithIntervals) {
  auto g = path_graph(7);
  auto ps = listed(g, {{0, 1, 2}, {2, 3}, {3, 4, 5, 6}});
  TreeGraded tg(g, ps);
  EXPECT_EQ(tg.tree_classes(), 7);
  EXPECT_EQ(tg.tree_distance(0, 6), 6);
}

TEST(DistanceTree, SinglePieceIsRay) {
  auto g = cycle_graph(6);
  auto ps = whole_graph_piece(g);
  TreeGraded tg(g, ps);
  EXPECT_EQ(tg.tree_classes(), 4);
  EXPECT_EQ(tg.tree_distance(1, 5), 0);
}

TEST(SplitMetric, Examples) {
  ZxZ z(4);
  TreeGraded tg(z.g(), z.ps);
  Vertex e = z.g().basepoint();
  auto s = tg.split(z.v("ab"), e);
  EXPECT_EQ(s.sigma_T, 2);
  EXPECT_EQ(s.sigma_I, 2);
  EXPECT_EQ(s.d_prime(), 4);
  auto same = tg.split(z.v("ab"), z.v("ab"));
  EXPECT_EQ(same.d_prime(), 0);
  auto line = tg.split(z.v("a^2"), z.v("a^-1"));
  EXPECT_EQ(line.sigma_I, 3);
  EXPECT_EQ(line.sigma_T, 1);
}

TEST(SplitMetric, Bilipschitz) {
  ZxZ z(6);
  TreeGraded tg(z.g(), z.ps);
  auto r = tg.check_bilipschitz(z.fx.safe);
  EXPECT_TRUE(r.pass());
  EXPECT_GE(r.min_ratio, 0.5);
  EXPECT_LE(r.max_ratio, 2.0);

  auto g = cycle_graph(6);
  auto whole = whole_graph_piece(g);
  std::vector<Vertex> all{0, 1, 2, 3, 4, 5};
  EXPECT_TRUE(TreeGraded(g, whole).check_bilipschitz(all).pass());

  auto t = build_fixture(FixtureSpec::parse("free(2,3)"));
  auto singles = with_uncovered_singletons(PieceSystem::Builder(t.graph()).build(), t.graph());
  auto tr = TreeGraded(t.graph(), singles).check_bilipschitz(t.safe);
  EXPECT_TRUE(tr.pass());
}

TEST(Embedding, TreePart) {
  ZxZ z(4);
  TreeGraded tg(z.g(), z.ps);
  auto f = CompressionFunction::power(0.5);
  Vertex e = z.g().basepoint(), a = z.v("a");
  EXPECT_TRUE(tg.phi_T(e, f, 2).empty());
  auto v = tg.phi_T(z.v("ab"), f, 2);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v.at({Space::TreeRay, 0, e}), 1.0, 1e-15);
  EXPECT_NEAR(v.at({Space::TreeRay, 0, a}), 1.0, 1e-15);
  auto w = tg.phi_T(z.v("a^3"), f, 2);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NEAR(w.at({Space::TreeRay, 0, e}), std::sqrt(3.0), 1e-15);
}

TEST(Embedding, PiecePart) {
  ZxZ z(4);
  TreeGraded tg(z.g(), z.ps);
  auto psi = make_piece_embedding(z.ps, z.g(), z.fx.cayley(), PsiMode::Auto, 2);
  EXPECT_TRUE(tg.phi_I(z.g().basepoint(), *psi, 2).empty());
  auto v = tg.phi_I(z.v("ab"), *psi, 2);
  ASSERT_EQ(v.size(), 2u);
  for (const auto& [lab, val] : v.entries()) EXPECT_DOUBLE_EQ(std::abs(val), 1.0);
  auto w = tg.phi_I(z.v("a^-3"), *psi, 2);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_DOUBLE_EQ(std::abs(w.entries()[0].second), 3.0);
}

TEST(Embedding, SumOfParts) {
  ZxZ z(4);
  TreeGraded tg(z.g(), z.ps);
  auto psi = make_piece_embedding(z.ps, z.g(), z.fx.cayley(), PsiMode::Auto, 2);
  auto f = CompressionFunction::power(0.5);
  EXPECT_TRUE(tg.embed(z.g().basepoint(), *psi, f, 2).empty());
  for (Vertex x : z.fx.safe) {
    auto whole = tg.embed(x, *psi, f, 2);
    auto parts = tg.phi_T(x, f, 2).norm_pow() + tg.phi_I(x, *psi, 2).norm_pow();
    EXPECT_NEAR(whole.norm_pow(), parts, 1e-9);
  }
}

#include <gtest/gtest.h>

#include "lpemb/group.hpp"
#include "lpemb/hyperbolicity.hpp"
#include "oracle.hpp"

using namespace lpemb;

TEST(GromovProduct, Path) {
  auto g = path_graph(9);
  // (8 + 5 - 3) / 2
  EXPECT_EQ(gromov_product(g, 8, 5, 0).twice, 10);
}

TEST(GromovProduct, SelfProductIsDistance) {
  auto g = cycle_graph(8);
  for (Vertex x = 0; x < 8; ++x) EXPECT_EQ(gromov_product(g, x, x, 0).twice, 2 * g.distance(x, 0));
}

TEST(GromovProduct, CycleOppositeSides) {
  auto g = cycle_graph(8);
  EXPECT_EQ(gromov_product(g, 2, 6, 0).twice, 0);
  EXPECT_EQ(gromov_product(g, 2, 3, 0).twice, 4);
  EXPECT_EQ(gromov_product(g, 1, 3, 0).str(), "1");
  EXPECT_EQ(gromov_product(path_graph(4), 3, 1, 2).str(), "0");
  auto tri = MetricGraph::from_edges(3, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}, {0, 2}}, 0);
  EXPECT_EQ(gromov_product(tri, 1, 2, 0).str(), "0.5");
}

TEST(FourPoint, TreesAreZero) {
  EXPECT_EQ(four_point_delta(path_graph(9), true).delta.twice, 0);
  auto b = build_cayley_ball(GroupSpec::free(2), 3);
  EXPECT_EQ(four_point_delta(b.graph, true).delta.twice, 0);
}

TEST(FourPoint, MatchesOracle) {
  for (int n : {5, 6, 8, 9}) {
    auto g = cycle_graph(n);
    EXPECT_EQ(four_point_delta(g, true).delta.twice, oracle::four_point_twice(oracle::distance_matrix(g))) << n;
  }
  auto z2 = build_cayley_ball(GroupSpec::abelian(2), 3);
  EXPECT_EQ(four_point_delta(z2.graph, true).delta.twice,
            oracle::four_point_twice(oracle::distance_matrix(z2.graph)));
}

TEST(FourPoint, SampledNeverExceedsExhaustive) {
  auto z2 = build_cayley_ball(GroupSpec::abelian(2), 3);
  int exact = four_point_delta(z2.graph, true).delta.twice;
  for (std::uint64_t seed = 0; seed < 4; ++seed)
    EXPECT_LE(four_point_delta(z2.graph, false, 500, seed).delta.twice, exact);
}

TEST(Rips, TreeAndPoint) {
  EXPECT_EQ(rips_delta_exact(path_graph(9)).delta.twice, 0);
  EXPECT_EQ(rips_delta_estimate(path_graph(1), 10).delta.twice, 0);
}

TEST(Rips, EightCycle) {
  auto g = cycle_graph(8);
  EXPECT_EQ(rips_delta_exact(g).delta.twice, 4);
  EXPECT_LE(rips_delta_estimate(g, 50).delta.twice, 4);
}

TEST(Rips, EstimateIsMonotoneInSamples) {
  auto b = build_cayley_ball(GroupSpec::abelian(2), 4);
  int prev = 0;
  for (std::size_t s : {10, 100, 1000}) {
    int d = rips_delta_estimate(b.graph, s, 3).delta.twice;
    EXPECT_GE(d, prev);
    prev = d;
  }
}

TEST(Stability, FreeGroupZeroDelta) {
  auto b = build_cayley_ball(GroupSpec::free(2), 8);
  auto r = check_geodesic_stability(b.graph, HalfInt{0}, 3);
  EXPECT_GT(r.cases, 0u);
  EXPECT_TRUE(r.pass());
}

TEST(Stability, PathExample) {
  auto r = check_geodesic_stability(path_graph(9), HalfInt{0}, 2);
  EXPECT_TRUE(r.pass());
}

TEST(Stability, CycleAtThreeDelta) {
  auto g = cycle_graph(8);
  auto d = rips_delta_exact(g).delta;
  auto r = check_geodesic_stability(g, d, (3 * d.twice + 1) / 2);
  EXPECT_TRUE(r.pass());
}

TEST(Stability, RejectsSmallScale) {
  EXPECT_ANY_THROW(check_geodesic_stability(cycle_graph(8), HalfInt{4}, 3));
}

// The cutoff uses (d(x,e) + d(x,y) - d(y,e)) / 2 with x the farther point.
TEST(ScaleCutoff, Examples) {
  auto g = path_graph(9);
  EXPECT_EQ(scale_cutoff(g, 8, 5, HalfInt{0}), 1);
  EXPECT_EQ(scale_cutoff(g, 5, 8, HalfInt{0}), 1);
  EXPECT_EQ(scale_cutoff(g, 8, 0, HalfInt{0}), 3);
  auto p = path_graph(30);
  // quantity 29, minus 7.5
  EXPECT_EQ(scale_cutoff(p, 29, 0, HalfInt{3}), 4);
  // quantity 13, minus 5
  EXPECT_EQ(scale_cutoff(p, 13, 0, HalfInt{2}), 3);
  EXPECT_THROW(scale_cutoff(p, 10, 0, HalfInt{2}), std::invalid_argument);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "lpemb/compression.hpp"
#include "lpemb/lp_vector.hpp"

using namespace lpemb;

namespace {

CoordLabel raw(std::int64_t key, std::int64_t index = 0) { return {Space::Raw, index, key}; }

LpVector random_vector(std::mt19937_64& rng, double p) {
  std::uniform_int_distribution<int> key(0, 15), len(0, 8);
  std::uniform_real_distribution<double> val(-3, 3);
  std::vector<LpVector::Entry> es;
  for (int j = len(rng); j > 0; --j) es.push_back({raw(key(rng)), val(rng)});
  return LpVector(p, es);
}

}  // namespace

TEST(LpVector, Norms) {
  EXPECT_DOUBLE_EQ(LpVector(2.0, {{raw(1), 1}, {raw(2), 1}, {raw(3), 1}}).norm(), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(LpVector(2.0).norm(), 0.0);
  EXPECT_DOUBLE_EQ(LpVector(2.0, {{raw(1), 2}, {raw(2), -2}}).norm(), std::sqrt(8.0));
  EXPECT_NEAR(LpVector(3.0, {{raw(1), 1}, {raw(2), 1}}).norm(), std::cbrt(2.0), 1e-15);
}

TEST(LpVector, ArithmeticPrunesZeros) {
  LpVector v(2.0, {{raw(1), 1.5}, {raw(4), -2}});
  EXPECT_TRUE((v - v).empty());
  EXPECT_TRUE((v * 0.0).empty());
  LpVector w(2.0, {{raw(1, 7), 3}});
  auto s = v + w;
  EXPECT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s.at(raw(1, 7)), 3);
  EXPECT_DOUBLE_EQ(s.at(raw(1)), 1.5);
}

TEST(LpVector, ConstructorMergesDuplicates) {
  LpVector v(2.0, {{raw(2), 1}, {raw(1), 1}, {raw(2), -1}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.entries()[0].first, raw(1));
}

TEST(LpVector, MismatchedExponent) {
  LpVector a(2.0, {{raw(1), 1}}), b(3.0, {{raw(1), 1}});
  EXPECT_THROW(a + b, LpError);
  EXPECT_THROW(LpVector(0.5), LpError);
}

TEST(LpVector, TriangleInequalityAndDistance) {
  std::mt19937_64 rng(7);
  for (double p : {1.5, 2.0, 3.0})
    for (int t = 0; t < 300; ++t) {
      auto u = random_vector(rng, p), v = random_vector(rng, p);
      EXPECT_LE((u + v).norm(), u.norm() + v.norm() + 1e-12);
      EXPECT_NEAR(distance(u, v), (u - v).norm(), 1e-12);
      EXPECT_NEAR(distance_pow(u, v), (u - v).norm_pow(), 1e-9);
      EXPECT_DOUBLE_EQ(distance(u, v), distance(v, u));
    }
}

TEST(FunctionClass, SquareRoot) {
  auto r = check_function_class(CompressionFunction::power(0.5), 2.0, 1000);
  EXPECT_TRUE(r.concave);
  EXPECT_TRUE(r.cp);
  EXPECT_TRUE(r.ccp);
  EXPECT_FALSE(r.numeric_only);
}

TEST(FunctionClass, IdentityFailsSummability) {
  auto r = check_function_class(CompressionFunction::power(1.0), 2.0, 1000);
  EXPECT_FALSE(r.cp);
  EXPECT_FALSE(r.ccp);
}

TEST(FunctionClass, LogProfile) {
  auto f = CompressionFunction::iterated_log(1.0, 2.0);
  EXPECT_DOUBLE_EQ(f(0), 0.0);
  auto r = check_function_class(f, 2.0, 1000);
  EXPECT_TRUE(r.ccp);
  EXPECT_TRUE(r.n0.has_value());
}

TEST(FunctionClass, TablesAreNumericOnly) {
  std::vector<double> vals;
  for (int n = 0; n <= 64; ++n) vals.push_back(std::sqrt(n));
  auto f = CompressionFunction::table(vals);
  auto r = check_function_class(f, 2.0, 64);
  EXPECT_TRUE(r.numeric_only);
  EXPECT_THROW(f(65), std::exception);
}

TEST(FunctionClass, ConvexWitness) {
  auto r = check_function_class(CompressionFunction::power(1.5), 2.0, 100);
  EXPECT_FALSE(r.concave);
  EXPECT_TRUE(r.concavity_witness.has_value());
}

TEST(FunctionClass, ParseForms) {
  EXPECT_EQ(CompressionFunction::parse("power:0.75", 2).family(), CompressionFunction::Family::Power);
  EXPECT_DOUBLE_EQ(CompressionFunction::parse("power:0.75", 2)(16), 8.0);
  EXPECT_EQ(CompressionFunction::parse("iterlog:1", 2).family(), CompressionFunction::Family::IteratedLog);
  EXPECT_ANY_THROW(CompressionFunction::parse("cube", 2));
}

TEST(SumLemmas, SmallestInstance) {
  auto f = CompressionFunction::power(0.5);
  double C = cp_partial_sum(f, 2.0, 1000000);
  EXPECT_NEAR(C, 1.6449330668, 1e-6);
  auto r = verify_sum_lemmas({1, 2}, f, 2.0, C);
  EXPECT_DOUBLE_EQ(r.lower_lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.lower_rhs, 1.0 / 32);
  EXPECT_DOUBLE_EQ(r.upper_lhs, 0.25);
  EXPECT_TRUE(r.pass());
  EXPECT_TRUE(r.doubling_applies);
}

TEST(SumLemmas, RejectsBadLists) {
  auto f = CompressionFunction::power(0.5);
  EXPECT_ANY_THROW(verify_sum_lemmas({1, 2, 3}, f, 2.0, 1.0));
  EXPECT_ANY_THROW(verify_sum_lemmas({2, 1}, f, 2.0, 1.0));
  EXPECT_ANY_THROW(verify_sum_lemmas({0, 1}, f, 2.0, 1.0));
}

TEST(SumLemmas, RandomInstances) {
  std::mt19937_64 rng(11);
  for (double p : {1.5, 2.0, 3.0}) {
    for (auto f : {CompressionFunction::power(0.5), CompressionFunction::iterated_log(1.0, p)}) {
      double C = cp_partial_sum(f, p, 1000000);
      for (int t = 0; t < 100; ++t) {
        std::uniform_int_distribution<int> half(1, 20);
        std::uniform_int_distribution<std::int64_t> val(1, 10000);
        std::set<std::int64_t> s;
        int want = 2 * half(rng);
        while (static_cast<int>(s.size()) < want) s.insert(val(rng));
        std::vector<std::int64_t> M(s.begin(), s.end());
        auto r = verify_sum_lemmas(M, f, p, C);
        EXPECT_TRUE(r.pass()) << f.describe() << " p=" << p << " t=" << t;
      }
    }
  }
}

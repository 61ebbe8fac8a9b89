#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "lpemb/config.hpp"
#include "lpemb/distortion.hpp"
#include "lpemb/pipeline.hpp"

using namespace lpemb;
namespace fs = std::filesystem;

namespace {

// Path vertices mapped to the single coordinate rho(v).
std::vector<LpVector> line_images(int n, const std::function<double(int)>& rho) {
  std::vector<LpVector> out;
  for (int v = 0; v < n; ++v) out.push_back(LpVector(2.0, {{CoordLabel{Space::Raw, 0, 0}, rho(v)}}));
  return out;
}

std::vector<Vertex> iota_vertices(int n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lpemb_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Distortion, IdentityMap) {
  auto g = path_graph(20);
  auto curve = measure_distortion(g, iota_vertices(20), line_images(20, [](int v) { return v; }));
  ASSERT_EQ(curve.points.size(), 19u);
  for (const auto& c : curve.points) {
    EXPECT_DOUBLE_EQ(c.rho_minus, c.r);
    EXPECT_DOUBLE_EQ(c.rho_plus, c.r);
    EXPECT_EQ(c.pairs, static_cast<std::size_t>(20 - c.r));
  }
  EXPECT_DOUBLE_EQ(estimate_compression(curve), 1.0);
  EXPECT_DOUBLE_EQ(curve_lipschitz(curve), 1.0);
  EXPECT_DOUBLE_EQ(adjacent_lipschitz(g, iota_vertices(20), line_images(20, [](int v) { return v; })), 1.0);
}

TEST(Distortion, SquareRootProfile) {
  DistortionCurve curve;
  for (int r = 1; r <= 64; ++r) curve.points.push_back({r, std::sqrt(r), std::sqrt(r), 1});
  EXPECT_NEAR(estimate_compression(curve), 0.5, 0.02);
  auto fit = fit_lower(curve, 0.5);
  EXPECT_NEAR(fit.c, 1.0, 1e-12);
  for (const auto& c : curve.points) EXPECT_GE(c.rho_minus + 1e-12, fit.c * std::sqrt(c.r) - fit.c_prime);
}

TEST(Distortion, ConstantMapCannotBeEstimated) {
  auto g = path_graph(10);
  auto curve = measure_distortion(g, iota_vertices(10), line_images(10, [](int) { return 1.0; }));
  for (const auto& c : curve.points) EXPECT_DOUBLE_EQ(c.rho_plus, 0.0);
  EXPECT_THROW(estimate_compression(curve), std::invalid_argument);
}

TEST(Distortion, TooFewDistances) {
  auto g = path_graph(4);
  auto curve = measure_distortion(g, iota_vertices(4), line_images(4, [](int v) { return v; }));
  EXPECT_THROW(estimate_compression(curve), std::invalid_argument);
}

TEST(Distortion, ScalingInvariance) {
  auto fx = build_fixture(FixtureSpec::parse("free(2,8)"));
  Config cfg;
  cfg.fixture = fx.spec;
  cfg.embed = "hyp";
  auto images = evaluate_embedding(fx, cfg);
  auto curve = measure_distortion(fx.graph(), fx.safe, images);
  std::vector<LpVector> scaled;
  for (const auto& v : images) scaled.push_back(v * 3.5);
  auto scurve = measure_distortion(fx.graph(), fx.safe, scaled);
  EXPECT_NEAR(compression_slope(curve), compression_slope(scurve), 1e-9);
  EXPECT_NEAR(curve_lipschitz(scurve), 3.5 * curve_lipschitz(curve), 1e-9);
}

TEST(Distortion, SymmetricUnderRelabeling) {
  auto fx = build_fixture(FixtureSpec::parse("z2xz(4)"));
  Config cfg;
  cfg.fixture = fx.spec;
  cfg.embed = "tg";
  auto images = evaluate_embedding(fx, cfg);
  auto curve = measure_distortion(fx.graph(), fx.safe, images);
  std::vector<std::size_t> perm(fx.safe.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(5);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vertex> vs;
  std::vector<LpVector> ims;
  for (auto j : perm) {
    vs.push_back(fx.safe[j]);
    ims.push_back(images[j]);
  }
  auto shuffled = measure_distortion(fx.graph(), vs, ims);
  ASSERT_EQ(curve.points.size(), shuffled.points.size());
  for (std::size_t j = 0; j < curve.points.size(); ++j) {
    EXPECT_EQ(curve.points[j].r, shuffled.points[j].r);
    EXPECT_EQ(curve.points[j].pairs, shuffled.points[j].pairs);
    EXPECT_DOUBLE_EQ(curve.points[j].rho_minus, shuffled.points[j].rho_minus);
    EXPECT_DOUBLE_EQ(curve.points[j].rho_plus, shuffled.points[j].rho_plus);
  }
}

TEST(Distortion, MinRatioSkipsZeroDenominators) {
  DistortionCurve curve;
  for (int r = 1; r <= 5; ++r) curve.points.push_back({r, 2.0 * r, 2.0 * r, 1});
  EXPECT_DOUBLE_EQ(min_ratio(curve, [](int r) { return r < 3 ? 0.0 : r; }), 2.0);
}

TEST(Config, Sections) {
  auto cfg = parse_config(
      "[fixture]\nfixture = free(2,6)\nsafe_radius = 2\n"
      "[embedding]\nembed = hyp ; p = 3\nf = power:0.75\n"
      "[checks]\nchecks = lemmas function\nseed = 9\n"
      "[output]\nout = /tmp/x  # comment\n");
  EXPECT_EQ(cfg.fixture.text(), "free(2,6)");
  EXPECT_EQ(cfg.safe_radius, 2);
  EXPECT_EQ(cfg.embed, "hyp");
  EXPECT_DOUBLE_EQ(cfg.p, 3.0);
  EXPECT_EQ(cfg.f, "power:0.75");
  EXPECT_EQ(cfg.checks, (std::vector<std::string>{"lemmas", "function"}));
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.out_dir, "/tmp/x");
}

TEST(Config, RejectsSmallExponent) {
  try {
    parse_config("fixture=free(2,8)\nembed=hyp\np=1\n", "run.cfg");
    FAIL() << "accepted p = 1";
  } catch (const ConfigError& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("p > 1 required"), std::string::npos) << what;
    EXPECT_NE(what.find("run.cfg:3"), std::string::npos) << what;
  }
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    parse_config("embed = hyp\n\nbogus = 1\n", "a.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("a.cfg:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("[embedding]\nfixture = path(5)\n"), ConfigError);
  EXPECT_THROW(parse_config("fixture = moon(3)\n"), std::exception);
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
}

TEST(Config, LaterSettingsWin) {
  Config cfg;
  apply_settings(cfg, parse_settings("K = 2\nK = 3\n", "f"));
  EXPECT_EQ(cfg.K, 3);
}

TEST(FixtureSpec, RoundTrip) {
  for (const char* t : {"free(2,8)", "abelian(2,6)", "cyclic(5,3)", "zxz(10)", "z2xz(8)", "path(9)", "cycle(8)"})
    EXPECT_EQ(FixtureSpec::parse(t).text(), t);
  EXPECT_ANY_THROW(FixtureSpec::parse("free(2)"));
}

TEST(Fixture, SafeBallDefaults) {
  auto fx = build_fixture(FixtureSpec::parse("free(2,6)"));
  EXPECT_EQ(fx.safe_radius, 3);
  EXPECT_EQ(fx.safe.size(), 1u + 4 + 12 + 36);
  auto p = build_fixture(FixtureSpec::parse("path(9)"));
  EXPECT_EQ(p.safe.size(), 9u);
}

TEST(Pipeline, ReportIsByteStable) {
  auto run = [](const std::string& name) {
    Config cfg = parse_config("fixture=free(2,6)\nembed=hyp\nchecks=delta lemmas function stability\n");
    cfg.out_dir = scratch(name).string();
    auto r = run_pipeline(cfg);
    EXPECT_TRUE(r.pass);
    return std::make_tuple(slurp(fs::path(cfg.out_dir) / "report.json"), slurp(fs::path(cfg.out_dir) / "curve.csv"),
                           slurp(fs::path(cfg.out_dir) / "embedding.csv"));
  };
  auto a = run("stable_a"), b = run("stable_b");
  EXPECT_EQ(std::get<0>(a), std::get<0>(b));
  EXPECT_EQ(std::get<1>(a), std::get<1>(b));
  EXPECT_EQ(std::get<2>(a), std::get<2>(b));
  EXPECT_EQ(std::get<1>(a).substr(0, 27), "r,rho_minus,rho_plus,pairs\n");
  EXPECT_EQ(std::get<2>(a).substr(0, 27), "vertex,namespace,key,value\n");
  auto rep = nlohmann::json::parse(std::get<0>(a));
  EXPECT_EQ(rep["schema"], 1);
  EXPECT_FALSE(rep.contains("timings"));
  EXPECT_TRUE(rep["checks"]["lemmas"]["pass"].get<bool>());
}

TEST(Pipeline, SpqrReportsConstants) {
  Config cfg = parse_config("fixture=zxz(6)\nchecks=spqr\nK=1\n");
  cfg.out_dir = scratch("spqr").string();
  auto r = run_pipeline(cfg);
  const auto& s = r.report["checks"]["spqr"];
  for (const char* key : {"c1", "c2", "c3_membership", "c4"}) EXPECT_TRUE(s.contains(key)) << key;
  EXPECT_EQ(s["uniform_K"], 2);
}

TEST(Pipeline, JsonNumbersRoundToTwelveDigits) {
  EXPECT_EQ(json_number(1.0 / 3).dump(), "0.333333333333");
  EXPECT_TRUE(json_number(std::nan("")).is_null());
  EXPECT_EQ(json_number(2.0).dump(), "2.0");
}

#include "lpemb/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lpemb/compression.hpp"
#include "lpemb/distortion.hpp"
#include "lpemb/hyp_embed.hpp"
#include "lpemb/hyperbolicity.hpp"
#include "lpemb/relhyp.hpp"
#include "lpemb/tree_graded.hpp"

namespace lpemb {

using nlohmann::json;

namespace {

GroupSpec group_of(const FixtureSpec& s) {
  if (s.family == "free") return GroupSpec::free(s.args[0]);
  if (s.family == "abelian") return GroupSpec::abelian(s.args[0]);
  if (s.family == "cyclic") return GroupSpec::cyclic(s.args[0]);
  if (s.family == "zxz") return GroupSpec::free_product({GroupSpec::abelian(1), GroupSpec::abelian(1)});
  if (s.family == "z2xz") return GroupSpec::rh_model({GroupSpec::abelian(2)});
  throw ConfigError("fixture '" + s.text() + "' is not a group");
}

int ball_radius_of(const FixtureSpec& s) { return s.args.back(); }

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

HalfInt resolve_delta(const Fixture& fx, const Config& cfg, json* out) {
  if (cfg.twice_delta) {
    if (out) (*out)["delta"] = {{"value", json_number(*cfg.twice_delta / 2.0)}, {"method", "configured"}};
    return {*cfg.twice_delta};
  }
  auto r = hyperbolicity_report(fx.graph(), cfg.seed, static_cast<std::size_t>(cfg.samples));
  if (out)
    (*out)["delta"] = {{"value", json_number(r.delta_rips.value())},
                       {"four_point", json_number(r.delta_four_point.value())},
                       {"rips_exact", r.rips_exact},
                       {"four_point_exhaustive", r.four_point_exhaustive},
                       {"method", r.method},
                       {"four_point_witness", r.four_point_witness}};
  return r.delta_rips;
}

std::vector<int> default_factors(const Fixture& fx) {
  const auto& f = fx.spec.family;
  if (f == "zxz" || f == "free") {
    std::vector<int> all(fx.ball->group->top_factor_count());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = static_cast<int>(j);
    return all;
  }
  if (f == "z2xz") return {0};
  return {};
}

PsiMode psi_mode(const Config& cfg) {
  if (cfg.psi == "indicator") return PsiMode::Indicator;
  if (cfg.psi == "radial") return PsiMode::Radial;
  return PsiMode::Auto;
}

json tally_json(const BoundTally& t) {
  return {{"checks", t.checks}, {"violations", t.violations}, {"worst_ratio", json_number(t.worst_ratio)}};
}

}  // namespace

json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt12(v).c_str(), nullptr);
}

Fixture build_fixture(const FixtureSpec& spec, int safe_radius) {
  Fixture fx;
  fx.spec = spec;
  if (spec.family == "path" || spec.family == "cycle" || spec.family == "file") {
    MetricGraph g = spec.family == "path"    ? path_graph(spec.args[0])
                    : spec.family == "cycle" ? cycle_graph(spec.args[0])
                                             : read_graph_file(spec.path);
    fx.owned = std::make_shared<const MetricGraph>(std::move(g));
    fx.radius = fx.owned->radius();
    fx.safe_radius = safe_radius >= 0 ? std::min(safe_radius, fx.radius) : fx.radius;
  } else {
    GroupSpec gs = group_of(spec);
    fx.ball = std::make_shared<const CayleyBall>(build_cayley_ball(gs, ball_radius_of(spec)));
    fx.radius = ball_radius_of(spec);
    fx.safe_radius = safe_radius >= 0 ? std::min(safe_radius, fx.radius) : fx.radius / 2;
    fx.convex = gs.ball_convex();
  }
  for (auto [v, d] : fx.graph().ball(fx.graph().basepoint(), fx.safe_radius)) fx.safe.push_back(v);
  return fx;
}

PieceSystem build_pieces(const Fixture& fx, const Config& cfg) {
  const MetricGraph& g = fx.graph();
  if (cfg.pieces == "singletons") return with_uncovered_singletons(PieceSystem::Builder(g).build(cfg.K), g);
  if (cfg.pieces == "whole") return whole_graph_piece(g, cfg.K);
  if (cfg.pieces != "auto") return read_pieces_file(cfg.pieces, g, cfg.K);
  auto factors = fx.ball ? default_factors(fx) : std::vector<int>{};
  if (factors.empty()) return with_uncovered_singletons(PieceSystem::Builder(g).build(cfg.K), g);
  CosetPieceOptions opt;
  opt.factors = factors;
  opt.radius = cfg.piece_radius;
  opt.ball_radius = cfg.piece_radius;
  opt.balls = cfg.balls == "none" ? BallPieces::None : cfg.balls == "all" ? BallPieces::All : BallPieces::Uncovered;
  opt.K = cfg.K;
  return pieces_from_cosets(*fx.ball, opt);
}

std::vector<LpVector> evaluate_embedding(const Fixture& fx, const Config& cfg) {
  const MetricGraph& g = fx.graph();
  auto f = CompressionFunction::parse(cfg.f, cfg.p);
  std::vector<LpVector> images;
  images.reserve(fx.safe.size());
  if (cfg.embed == "hyp") {
    TrumpetParams params{resolve_delta(fx, cfg, nullptr), {}, f, cfg.p};
    params.scales = default_scales(params.delta, 2 * fx.safe_radius);
    params.validate();
    for (Vertex v : fx.safe) images.push_back(embed_hyperbolic(g, v, params));
    return images;
  }
  PieceSystem ps = build_pieces(fx, cfg);
  auto psi = make_piece_embedding(ps, g, fx.cayley(), psi_mode(cfg), cfg.p);
  if (cfg.embed == "tg") {
    TreeGraded tg(g, ps);
    for (Vertex v : fx.safe) images.push_back(tg.embed(v, *psi, f, cfg.p));
  } else if (cfg.embed == "relhyp") {
    RelHyp rh(g, ps, {cfg.K, cfg.shared_small_space, cfg.merged_filter});
    for (Vertex v : fx.safe) images.push_back(rh.embed(v, *psi, f, cfg.p));
  } else {
    throw ConfigError("no embedding configured");
  }
  return images;
}

void write_embedding_csv(std::ostream& out, const std::vector<Vertex>& vertices,
                         const std::vector<LpVector>& images) {
  out << "vertex,namespace,key,value\n";
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (const auto& [label, v] : images[a].entries())
      out << vertices[a] << ',' << label.ns() << ',' << label.key_str() << ',' << fmt12(v) << '\n';
}

PipelineResult run_pipeline(const Config& cfg) {
  validate_config(cfg);
  using clock = std::chrono::steady_clock;
  PipelineResult res;
  json& rep = res.report;
  json timings = json::object();
  auto t0 = clock::now();
  auto lap = [&](const std::string& name, clock::time_point since) {
    timings[name] = json_number(std::chrono::duration<double>(clock::now() - since).count());
  };

  Fixture fx = build_fixture(cfg.fixture, cfg.safe_radius);
  const MetricGraph& g = fx.graph();
  lap("fixture", t0);
  rep["schema"] = 1;
  rep["fixture"] = {{"spec", cfg.fixture.text()},
                    {"vertices", g.vertex_count()},
                    {"edges", g.edge_count()},
                    {"radius", fx.radius},
                    {"safe_radius", fx.safe_radius},
                    {"safe_vertices", fx.safe.size()},
                    {"max_degree", g.max_degree()}};
  rep["config"] = {{"embed", cfg.embed}, {"f", cfg.f},         {"p", json_number(cfg.p)},
                   {"K", cfg.K},         {"psi", cfg.psi},     {"pieces", cfg.pieces},
                   {"piece_radius", cfg.piece_radius},         {"seed", cfg.seed},
                   {"checks", cfg.checks}, {"shared_small_space", cfg.shared_small_space},
                   {"merged_filter", cfg.merged_filter}};

  auto wants = [&](const char* c) { return std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end(); };
  const bool need_delta = cfg.embed == "hyp" || wants("delta") || wants("lemmas") || wants("stability");
  HalfInt delta{0};
  if (need_delta) {
    auto t = clock::now();
    delta = resolve_delta(fx, cfg, &rep);
    lap("delta", t);
  }
  const int scale_min = std::max(1, (3 * delta.twice + 1) / 2);
  const int scale_max = std::max(scale_min, fx.safe_radius);

  json checks = json::object();
  auto record = [&](const std::string& name, json body, bool ok) {
    body["pass"] = ok;
    checks[name] = std::move(body);
    res.pass = res.pass && ok;
  };

  if (wants("delta")) record("delta", json::object(), true);

  if (wants("function")) {
    auto t = clock::now();
    auto f = CompressionFunction::parse(cfg.f, cfg.p);
    auto r = check_function_class(f, cfg.p, 10000);
    json body = {{"concave", r.concave},          {"cp", r.cp},
                 {"ccp", r.ccp},                  {"numeric_only", r.numeric_only},
                 {"cp_partial_sum", json_number(r.cp_partial_sum)}, {"warnings", r.warnings}};
    body["n0"] = r.n0 ? json(*r.n0) : json(nullptr);
    record("function", body, r.cp && r.ccp);
    lap("function", t);
  }

  if (wants("stability")) {
    auto t = clock::now();
    json body = json::array();
    bool ok = true;
    std::size_t trials = g.vertex_count() <= 2000 ? 0 : static_cast<std::size_t>(cfg.samples);
    for (int n = scale_min; n <= scale_max; ++n) {
      auto r = check_geodesic_stability(g, delta, n, trials, cfg.seed);
      body.push_back({{"n", n}, {"cases", r.cases}, {"violations", r.violations}});
      ok = ok && r.pass();
    }
    record("stability", {{"scales", body}}, ok);
    lap("stability", t);
  }

  if (wants("lemmas")) {
    auto t = clock::now();
    auto h = check_hyp_lemmas(g, delta, cfg.p, fx.safe, scale_min, scale_max);
    json body = {{"C", json_number(h.C)},
                 {"trumpet_upper", tally_json(h.trumpet_upper)},
                 {"trumpet_lower", tally_json(h.trumpet_lower)},
                 {"level_upper", tally_json(h.level_upper)},
                 {"level_lower", tally_json(h.level_lower)},
                 {"level_lipschitz", tally_json(h.level_lipschitz)}};
    bool ok = h.pass();
    if (delta.twice == 0) {
      auto d = check_disjoint_support(g, delta, fx.safe);
      body["disjoint_support"] = {{"pairs", d.pairs},
                                  {"checks", d.checks},
                                  {"violations", d.violations},
                                  {"literal_checks", d.literal_checks},
                                  {"literal_overlaps", d.literal_overlaps}};
      ok = ok && d.pass();
    }
    if (cfg.embed == "relhyp") {
      PieceSystem ps = build_pieces(fx, cfg);
      RelHyp rh(g, ps, {cfg.K, cfg.shared_small_space, cfg.merged_filter});
      for (int R : {1, 2}) {
        auto c = check_count_stability(rh, fx.safe, R);
        body["count_stability_R" + std::to_string(R)] = {
            {"pairs", c.pairs}, {"checks", c.checks}, {"violations", c.violations}, {"worst", c.worst}};
        ok = ok && c.pass();
      }
      auto s = check_small_trumpets(rh, fx.safe, cfg.p);
      body["small_trumpets"] = {{"checks", s.checks},
                                {"lower_violations", s.lower_violations},
                                {"upper_violations", s.upper_violations},
                                {"skipped_missing_entry", s.skipped_missing_entry},
                                {"averaged_checks", s.averaged_checks},
                                {"averaged_violations", s.averaged_violations},
                                {"quarter_checks", s.quarter_checks},
                                {"quarter_failures", s.quarter_failures},
                                {"worst_quarter_ratio", json_number(s.worst_quarter_ratio)}};
      ok = ok && s.pass();
      auto sh = measure_small_shape(rh, fx.safe, cfg.p);
      body["small_shape"] = {{"checks", sh.checks}, {"skipped", sh.skipped}, {"constant", json_number(sh.constant)}};
      auto psi = make_piece_embedding(ps, g, fx.cayley(), psi_mode(cfg), cfg.p);
      auto lg = measure_large_shape(rh, *psi, fx.safe, cfg.p);
      body["large_shape"] = {{"checks", lg.checks}, {"constant", json_number(lg.constant)}};
    }
    record("lemmas", body, ok);
    lap("lemmas", t);
  }

  if (wants("tg")) {
    auto t = clock::now();
    PieceSystem ps = build_pieces(fx, cfg);
    auto v = validate_tree_graded(g, ps);
    json body = {{"uncovered", v.uncovered.size()},
                 {"disconnected_pieces", v.disconnected_pieces.size()},
                 {"overlaps", v.overlaps.size()},
                 {"containments", v.containments.size()},
                 {"loose_cycles", v.loose_cycles.size()}};
    bool ok = v.pass();
    if (ok) {
      TreeGraded tg(g, ps);
      auto b = tg.check_bilipschitz(fx.safe);
      body["tree_classes"] = tg.tree_classes();
      body["bilipschitz"] = {{"pairs", b.pairs},
                             {"violations", b.violations},
                             {"min_ratio", json_number(b.min_ratio)},
                             {"max_ratio", json_number(b.max_ratio)}};
      ok = b.pass();
    }
    record("tg", body, ok);
    lap("tg", t);
  }

  if (wants("spqr")) {
    auto t = clock::now();
    PieceSystem ps = build_pieces(fx, cfg);
    auto r = check_spqr(g, ps, fx.safe, cfg.K, cfg.spqr_search);
    json body = {{"K", r.K},
                 {"c1", r.c1},
                 {"c2", r.c2},
                 {"c3_membership", r.c3_membership},
                 {"c3_overlap", r.c3_overlap},
                 {"c4", r.c4},
                 {"min_membership", r.min_membership},
                 {"conditions", {{"C1", r.c1_pass()}, {"C2", r.c2_pass()}, {"C3", r.c3_pass()}, {"C4", r.c4_pass()}}}};
    body["uniform_K"] = r.uniform_K ? json(*r.uniform_K) : json(nullptr);
    json wit = json::array();
    for (const auto& w : r.witnesses)
      wit.push_back({{"condition", w.condition}, {"x", w.x}, {"y", w.y}, {"piece", w.piece},
                     {"other", w.other}, {"value", w.value}});
    body["witnesses"] = wit;
    record("spqr", body, r.pass());
    lap("spqr", t);
  }
  rep["checks"] = checks;

  std::filesystem::path dir(cfg.out_dir);
  if (cfg.embed != "none") {
    auto t = clock::now();
    auto images = evaluate_embedding(fx, cfg);
    auto curve = measure_distortion(g, fx.safe, images, fx.distance_depth_limit());
    lap("embedding", t);
    json pts = json::array();
    for (const auto& c : curve.points)
      pts.push_back({{"r", c.r}, {"rho_minus", json_number(c.rho_minus)},
                     {"rho_plus", json_number(c.rho_plus)}, {"pairs", c.pairs}});
    json emb = {{"kind", cfg.embed},
                {"curve", pts},
                {"lipschitz", json_number(curve_lipschitz(curve))},
                {"adjacent_lipschitz", json_number(adjacent_lipschitz(g, fx.safe, images))}};
    try {
      double alpha = estimate_compression(curve);
      auto fit = fit_lower(curve, alpha);
      emb["compression_estimate"] = json_number(alpha);
      emb["lower_fit"] = {{"c", json_number(fit.c)}, {"c_prime", json_number(fit.c_prime)},
                          {"alpha", json_number(fit.alpha)}};
    } catch (const std::invalid_argument& e) {
      emb["compression_estimate"] = nullptr;
      emb["lower_fit"] = nullptr;
      emb["compression_note"] = e.what();
    }
    rep["embedding"] = emb;
    std::filesystem::create_directories(dir);
    {
      std::ofstream out(dir / "curve.csv");
      out << "r,rho_minus,rho_plus,pairs\n";
      for (const auto& c : curve.points)
        out << c.r << ',' << fmt12(c.rho_minus) << ',' << fmt12(c.rho_plus) << ',' << c.pairs << '\n';
      res.written.push_back((dir / "curve.csv").string());
    }
    if (cfg.write_embedding) {
      std::ofstream out(dir / "embedding.csv");
      write_embedding_csv(out, fx.safe, images);
      res.written.push_back((dir / "embedding.csv").string());
    }
  }
  rep["pass"] = res.pass;
  if (cfg.timings) {
    lap("total", t0);
    rep["timings"] = timings;
  }
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "report.json");
  out << rep.dump(2) << '\n';
  res.written.push_back((dir / "report.json").string());
  return res;
}

}  // namespace lpemb

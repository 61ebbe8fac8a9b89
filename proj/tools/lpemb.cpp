#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpemb/config.hpp"
#include "lpemb/distortion.hpp"
#include "lpemb/pipeline.hpp"

namespace {

using lpemb::Config;
using lpemb::Setting;

struct Flags {
  std::string config_file;
  bool config_priority = false;
  std::vector<std::string> sets;
  std::string fixture, f, p, K, seed, out, pieces, psi, delta, samples, safe_radius, piece_radius;
};

void add_common(CLI::App* app, Flags& fl) {
  app->add_option("--config", fl.config_file, "key=value config file");
  app->add_flag("--config-priority", fl.config_priority, "let the config file override flags");
  app->add_option("--set", fl.sets, "extra key=value settings")->take_all();
  app->add_option("--fixture", fl.fixture, "free(k,R) abelian(k,R) cyclic(m,R) zxz(R) z2xz(R) path(n) cycle(n) file(path)");
  app->add_option("--f", fl.f, "compression function: power:a, iterlog:eps, table:path");
  app->add_option("--p", fl.p, "exponent p > 1");
  app->add_option("--K", fl.K, "piece constant K");
  app->add_option("--seed", fl.seed, "seed for sampled checks");
  app->add_option("--out", fl.out, "output directory");
  app->add_option("--pieces", fl.pieces, "auto | singletons | whole | piece file");
  app->add_option("--psi", fl.psi, "auto | indicator | radial");
  app->add_option("--delta", fl.delta, "override delta (half-integer)");
  app->add_option("--samples", fl.samples, "sample count for large graphs");
  app->add_option("--safe-radius", fl.safe_radius, "radius of the evaluated ball");
  app->add_option("--piece-radius", fl.piece_radius, "neighbourhood radius of coset pieces");
}

std::vector<Setting> flag_settings(const Flags& fl) {
  std::vector<Setting> out;
  auto push = [&](const char* key, const std::string& v) {
    if (!v.empty()) out.push_back({key, v, "flag", 0, ""});
  };
  push("fixture", fl.fixture);
  push("f", fl.f);
  push("p", fl.p);
  push("k", fl.K);
  push("seed", fl.seed);
  push("out", fl.out);
  push("pieces", fl.pieces);
  push("psi", fl.psi);
  push("delta", fl.delta);
  push("samples", fl.samples);
  push("safe_radius", fl.safe_radius);
  push("piece_radius", fl.piece_radius);
  for (const auto& s : fl.sets) {
    auto extra = lpemb::parse_settings(s, "flag");
    out.insert(out.end(), extra.begin(), extra.end());
  }
  return out;
}

Config build_config(const Flags& fl, const std::vector<Setting>& forced) {
  Config cfg;
  std::vector<Setting> file = fl.config_file.empty() ? std::vector<Setting>{} : lpemb::read_settings_file(fl.config_file);
  auto flags = flag_settings(fl);
  if (fl.config_priority) {
    lpemb::apply_settings(cfg, flags);
    lpemb::apply_settings(cfg, file);
  } else {
    lpemb::apply_settings(cfg, file);
    lpemb::apply_settings(cfg, flags);
  }
  lpemb::apply_settings(cfg, forced);
  lpemb::validate_config(cfg);
  return cfg;
}

int finish(const lpemb::PipelineResult& r) {
  for (const auto& w : r.written) std::cerr << "wrote " << w << '\n';
  std::cout << (r.pass ? "PASS" : "FAIL") << '\n';
  return r.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse embeddings of graphs into l^p"};
  app.require_subcommand(1);
  Flags fl;

  auto* gen = app.add_subcommand("gen", "write a fixture graph");
  std::string gen_out;
  add_common(gen, fl);
  gen->add_option("-o,--output", gen_out, "graph file (stdout if omitted)");

  auto* delta = app.add_subcommand("delta", "hyperbolicity constants");
  add_common(delta, fl);

  auto* check = app.add_subcommand("check", "run one check");
  std::string check_kind;
  add_common(check, fl);
  check->add_option("kind", check_kind, "function | lemmas | tg | spqr | stability")
      ->required()
      ->check(CLI::IsMember({"function", "lemmas", "tg", "spqr", "stability"}));
  std::string check_embed;
  check->add_option("--embed", check_embed, "embedding the lemma checks refer to");

  auto* embed = app.add_subcommand("embed", "evaluate an embedding and its distortion");
  std::string embed_kind;
  add_common(embed, fl);
  embed->add_option("kind", embed_kind, "hyp | tg | relhyp")->required()->check(CLI::IsMember({"hyp", "tg", "relhyp"}));

  auto* dist = app.add_subcommand("distortion", "print the distortion curve of an embedding");
  std::string dist_kind = "hyp";
  add_common(dist, fl);
  dist->add_option("kind", dist_kind, "hyp | tg | relhyp")->check(CLI::IsMember({"hyp", "tg", "relhyp"}));

  auto* report = app.add_subcommand("report", "run a full config document");
  add_common(report, fl);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      Config cfg = build_config(fl, {});
      auto fx = lpemb::build_fixture(cfg.fixture, cfg.safe_radius);
      if (gen_out.empty()) {
        lpemb::write_graph(std::cout, fx.graph());
      } else {
        std::ofstream out(gen_out);
        if (!out) throw std::runtime_error("cannot write " + gen_out);
        lpemb::write_graph(out, fx.graph());
      }
      return 0;
    }
    if (delta->parsed()) {
      Config cfg = build_config(fl, {{"check", "delta", "flag", 0, ""}, {"embed", "none", "flag", 0, ""}});
      auto r = lpemb::run_pipeline(cfg);
      std::cout << r.report["delta"].dump(2) << '\n';
      return r.pass ? 0 : 2;
    }
    if (check->parsed()) {
      std::vector<Setting> forced{{"check", check_kind, "flag", 0, ""}};
      if (!check_embed.empty()) forced.push_back({"embed", check_embed, "flag", 0, ""});
      Config cfg = build_config(fl, forced);
      auto r = lpemb::run_pipeline(cfg);
      std::cout << r.report["checks"][check_kind].dump(2) << '\n';
      return finish(r);
    }
    if (embed->parsed()) {
      Config cfg = build_config(fl, {{"embed", embed_kind, "flag", 0, ""}});
      return finish(lpemb::run_pipeline(cfg));
    }
    if (dist->parsed()) {
      Config cfg = build_config(fl, {{"embed", dist_kind, "flag", 0, ""}});
      auto r = lpemb::run_pipeline(cfg);
      std::cout << "r,rho_minus,rho_plus,pairs\n";
      for (const auto& c : r.report["embedding"]["curve"])
        std::cout << c["r"] << ',' << c["rho_minus"] << ',' << c["rho_plus"] << ',' << c["pairs"] << '\n';
      return r.pass ? 0 : 2;
    }
    if (report->parsed()) {
      Config cfg = build_config(fl, {});
      return finish(lpemb::run_pipeline(cfg));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

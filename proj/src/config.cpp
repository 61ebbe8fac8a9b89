#include "lpemb/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace lpemb {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const Setting& s, const std::string& msg) {
  throw ConfigError(s.origin + (s.line > 0 ? ":" + std::to_string(s.line) : std::string()) + ": " + msg);
}

int to_int(const Setting& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.value.data(), s.value.data() + s.value.size(), v);
  if (ec != std::errc() || ptr != s.value.data() + s.value.size())
    fail(s, "'" + s.key + "' expects an integer, got '" + s.value + "'");
  return v;
}

double to_double(const Setting& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s.value, &used);
    if (used == s.value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(s, "'" + s.key + "' expects a number, got '" + s.value + "'");
}

bool to_bool(const Setting& s) {
  std::string v = lower(s.value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(s, "'" + s.key + "' expects true or false, got '" + s.value + "'");
}

void one_of(const Setting& s, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (s.value == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  fail(s, "'" + s.key + "' must be one of " + list + ", got '" + s.value + "'");
}

const std::map<std::string, std::string>& home_sections() {
  static const std::map<std::string, std::string> m = {
      {"fixture", "fixture"},      {"safe_radius", "fixture"},  {"pieces", "fixture"},
      {"piece_radius", "fixture"}, {"balls", "fixture"},        {"embed", "embedding"},
      {"f", "embedding"},          {"p", "embedding"},          {"k", "embedding"},
      {"delta", "embedding"},      {"psi", "embedding"},        {"shared_small_space", "embedding"},
      {"merged_filter", "embedding"}, {"check", "checks"},      {"checks", "checks"},
      {"seed", "checks"},          {"samples", "checks"},       {"spqr_search", "checks"},
      {"out", "output"},           {"dir", "output"},           {"embedding_csv", "output"},
      {"timings", "output"},
  };
  return m;
}

}  // namespace

std::string FixtureSpec::text() const {
  if (family == "file") return "file(" + path + ")";
  std::string s = family + "(";
  for (std::size_t j = 0; j < args.size(); ++j) s += (j ? "," : "") + std::to_string(args[j]);
  return s + ")";
}

FixtureSpec FixtureSpec::parse(std::string_view text) {
  std::string t = trim(text);
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') throw ConfigError("fixture must look like family(args), got '" + t + "'");
  FixtureSpec f;
  f.family = lower(trim(std::string_view(t).substr(0, open)));
  std::string inner = t.substr(open + 1, t.size() - open - 2);
  f.args.clear();
  if (f.family == "file") {
    f.path = trim(inner);
    if (f.path.empty()) throw ConfigError("file() needs a path");
    return f;
  }
  std::stringstream ss(inner);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::string p = trim(part);
    int v = 0;
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec != std::errc() || ptr != p.data() + p.size()) throw ConfigError("fixture argument '" + p + "' is not an integer");
    f.args.push_back(v);
  }
  static const std::map<std::string, std::size_t> arity = {
      {"free", 2}, {"abelian", 2}, {"cyclic", 2}, {"zxz", 1}, {"z2xz", 1}, {"path", 1}, {"cycle", 1}};
  auto it = arity.find(f.family);
  if (it == arity.end()) throw ConfigError("unknown fixture family '" + f.family + "'");
  if (f.args.size() != it->second)
    throw ConfigError(f.family + " takes " + std::to_string(it->second) + " argument(s)");
  for (int a : f.args)
    if (a < 0) throw ConfigError("fixture arguments must be nonnegative");
  if ((f.family == "free" || f.family == "abelian") && f.args[0] < 1) throw ConfigError("rank must be >= 1");
  if (f.family == "cyclic" && f.args[0] < 2) throw ConfigError("cyclic order must be >= 2");
  if ((f.family == "path" || f.family == "cycle") && f.args[0] < (f.family == "cycle" ? 3 : 1))
    throw ConfigError(f.family + " is too small");
  return f;
}

std::vector<Setting> parse_settings(std::string_view text, const std::string& origin) {
  std::vector<Setting> out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::string l = trim(raw);
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ConfigError(origin + ":" + std::to_string(line) + ": unterminated section header");
      section = lower(trim(std::string_view(l).substr(1, l.size() - 2)));
      if (section != "fixture" && section != "embedding" && section != "checks" && section != "output")
        throw ConfigError(origin + ":" + std::to_string(line) + ": unknown section [" + section + "]");
      continue;
    }
    std::stringstream parts(l);
    std::string item;
    while (std::getline(parts, item, ';')) {
      std::string a = trim(item);
      if (a.empty()) continue;
      auto eq = a.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(line) + ": expected key=value, got '" + a + "'");
      Setting s{lower(trim(std::string_view(a).substr(0, eq))), trim(std::string_view(a).substr(eq + 1)),
                origin, line, section};
      if (s.key.empty()) fail(s, "empty key");
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Setting> read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str(), path);
}

void apply_settings(Config& cfg, const std::vector<Setting>& settings) {
  const auto& homes = home_sections();
  for (const auto& s : settings) {
    auto home = homes.find(s.key);
    if (home == homes.end()) fail(s, "unknown key '" + s.key + "'");
    if (!s.section.empty() && s.section != home->second)
      fail(s, "key '" + s.key + "' belongs in [" + home->second + "]");
    const std::string& k = s.key;
    try {
      if (k == "fixture") cfg.fixture = FixtureSpec::parse(s.value);
    } catch (const ConfigError& e) {
      fail(s, e.what());
    }
    if (k == "safe_radius") cfg.safe_radius = to_int(s);
    else if (k == "pieces") cfg.pieces = s.value;
    else if (k == "piece_radius") cfg.piece_radius = to_int(s);
    else if (k == "balls") { one_of(s, {"none", "uncovered", "all"}); cfg.balls = s.value; }
    else if (k == "embed") { one_of(s, {"none", "hyp", "tg", "relhyp"}); cfg.embed = s.value; }
    else if (k == "f") cfg.f = s.value;
    else if (k == "p") {
      cfg.p = to_double(s);
      if (!(cfg.p > 1.0)) fail(s, "p > 1 required");
    } else if (k == "k") {
      cfg.K = to_int(s);
      if (cfg.K < 1) fail(s, "K must be >= 1");
    } else if (k == "delta") {
      if (s.value == "auto") cfg.twice_delta.reset();
      else {
        double d = to_double(s);
        if (d < 0 || std::abs(2 * d - std::round(2 * d)) > 1e-12) fail(s, "delta must be a nonnegative half-integer");
        cfg.twice_delta = static_cast<int>(std::lround(2 * d));
      }
    } else if (k == "psi") { one_of(s, {"auto", "indicator", "radial"}); cfg.psi = s.value; }
    else if (k == "shared_small_space") cfg.shared_small_space = to_bool(s);
    else if (k == "merged_filter") cfg.merged_filter = to_bool(s);
    else if (k == "check" || k == "checks") {
      std::string list = s.value;
      std::replace(list.begin(), list.end(), ',', ' ');
      std::stringstream ss(list);
      std::string c;
      while (ss >> c) {
        Setting one = s;
        one.value = trim(c);
        if (one.value.empty()) continue;
        one_of(one, {"delta", "function", "lemmas", "stability", "tg", "spqr"});
        if (std::find(cfg.checks.begin(), cfg.checks.end(), one.value) == cfg.checks.end())
          cfg.checks.push_back(one.value);
      }
    } else if (k == "seed") {
      try {
        cfg.seed = std::stoull(s.value);
      } catch (const std::exception&) {
        fail(s, "'seed' expects a nonnegative integer");
      }
    } else if (k == "samples") cfg.samples = to_int(s);
    else if (k == "spqr_search") cfg.spqr_search = to_int(s);
    else if (k == "out" || k == "dir") cfg.out_dir = s.value;
    else if (k == "embedding_csv") cfg.write_embedding = to_bool(s);
    else if (k == "timings") cfg.timings = to_bool(s);
  }
}

void validate_config(const Config& cfg) {
  if (!(cfg.p > 1.0)) throw ConfigError("p > 1 required");
  if (cfg.K < 1) throw ConfigError("K must be >= 1");
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (cfg.piece_radius < 0) throw ConfigError("piece_radius must be >= 0");
}

Config parse_config(std::string_view text, const std::string& origin) {
  Config cfg;
  apply_settings(cfg, parse_settings(text, origin));
  validate_config(cfg);
  return cfg;
}

}  // namespace lpemb

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lpemb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One key=value assignment with where it came from.
struct Setting {
  std::string key;
  std::string value;
  std::string origin;  // file name or "flag"
  int line = 0;
  std::string section;  // empty when given outside any section
};

// Fixture families: free(k,R), abelian(k,R), cyclic(m,R), zxz(R), z2xz(R),
// path(n), cycle(n), file(<path>).
struct FixtureSpec {
  std::string family = "path";
  std::vector<int> args{9};
  std::string path;
  std::string text() const;
  static FixtureSpec parse(std::string_view text);
};

struct Config {
  // [fixture]
  FixtureSpec fixture;
  int safe_radius = -1;      // -1: half the ball radius for groups, whole graph otherwise
  std::string pieces = "auto";  // auto | singletons | whole | <file>
  int piece_radius = 0;      // neighbourhood radius around peripheral cosets
  std::string balls = "uncovered";  // none | uncovered | all

  // [embedding]
  std::string embed = "none";  // none | hyp | tg | relhyp
  std::string f = "power:0.5";
  double p = 2.0;
  int K = 1;
  std::optional<int> twice_delta;  // overrides the computed delta
  std::string psi = "auto";        // auto | indicator | radial
  bool shared_small_space = false;
  bool merged_filter = false;

  // [checks]
  std::vector<std::string> checks;  // delta function lemmas stability tg spqr
  std::uint64_t seed = 0;
  int samples = 2000;
  int spqr_search = 8;

  // [output]
  std::string out_dir = ".";
  bool write_embedding = true;
  bool timings = false;
};

// Splits a key=value document. Lines may hold several assignments separated
// by ';'. '#' starts a comment.
std::vector<Setting> parse_settings(std::string_view text, const std::string& origin);
std::vector<Setting> read_settings_file(const std::string& path);

// Applies settings in order; errors carry origin:line.
void apply_settings(Config& cfg, const std::vector<Setting>& settings);
void validate_config(const Config& cfg);

Config parse_config(std::string_view text, const std::string& origin = "config");

}  // namespace lpemb

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpemb/graph.hpp"

namespace lpemb {

// Model group families. free(k) is realized as the free product of k copies
// of Z, and rh_model(H_1..H_m) as H_1 * ... * H_m * Z.
struct GroupSpec {
  enum class Family { Free, Abelian, Cyclic, FreeProduct, RhModel };

  Family family = Family::Abelian;
  int rank = 1;  // k for free/abelian, m for cyclic
  std::vector<GroupSpec> factors;

  static GroupSpec free(int k);
  static GroupSpec abelian(int k);
  static GroupSpec cyclic(int m);
  static GroupSpec free_product(std::vector<GroupSpec> factors);
  static GroupSpec rh_model(std::vector<GroupSpec> peripherals);

  void validate() const;
  std::string describe() const;
  // Accepts free(k), abelian(k), cyclic(m), free_product(...)/fp(...), rh_model(...).
  static GroupSpec parse(std::string_view text);

  // Free-product factors seen from the top level (free(k) has k copies of Z).
  std::vector<GroupSpec> top_factors() const;
  bool is_product() const;
  // Whether geodesics between points of any ball B(e,r) can be chosen inside it.
  bool ball_convex() const;
};

using GroupWord = std::vector<std::int16_t>;

// Normal-form arithmetic for a GroupSpec. Elements are flat integer encodings:
// abelian factors store exponent tuples, cyclic factors a residue, and free
// products a syllable list [factor, length, payload...].
class Group {
 public:
  explicit Group(const GroupSpec& spec);
  ~Group();
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  const GroupSpec& spec() const { return spec_; }
  int generator_count() const;
  GroupWord identity() const;
  GroupWord multiply(std::span<const std::int16_t> w, int generator) const;
  std::string format(std::span<const std::int16_t> w) const;
  std::optional<GroupWord> parse_word(std::string_view word) const;
  std::string generator_name(int generator) const;

  // Top-level syllable decomposition: (factor index, payload) in order.
  struct Syllable {
    int factor;
    std::span<const std::int16_t> payload;
  };
  std::vector<Syllable> syllables(std::span<const std::int16_t> w) const;
  int top_factor_count() const;
  // Payload of a single-factor element as an ordinary word in that factor.
  bool is_identity(std::span<const std::int16_t> w) const;

  struct Node;

 private:
  GroupSpec spec_;
  std::unique_ptr<Node> root_;
  std::vector<std::string> letters_;
};

// Flat per-vertex element store with a hash index.
class ElementStore {
 public:
  std::size_t size() const { return offsets_.size() - 1; }
  std::span<const std::int16_t> operator[](std::size_t v) const {
    return {data_.data() + offsets_[v], data_.data() + offsets_[v + 1]};
  }
  std::optional<Vertex> find(std::span<const std::int16_t> w) const;
  Vertex insert(std::span<const std::int16_t> w);  // returns existing id if present

 private:
  void grow();
  std::vector<std::int16_t> data_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint64_t> hashes_;
  std::vector<Vertex> table_;
};

struct CayleyBall {
  GroupSpec spec;
  int radius = 0;
  std::shared_ptr<const Group> group;
  std::shared_ptr<const ElementStore> elements;
  MetricGraph graph;

  std::span<const std::int16_t> element(Vertex v) const { return (*elements)[v]; }
  std::optional<Vertex> find(std::string_view word) const;
  Vertex vertex(std::string_view word) const;  // throws if absent
};

CayleyBall build_cayley_ball(const GroupSpec& spec, int radius);

}  // namespace lpemb

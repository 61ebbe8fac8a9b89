#include "lpemb/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace lpemb {

GroupSpec GroupSpec::free(int k) {
  GroupSpec s;
  s.family = Family::Free;
  s.rank = k;
  return s;
}

GroupSpec GroupSpec::abelian(int k) {
  GroupSpec s;
  s.family = Family::Abelian;
  s.rank = k;
  return s;
}

GroupSpec GroupSpec::cyclic(int m) {
  GroupSpec s;
  s.family = Family::Cyclic;
  s.rank = m;
  return s;
}

GroupSpec GroupSpec::free_product(std::vector<GroupSpec> factors) {
  GroupSpec s;
  s.family = Family::FreeProduct;
  s.rank = 0;
  s.factors = std::move(factors);
  return s;
}

GroupSpec GroupSpec::rh_model(std::vector<GroupSpec> peripherals) {
  GroupSpec s;
  s.family = Family::RhModel;
  s.rank = 0;
  s.factors = std::move(peripherals);
  return s;
}

void GroupSpec::validate() const {
  switch (family) {
    case Family::Free:
    case Family::Abelian:
      if (rank < 1) throw std::invalid_argument("group rank must be >= 1");
      break;
    case Family::Cyclic:
      if (rank < 2) throw std::invalid_argument("cyclic order must be >= 2");
      break;
    case Family::FreeProduct:
      if (factors.size() < 2) throw std::invalid_argument("free product needs >= 2 factors");
      for (const auto& f : factors) f.validate();
      break;
    case Family::RhModel:
      if (factors.empty()) throw std::invalid_argument("rh_model needs >= 1 peripheral factor");
      for (const auto& f : factors) f.validate();
      break;
  }
}

std::string GroupSpec::describe() const {
  auto list = [&] {
    std::string s;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) s += ",";
      s += factors[i].describe();
    }
    return s;
  };
  switch (family) {
    case Family::Free: return "free(" + std::to_string(rank) + ")";
    case Family::Abelian: return "abelian(" + std::to_string(rank) + ")";
    case Family::Cyclic: return "cyclic(" + std::to_string(rank) + ")";
    case Family::FreeProduct: return "free_product(" + list() + ")";
    case Family::RhModel: return "rh_model(" + list() + ")";
  }
  return {};
}

namespace {

struct SpecParser {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("group spec '" + std::string(s) + "' at " + std::to_string(pos) +
                                ": " + msg);
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (start == pos) fail("expected a group family name");
    return std::string(s.substr(start, pos - start));
  }
  int integer() {
    skip();
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc()) fail("expected an integer");
    pos = static_cast<std::size_t>(ptr - s.data());
    return v;
  }
  GroupSpec spec() {
    std::string name = ident();
    if (!eat('(')) fail("expected '('");
    GroupSpec out;
    if (name == "free" || name == "abelian" || name == "cyclic") {
      int v = integer();
      out = name == "free" ? GroupSpec::free(v)
            : name == "abelian" ? GroupSpec::abelian(v)
                                : GroupSpec::cyclic(v);
    } else if (name == "free_product" || name == "fp" || name == "rh_model") {
      std::vector<GroupSpec> fs;
      do {
        fs.push_back(spec());
      } while (eat(','));
      out = name == "rh_model" ? GroupSpec::rh_model(std::move(fs))
                               : GroupSpec::free_product(std::move(fs));
    } else {
      fail("unknown group family '" + name + "'");
    }
    if (!eat(')')) fail("expected ')'");
    return out;
  }
};

}  // namespace

GroupSpec GroupSpec::parse(std::string_view text) {
  SpecParser p{text};
  GroupSpec out = p.spec();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  out.validate();
  return out;
}

std::vector<GroupSpec> GroupSpec::top_factors() const {
  switch (family) {
    case Family::Free: return std::vector<GroupSpec>(rank, GroupSpec::abelian(1));
    case Family::FreeProduct: return factors;
    case Family::RhModel: {
      auto fs = factors;
      fs.push_back(GroupSpec::abelian(1));
      return fs;
    }
    default: return {*this};
  }
}

bool GroupSpec::is_product() const {
  return family == Family::Free || family == Family::FreeProduct || family == Family::RhModel;
}

bool GroupSpec::ball_convex() const {
  switch (family) {
    case Family::Free:
    case Family::Abelian: return true;
    case Family::Cyclic: return rank <= 3;
    default:
      for (const auto& f : factors)
        if (!f.ball_convex()) return false;
      return true;
  }
}

struct Group::Node {
  enum class Kind { Abelian, Cyclic, Product };
  Kind kind = Kind::Abelian;
  int k = 0;
  int m = 0;
  int first_letter = 0;
  int gen_count = 0;
  std::vector<std::unique_ptr<Node>> children;
  std::vector<int> child_of_gen;
  std::vector<int> local_gen;

  GroupWord identity() const {
    switch (kind) {
      case Kind::Abelian: return GroupWord(k, 0);
      case Kind::Cyclic: return GroupWord{0};
      case Kind::Product: return {};
    }
    return {};
  }

  bool is_identity(std::span<const std::int16_t> w) const {
    switch (kind) {
      case Kind::Abelian: return std::all_of(w.begin(), w.end(), [](auto x) { return x == 0; });
      case Kind::Cyclic: return w[0] == 0;
      case Kind::Product: return w.empty();
    }
    return false;
  }

  void multiply(std::span<const std::int16_t> w, int gen, GroupWord& out) const {
    switch (kind) {
      case Kind::Abelian: {
        out.assign(w.begin(), w.end());
        out[gen / 2] += (gen % 2 == 0) ? 1 : -1;
        return;
      }
      case Kind::Cyclic: {
        int v = w[0] + (gen == 0 ? 1 : -1);
        out.assign(1, static_cast<std::int16_t>(((v % m) + m) % m));
        return;
      }
      case Kind::Product: {
        int c = child_of_gen[gen];
        const Node& child = *children[c];
        std::size_t last = w.size();
        for (std::size_t p = 0; p < w.size(); p += 2 + static_cast<std::size_t>(w[p + 1])) last = p;
        out.assign(w.begin(), w.end());
        GroupWord inner;
        if (last < w.size() && w[last] == c) {
          auto payload = w.subspan(last + 2, static_cast<std::size_t>(w[last + 1]));
          child.multiply(payload, local_gen[gen], inner);
          out.resize(last);
          if (!child.is_identity(inner)) {
            out.push_back(static_cast<std::int16_t>(c));
            out.push_back(static_cast<std::int16_t>(inner.size()));
            out.insert(out.end(), inner.begin(), inner.end());
          }
        } else {
          GroupWord id = child.identity();
          child.multiply(id, local_gen[gen], inner);
          out.push_back(static_cast<std::int16_t>(c));
          out.push_back(static_cast<std::int16_t>(inner.size()));
          out.insert(out.end(), inner.begin(), inner.end());
        }
        return;
      }
    }
  }

  void format(std::span<const std::int16_t> w, const std::vector<std::string>& letters,
              std::string& out) const {
    auto power = [&](int letter, int e) {
      if (e == 0) return;
      out += letters[letter];
      if (e != 1) out += "^" + std::to_string(e);
    };
    switch (kind) {
      case Kind::Abelian:
        for (int j = 0; j < k; ++j) power(first_letter + j, w[j]);
        return;
      case Kind::Cyclic: {
        int v = w[0];
        power(first_letter, v <= m / 2 ? v : v - m);
        return;
      }
      case Kind::Product:
        for (std::size_t p = 0; p < w.size(); p += 2 + static_cast<std::size_t>(w[p + 1]))
          children[w[p]]->format(w.subspan(p + 2, static_cast<std::size_t>(w[p + 1])), letters, out);
        return;
    }
  }

  // Finds the generator pair (+, -) for a letter within this subtree.
  std::optional<std::pair<int, int>> letter_generators(int letter) const {
    switch (kind) {
      case Kind::Abelian:
        if (letter >= first_letter && letter < first_letter + k) {
          int j = letter - first_letter;
          return std::make_pair(2 * j, 2 * j + 1);
        }
        return std::nullopt;
      case Kind::Cyclic:
        if (letter == first_letter) return std::make_pair(0, m > 2 ? 1 : 0);
        return std::nullopt;
      case Kind::Product: {
        int offset = 0;
        for (const auto& ch : children) {
          if (auto r = ch->letter_generators(letter)) return std::make_pair(r->first + offset, r->second + offset);
          offset += ch->gen_count;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::string generator_name(int gen, const std::vector<std::string>& letters) const {
    switch (kind) {
      case Kind::Abelian: return letters[first_letter + gen / 2] + (gen % 2 ? "^-1" : "");
      case Kind::Cyclic: return letters[first_letter] + (gen == 1 ? "^-1" : "");
      case Kind::Product: return children[child_of_gen[gen]]->generator_name(local_gen[gen], letters);
    }
    return {};
  }
};

namespace {

std::unique_ptr<Group::Node> compile(const GroupSpec& spec, int& next_letter) {
  auto node = std::make_unique<Group::Node>();
  using K = Group::Node::Kind;
  auto add_children = [&](const std::vector<GroupSpec>& fs) {
    node->kind = K::Product;
    for (const auto& f : fs) node->children.push_back(compile(f, next_letter));
    for (std::size_t c = 0; c < node->children.size(); ++c)
      for (int g = 0; g < node->children[c]->gen_count; ++g) {
        node->child_of_gen.push_back(static_cast<int>(c));
        node->local_gen.push_back(g);
      }
    node->gen_count = static_cast<int>(node->child_of_gen.size());
  };
  switch (spec.family) {
    case GroupSpec::Family::Abelian:
      node->kind = K::Abelian;
      node->k = spec.rank;
      node->first_letter = next_letter;
      next_letter += spec.rank;
      node->gen_count = 2 * spec.rank;
      break;
    case GroupSpec::Family::Cyclic:
      node->kind = K::Cyclic;
      node->m = spec.rank;
      node->first_letter = next_letter++;
      node->gen_count = spec.rank > 2 ? 2 : 1;
      break;
    default:
      add_children(spec.top_factors());
      break;
  }
  return node;
}

}  // namespace

Group::Group(const GroupSpec& spec) : spec_(spec) {
  spec_.validate();
  int letters = 0;
  root_ = compile(spec_, letters);
  if (letters > 26) throw std::invalid_argument("group needs more than 26 generator letters");
  for (int i = 0; i < letters; ++i) letters_.push_back(std::string(1, static_cast<char>('a' + i)));
}

Group::~Group() = default;

int Group::generator_count() const { return root_->gen_count; }

GroupWord Group::identity() const { return root_->identity(); }

GroupWord Group::multiply(std::span<const std::int16_t> w, int generator) const {
  if (generator < 0 || generator >= generator_count()) throw std::out_of_range("generator index");
  GroupWord out;
  root_->multiply(w, generator, out);
  return out;
}

std::string Group::format(std::span<const std::int16_t> w) const {
  std::string out;
  root_->format(w, letters_, out);
  return out.empty() ? "e" : out;
}

std::string Group::generator_name(int generator) const {
  return root_->generator_name(generator, letters_);
}

bool Group::is_identity(std::span<const std::int16_t> w) const { return root_->is_identity(w); }

std::optional<GroupWord> Group::parse_word(std::string_view word) const {
  GroupWord w = identity();
  if (word == "e") return w;
  std::size_t pos = 0;
  while (pos < word.size()) {
    char c = word[pos++];
    if (c < 'a' || c > 'z') return std::nullopt;
    int letter = c - 'a';
    if (letter >= static_cast<int>(letters_.size())) return std::nullopt;
    long exponent = 1;
    if (pos < word.size() && word[pos] == '^') {
      ++pos;
      auto [ptr, ec] = std::from_chars(word.data() + pos, word.data() + word.size(), exponent);
      if (ec != std::errc()) return std::nullopt;
      pos = static_cast<std::size_t>(ptr - word.data());
    }
    auto gens = root_->letter_generators(letter);
    if (!gens) return std::nullopt;
    int gen = exponent >= 0 ? gens->first : gens->second;
    GroupWord tmp;
    for (long i = 0; i < std::labs(exponent); ++i) {
      root_->multiply(w, gen, tmp);
      w.swap(tmp);
    }
  }
  return w;
}

std::vector<Group::Syllable> Group::syllables(std::span<const std::int16_t> w) const {
  std::vector<Syllable> out;
  if (root_->kind != Node::Kind::Product) {
    if (!root_->is_identity(w)) out.push_back({0, w});
    return out;
  }
  for (std::size_t p = 0; p < w.size(); p += 2 + static_cast<std::size_t>(w[p + 1]))
    out.push_back({w[p], w.subspan(p + 2, static_cast<std::size_t>(w[p + 1]))});
  return out;
}

int Group::top_factor_count() const {
  return root_->kind == Node::Kind::Product ? static_cast<int>(root_->children.size()) : 1;
}

namespace {

std::uint64_t hash_word(std::span<const std::int16_t> w) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ w.size();
  for (auto x : w) {
    h ^= static_cast<std::uint16_t>(x);
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

}  // namespace

std::optional<Vertex> ElementStore::find(std::span<const std::int16_t> w) const {
  if (table_.empty()) return std::nullopt;
  std::uint64_t h = hash_word(w);
  std::size_t mask = table_.size() - 1;
  for (std::size_t slot = h & mask;; slot = (slot + 1) & mask) {
    Vertex v = table_[slot];
    if (v < 0) return std::nullopt;
    if (hashes_[v] == h) {
      auto cur = (*this)[static_cast<std::size_t>(v)];
      if (std::equal(cur.begin(), cur.end(), w.begin(), w.end())) return v;
    }
  }
}

void ElementStore::grow() {
  std::size_t cap = table_.empty() ? 1024 : table_.size() * 2;
  table_.assign(cap, -1);
  std::size_t mask = cap - 1;
  for (std::size_t v = 0; v < size(); ++v) {
    std::size_t slot = hashes_[v] & mask;
    while (table_[slot] >= 0) slot = (slot + 1) & mask;
    table_[slot] = static_cast<Vertex>(v);
  }
}

Vertex ElementStore::insert(std::span<const std::int16_t> w) {
  if (auto v = find(w)) return *v;
  if ((size() + 1) * 2 > table_.size()) grow();
  std::uint64_t h = hash_word(w);
  auto id = static_cast<Vertex>(size());
  data_.insert(data_.end(), w.begin(), w.end());
  offsets_.push_back(data_.size());
  hashes_.push_back(h);
  std::size_t mask = table_.size() - 1;
  std::size_t slot = h & mask;
  while (table_[slot] >= 0) slot = (slot + 1) & mask;
  table_[slot] = id;
  return id;
}

std::optional<Vertex> CayleyBall::find(std::string_view word) const {
  auto w = group->parse_word(word);
  if (!w) return std::nullopt;
  return elements->find(*w);
}

Vertex CayleyBall::vertex(std::string_view word) const {
  auto v = find(word);
  if (!v) throw std::invalid_argument("word '" + std::string(word) + "' not in the ball");
  return *v;
}

CayleyBall build_cayley_ball(const GroupSpec& spec, int radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  spec.validate();
  auto group = std::make_shared<Group>(spec);
  auto store = std::make_shared<ElementStore>();
  std::vector<int> depth;
  store->insert(group->identity());
  depth.push_back(0);
  const int gens = group->generator_count();
  GroupWord cur, next;
  for (std::size_t head = 0; head < store->size(); ++head) {
    if (depth[head] >= radius) continue;
    auto span = (*store)[head];
    cur.assign(span.begin(), span.end());
    for (int g = 0; g < gens; ++g) {
      next = group->multiply(cur, g);
      std::size_t before = store->size();
      store->insert(next);
      if (store->size() > before) depth.push_back(depth[head] + 1);
    }
  }
  const auto n = static_cast<Vertex>(store->size());
  std::vector<std::int64_t> offsets{0};
  offsets.reserve(static_cast<std::size_t>(n) + 1);
  std::vector<Vertex> flat;
  flat.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(gens));
  std::vector<Vertex> nb;
  for (Vertex v = 0; v < n; ++v) {
    auto span = (*store)[v];
    cur.assign(span.begin(), span.end());
    nb.clear();
    for (int g = 0; g < gens; ++g) {
      next = group->multiply(cur, g);
      if (auto w = store->find(next); w && *w != v) nb.push_back(*w);
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    flat.insert(flat.end(), nb.begin(), nb.end());
    offsets.push_back(static_cast<std::int64_t>(flat.size()));
  }
  CayleyBall ball{spec, radius, group, store,
                  MetricGraph::from_csr(std::move(offsets), std::move(flat), 0)};
  std::shared_ptr<const Group> gp = group;
  std::shared_ptr<const ElementStore> sp = store;
  ball.graph.set_labeler([gp, sp](Vertex v) { return gp->format((*sp)[v]); },
                         [gp, sp](std::string_view word) -> std::optional<Vertex> {
                           auto w = gp->parse_word(word);
                           if (!w) return std::nullopt;
                           return sp->find(*w);
                         });
  return ball;
}

}  // namespace lpemb

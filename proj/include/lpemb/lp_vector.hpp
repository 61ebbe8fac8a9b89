#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpemb {

enum class Space : std::int32_t {
  Raw = 0,    // plain coordinates (identity maps, tests)
  Level = 1,  // per-scale level functions, index = scale
  TreeRay = 2,
  PieceImage = 3,
  SmallTrumpet = 4,
  LargeTrumpet = 5,
};

const char* space_name(Space s);

// Namespace (space, index) plus a key inside it.
struct CoordLabel {
  Space space = Space::Raw;
  std::int64_t index = 0;
  std::int64_t key = 0;

  friend auto operator<=>(const CoordLabel&, const CoordLabel&) = default;
  std::string ns() const;
  std::string key_str() const;
};

// Packs two non-negative 32-bit values into one key.
inline std::int64_t pack_key(std::int64_t hi, std::int64_t lo) { return (hi << 32) | (lo & 0xffffffffLL); }

class LpError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finitely supported vector in an l^p direct sum. Entries are sorted by label
// and never zero.
class LpVector {
 public:
  using Entry = std::pair<CoordLabel, double>;

  LpVector() = default;
  explicit LpVector(double p);
  // Sorts, merges duplicate labels by summation, and drops zeros.
  LpVector(double p, std::vector<Entry> entries);

  double p() const { return p_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double at(const CoordLabel& label) const;

  double norm() const;
  double norm_pow() const;  // sum |v|^p

  LpVector operator+(const LpVector& w) const;
  LpVector operator-(const LpVector& w) const;
  LpVector operator*(double c) const;
  LpVector& operator+=(const LpVector& w);

 private:
  LpVector combine(const LpVector& w, double sign) const;
  double p_ = 2.0;
  std::vector<Entry> entries_;
};

double distance(const LpVector& a, const LpVector& b);
// sum |a - b|^p without materializing the difference.
double distance_pow(const LpVector& a, const LpVector& b);

}  // namespace lpemb

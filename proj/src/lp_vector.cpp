#include "lpemb/lp_vector.hpp"

#include <algorithm>
#include <cmath>

namespace lpemb {

namespace {
inline double pow_abs(double v, double p) {
  if (p == 2.0) return v * v;
  return std::pow(std::abs(v), p);
}
}  // namespace

const char* space_name(Space s) {
  switch (s) {
    case Space::Raw: return "x";
    case Space::Level: return "H";
    case Space::TreeRay: return "phiT";
    case Space::PieceImage: return "phiI";
    case Space::SmallTrumpet: return "Fs";
    case Space::LargeTrumpet: return "phil";
  }
  return "?";
}

std::string CoordLabel::ns() const {
  return std::string(space_name(space)) + ":" + std::to_string(index);
}

std::string CoordLabel::key_str() const {
  if (key >> 32) return std::to_string(key >> 32) + "/" + std::to_string(key & 0xffffffffLL);
  return std::to_string(key);
}

LpVector::LpVector(double p) : p_(p) {
  if (!(p >= 1.0)) throw LpError("p must be >= 1");
}

LpVector::LpVector(double p, std::vector<Entry> entries) : LpVector(p) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (auto& e : entries) {
    if (!entries_.empty() && entries_.back().first == e.first)
      entries_.back().second += e.second;
    else
      entries_.push_back(e);
  }
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
}

double LpVector::at(const CoordLabel& label) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                             [](const Entry& e, const CoordLabel& l) { return e.first < l; });
  if (it != entries_.end() && it->first == label) return it->second;
  return 0.0;
}

double LpVector::norm_pow() const {
  double s = 0.0;
  for (const auto& [l, v] : entries_) s += pow_abs(v, p_);
  return s;
}

double LpVector::norm() const { return std::pow(norm_pow(), 1.0 / p_); }

LpVector LpVector::combine(const LpVector& w, double sign) const {
  if (p_ != w.p_) throw LpError("mismatched p in vector arithmetic");
  LpVector out(p_);
  out.entries_.reserve(entries_.size() + w.entries_.size());
  auto a = entries_.begin(), b = w.entries_.begin();
  while (a != entries_.end() || b != w.entries_.end()) {
    if (b == w.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      out.entries_.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      out.entries_.emplace_back(b->first, sign * b->second);
      ++b;
    } else {
      double v = a->second + sign * b->second;
      if (v != 0.0) out.entries_.emplace_back(a->first, v);
      ++a;
      ++b;
    }
  }
  return out;
}

LpVector LpVector::operator+(const LpVector& w) const { return combine(w, 1.0); }
LpVector LpVector::operator-(const LpVector& w) const { return combine(w, -1.0); }

LpVector& LpVector::operator+=(const LpVector& w) {
  *this = combine(w, 1.0);
  return *this;
}

LpVector LpVector::operator*(double c) const {
  LpVector out(p_);
  if (c == 0.0) return out;
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.second *= c;
  std::erase_if(out.entries_, [](const Entry& e) { return e.second == 0.0; });
  return out;
}

double distance_pow(const LpVector& a, const LpVector& b) {
  if (a.p() != b.p()) throw LpError("mismatched p in distance");
  const double p = a.p();
  double s = 0.0;
  auto i = a.entries().begin(), j = b.entries().begin();
  const auto ie = a.entries().end(), je = b.entries().end();
  while (i != ie || j != je) {
    if (j == je || (i != ie && i->first < j->first)) {
      s += pow_abs(i->second, p);
      ++i;
    } else if (i == ie || j->first < i->first) {
      s += pow_abs(j->second, p);
      ++j;
    } else {
      s += pow_abs(i->second - j->second, p);
      ++i;
      ++j;
    }
  }
  return s;
}

double distance(const LpVector& a, const LpVector& b) {
  return std::pow(distance_pow(a, b), 1.0 / a.p());
}

}  // namespace lpemb

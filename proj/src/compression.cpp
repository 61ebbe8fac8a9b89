#include "lpemb/compression.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace lpemb {

CompressionFunction CompressionFunction::power(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("power exponent must be >= 0");
  CompressionFunction f;
  f.family_ = Family::Power;
  f.param_ = a;
  return f;
}

CompressionFunction CompressionFunction::iterated_log(double eps, double p) {
  if (!(eps > 0.0)) throw std::invalid_argument("iterlog epsilon must be > 0");
  if (!(p > 1.0)) throw std::invalid_argument("p > 1 required");
  CompressionFunction f;
  f.family_ = Family::IteratedLog;
  f.param_ = eps;
  f.p_ = p;
  return f;
}

CompressionFunction CompressionFunction::table(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("empty function table");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("table values must be finite and >= 0");
  CompressionFunction f;
  f.family_ = Family::Table;
  f.param_ = 0.0;
  f.values_ = std::move(values);
  return f;
}

CompressionFunction CompressionFunction::parse(std::string_view spec, double p) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("function spec '" + std::string(spec) + "' needs family:value");
  std::string family(spec.substr(0, colon));
  std::string arg(spec.substr(colon + 1));
  auto number = [&] {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty())
      throw std::invalid_argument("function spec '" + std::string(spec) + "': bad number");
    return v;
  };
  if (family == "power") return power(number());
  if (family == "iterlog") return iterated_log(number(), p);
  if (family == "table") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open function table " + arg);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw std::invalid_argument("malformed function table " + arg);
    return table(std::move(values));
  }
  throw std::invalid_argument("unknown function family '" + family + "'");
}

double CompressionFunction::operator()(std::int64_t n) const {
  if (n < 0) throw std::invalid_argument("f evaluated at a negative argument");
  switch (family_) {
    case Family::Power:
      if (n == 0) return param_ == 0.0 ? 1.0 : 0.0;
      return std::pow(static_cast<double>(n), param_);
    case Family::IteratedLog: {
      if (n == 0) return 0.0;
      double l = std::log2(static_cast<double>(n) + 2.0);
      double ll = std::log2(l);
      return static_cast<double>(n) / std::pow(l * std::pow(ll, 1.0 + param_), 1.0 / p_);
    }
    case Family::Table:
      if (n >= static_cast<std::int64_t>(values_.size()))
        throw std::out_of_range("f evaluated beyond its table");
      return values_[static_cast<std::size_t>(n)];
  }
  return 0.0;
}

std::int64_t CompressionFunction::domain_limit() const {
  if (family_ == Family::Table) return static_cast<std::int64_t>(values_.size()) - 1;
  return std::int64_t{1} << 40;
}

std::string CompressionFunction::describe() const {
  char buf[64];
  switch (family_) {
    case Family::Power:
      std::snprintf(buf, sizeof buf, "power:%.12g", param_);
      return buf;
    case Family::IteratedLog:
      std::snprintf(buf, sizeof buf, "iterlog:%.12g", param_);
      return buf;
    case Family::Table: return "table[" + std::to_string(values_.size()) + "]";
  }
  return {};
}

double cp_partial_sum(const CompressionFunction& f, double p, std::int64_t N) {
  double s = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    double r = f(n) / static_cast<double>(n);
    s += std::pow(r, p) / static_cast<double>(n);
  }
  return s;
}

namespace {

bool leq(double a, double b) { return a <= b + kRelTol * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

FunctionClassReport check_function_class(const CompressionFunction& f, double p, std::int64_t N) {
  if (N < 4) throw std::invalid_argument("function class check needs N >= 4");
  if (!(p > 1.0)) throw std::invalid_argument("p > 1 required");
  FunctionClassReport r;
  N = std::min(N, f.domain_limit());
  std::vector<double> v(static_cast<std::size_t>(N) + 1);
  for (std::int64_t n = 0; n <= N; ++n) v[n] = f(n);

  // Concavity with monotonicity is equivalent to nonnegative, nonincreasing increments.
  r.concave = true;
  for (std::int64_t n = 0; n < N; ++n) {
    double inc = v[n + 1] - v[n];
    if (!leq(0.0, inc) || (n > 0 && !leq(inc, v[n] - v[n - 1]))) {
      r.concave = false;
      r.concavity_witness = n;
      break;
    }
  }

  r.cp_partial_sum = cp_partial_sum(f, p, N);
  bool tail_analytic = false;
  switch (f.family()) {
    case CompressionFunction::Family::Power:
      r.cp = f.parameter() < 1.0;
      tail_analytic = f.parameter() * p >= 1.0;
      break;
    case CompressionFunction::Family::IteratedLog:
      r.cp = true;
      tail_analytic = true;
      break;
    case CompressionFunction::Family::Table: {
      r.numeric_only = true;
      double half = cp_partial_sum(f, p, N / 2);
      r.cp = (r.cp_partial_sum - half) <= 0.01 * r.cp_partial_sum;
      r.warnings.push_back("table function: summability judged from partial sums only");
      break;
    }
  }

  // Smallest n0 such that f(n)^p / n is nondecreasing on [n0, N].
  std::int64_t n0 = N;
  for (std::int64_t n = N - 1; n >= 1; --n) {
    double a = std::pow(v[n], p) / static_cast<double>(n);
    double b = std::pow(v[n + 1], p) / static_cast<double>(n + 1);
    if (!leq(a, b)) break;
    n0 = n;
  }
  r.n0 = n0;
  bool tail_ok = f.family() == CompressionFunction::Family::Table ? n0 <= N / 2 : tail_analytic;
  r.ccp = r.concave && r.cp && tail_ok;
  return r;
}

SumLemmaReport verify_sum_lemmas(const std::vector<std::int64_t>& M, const CompressionFunction& f,
                                 double p, double C, bool hypotheses_hold) {
  if (M.empty() || M.size() % 2 != 0) throw std::invalid_argument("M must have even, nonzero size");
  if (M.front() < 1) throw std::invalid_argument("M must start at >= 1");
  for (std::size_t i = 1; i < M.size(); ++i)
    if (M[i] <= M[i - 1]) throw std::invalid_argument("M must be strictly increasing");
  SumLemmaReport r;
  r.hypotheses_hold = hypotheses_hold;
  std::int64_t total = 0;
  r.doubling_applies = true;
  for (std::size_t i = 0; i < M.size(); i += 2) {
    const double lo = static_cast<double>(M[i]), hi = static_cast<double>(M[i + 1]);
    const double gap = hi - lo;
    total += M[i + 1] - M[i];
    r.lower_lhs += std::pow(f(M[i + 1]), p) / hi * gap;
    r.upper_lhs += std::pow(f(M[i + 1]) / hi, p) * gap / hi;
    r.doubling_lhs += std::pow(f(M[i]) / lo, p) * gap / lo;
    if (M[i + 1] > 2 * M[i]) r.doubling_applies = false;
  }
  r.lower_rhs = std::pow(0.5, 3.0 + p) * std::pow(f(total), p);
  r.lower_pass = leq(r.lower_rhs, r.lower_lhs);
  r.upper_bound = C;
  r.upper_pass = leq(r.upper_lhs, C);
  r.doubling_bound = std::pow(2.0, p + 1.0) * C;
  r.doubling_pass = !r.doubling_applies || leq(r.doubling_lhs, r.doubling_bound);
  if (!r.doubling_applies) r.doubling_lhs = 0.0;
  return r;
}

}  // namespace lpemb

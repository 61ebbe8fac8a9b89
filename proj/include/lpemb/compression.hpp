#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpemb {

// Candidate lower-bound profiles f : N -> R>=0.
class CompressionFunction {
 public:
  enum class Family { Power, IteratedLog, Table };

  // n -> n^a
  static CompressionFunction power(double a);
  // n -> n / (log2(n+2) * (log2 log2(n+2))^(1+eps))^(1/p), with f(0) = 0
  static CompressionFunction iterated_log(double eps, double p);
  // values[n] = f(n); evaluation beyond the table is an error
  static CompressionFunction table(std::vector<double> values);
  // "power:0.5", "iterlog:1.0", "table:<path>" (one value per line, f(0) first)
  static CompressionFunction parse(std::string_view spec, double p);

  double operator()(std::int64_t n) const;
  Family family() const { return family_; }
  double parameter() const { return param_; }
  std::int64_t domain_limit() const;  // largest n that can be evaluated
  std::string describe() const;

 private:
  Family family_ = Family::Power;
  double param_ = 0.5;
  double p_ = 2.0;
  std::vector<double> values_;
};

struct FunctionClassReport {
  bool concave = false;
  bool cp = false;
  bool ccp = false;
  bool numeric_only = false;       // tables carry no analytic certificate
  std::optional<std::int64_t> n0;  // smallest n0 with f^p/n nondecreasing on [n0, N]
  double cp_partial_sum = 0.0;
  std::optional<std::int64_t> concavity_witness;  // first n where increments grow
  std::vector<std::string> warnings;
};

FunctionClassReport check_function_class(const CompressionFunction& f, double p, std::int64_t N);

// sum_{n=1}^{N} (1/n) (f(n)/n)^p
double cp_partial_sum(const CompressionFunction& f, double p, std::int64_t N);

struct SumLemmaReport {
  double lower_lhs = 0, lower_rhs = 0;  // concave-sum lower bound
  bool lower_pass = false;
  double upper_lhs = 0, upper_bound = 0;  // summability upper bound
  bool upper_pass = false;
  bool doubling_applies = false;
  double doubling_lhs = 0, doubling_bound = 0;
  bool doubling_pass = true;
  bool hypotheses_hold = false;  // f passes the class needed by both bounds
  bool pass() const { return lower_pass && upper_pass && doubling_pass; }
};

// Evaluates both summation inequalities for an increasing list M = {m_1 < ... < m_2k}.
// `C` is the truncated series constant (cp_partial_sum at N = 10^6 by default).
SumLemmaReport verify_sum_lemmas(const std::vector<std::int64_t>& M, const CompressionFunction& f,
                                 double p, double C, bool hypotheses_hold = true);

inline constexpr double kRelTol = 1e-9;

}  // namespace lpemb

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace mfa {

using BigInt = boost::multiprecision::cpp_int;

/// Invalid input: malformed config, violated precondition, bad domain.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of iterations before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A truncated series together with a rigorous bound on the omitted tail.
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// H(t) = -t log t - (1-t) log(1-t), natural log, H(0) = H(1) = 0.
double binary_entropy(double t);

/// -sum p log p over a probability vector (0 log 0 = 0).
double shannon_entropy(std::span<const double> probs);

double log_sum_exp(std::span<const double> values);

/// log of a positive big integer without overflowing double.
double log_big(const BigInt& x);

/// sum_{k > K} k / q^{k+1} for real q > 1, closed form.
double linear_geometric_tail(double q, int K);

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace mfa

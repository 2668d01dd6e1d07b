#include "mfa/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mfa {

double binary_entropy(double t) {
  require(t >= 0.0 && t <= 1.0, "binary_entropy: argument outside [0,1]");
  double h = 0.0;
  if (t > 0.0) h -= t * std::log(t);
  if (t < 1.0) h -= (1.0 - t) * std::log1p(-t);
  return h;
}

double shannon_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double log_sum_exp(std::span<const double> values) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : values) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - mx);
  return mx + std::log(acc);
}

// GCC flags a spurious memcpy overflow inside the cpp_int right shift.
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wstringop-overflow"
#pragma GCC diagnostic ignored "-Wstringop-overread"
double log_big(const BigInt& x) {
  require(x > 0, "log_big: non-positive argument");
  const auto bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log(x.convert_to<double>());
  const auto shift = bits - 60;
  BigInt head = x >> shift;
  return std::log(head.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}
#pragma GCC diagnostic pop

double linear_geometric_tail(double q, int K) {
  // sum_{k>K} k x^k = x^{K+1} ((K+1) - K x) / (1-x)^2 with x = 1/q, then one more factor x.
  const double x = 1.0 / q;
  const double xk1 = std::pow(x, K + 1);
  return x * xk1 * ((K + 1) - K * x) / ((1.0 - x) * (1.0 - x));
}

}  // namespace mfa

// ---------------------------------------------------------------------------

#include "mfa/rng.hpp"

namespace mfa {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t CounterRng::mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(mix(seed + kGolden) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))) {}

std::uint64_t CounterRng::next_u64() noexcept { return mix(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::size_t CounterRng::categorical(std::span<const double> weights) noexcept {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

}  // namespace mfa

#include "mfa/riesz_walsh.hpp"

#include "mfa/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace mfa::riesz {

using boost::multiprecision::cpp_rational;

void validate_signs(const SignWord& u) {
  for (auto v : u) require(v == 1 || v == -1, "sign word: entries must be +1 or -1");
}

double walsh_spectrum(int d, double alpha) {
  require(d >= 1, "walsh_spectrum: d must be >= 1");
  require(alpha >= -1.0 && alpha <= 1.0, "walsh_spectrum: alpha must lie in [-1, 1]");
  return 1.0 - 1.0 / d + binary_entropy((1.0 + alpha) / 2.0) / (d * std::numbers::ln2);
}

WalshRieszMeasure::WalshRieszMeasure(int d_, double b_) : d(d_), b(b_) {
  require(d >= 1, "riesz: d must be >= 1");
  require(std::isfinite(b) && std::abs(b) <= 1.0, "riesz: |b| must be <= 1");
}

double cylinder_mass(const WalshRieszMeasure& measure, const SignWord& u) {
  validate_signs(u);
  const std::size_t n = u.size();
  const std::size_t d = static_cast<std::size_t>(measure.d);
  double mass = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 4096)));
  for (std::size_t k = 1; d * k <= n; ++k) {
    int prod = 1;
    for (std::size_t i = 1; i <= d; ++i) prod *= u[i * k - 1];
    mass *= 1.0 + measure.b * prod;
  }
  return mass;
}

CharacterIndex::CharacterIndex(std::vector<std::int64_t> c) : coords(std::move(c)) {
  std::sort(coords.begin(), coords.end());
  require(std::adjacent_find(coords.begin(), coords.end()) == coords.end(), "character: repeated coordinate");
  require(coords.empty() || coords.front() >= 1, "character: coordinates are 1-based");
}

double fourier_coefficient(const WalshRieszMeasure& measure, const CharacterIndex& chi) {
  std::set<std::int64_t> rest(chi.coords.begin(), chi.coords.end());
  int generators = 0;
  // The generator ending at dk is the only one with maximum dk, so peeling off
  // the largest coordinate decides membership in the span.
  while (!rest.empty()) {
    const std::int64_t top = *rest.rbegin();
    if (top % measure.d != 0) return 0.0;
    const std::int64_t k = top / measure.d;
    for (std::int64_t i = 1; i <= measure.d; ++i) {
      const auto [it, inserted] = rest.insert(i * k);
      if (!inserted) rest.erase(it);
    }
    ++generators;
  }
  return std::pow(measure.b, generators);
}

std::complex<double> riesz_fourier_coefficient(const std::vector<std::complex<double>>& a, const std::vector<int>& eps) {
  require(eps.size() <= a.size(), "riesz_fourier_coefficient: more exponents than coefficients");
  std::complex<double> out = 1.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    require(eps[k] >= -1 && eps[k] <= 1, "riesz_fourier_coefficient: exponents must be -1, 0 or 1");
    if (eps[k] == 1) out *= a[k] / 2.0;
    if (eps[k] == -1) out *= std::conj(a[k]) / 2.0;
  }
  return out;
}

SignWord sample(const WalshRieszMeasure& measure, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "riesz sample: n must be >= 1");
  CounterRng rng(seed, 0);
  SignWord u(n);
  const std::size_t d = static_cast<std::size_t>(measure.d);
  for (std::size_t k = 1; k <= n; ++k) {
    double p_plus = 0.5;
    if (k % d == 0) {
      const std::size_t j = k / d;
      int prod = 1;
      for (std::size_t i = 1; i < d; ++i) prod *= u[i * j - 1];
      p_plus = 0.5 * (1.0 + measure.b * prod);
    }
    u[k - 1] = rng.uniform() < p_plus ? 1 : -1;
  }
  return u;
}

double walsh_average(const SignWord& x, int d, std::size_t n) {
  require(d >= 1, "walsh_average: d must be >= 1");
  require(n >= 1, "walsh_average: n must be >= 1");
  require(static_cast<std::size_t>(d) * n <= x.size(), "walsh_average: need d n <= length");
  validate_signs(x);
  std::int64_t sum = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    int prod = 1;
    for (std::size_t i = 1; i <= static_cast<std::size_t>(d); ++i) prod *= x[i * k - 1];
    sum += prod;
  }
  return static_cast<double>(sum) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------

namespace {

BigInt mod_floor(const BigInt& x, const BigInt& m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

std::complex<double> doubling_tripling_average(std::int64_t a, std::int64_t b, const BigInt& num, const BigInt& den,
                                               std::int64_t n) {
  require(n >= 1, "doubling_tripling_average: n must be >= 1");
  require(den > 0, "doubling_tripling_average: denominator must be positive");
  const BigInt x = mod_floor(num, den);
  BigInt p2 = mod_floor(2, den), p3 = mod_floor(3, den);
  std::complex<double> sum = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    const BigInt r = mod_floor((BigInt(a) * p2 + BigInt(b) * p3) * x, den);
    const double frac = static_cast<double>(cpp_rational(r, den));
    sum += std::polar(1.0, 2.0 * std::numbers::pi * frac);
    p2 = (p2 * 2) % den;
    p3 = (p3 * 3) % den;
  }
  return sum / static_cast<double>(n);
}

std::complex<double> doubling_tripling_average(std::int64_t a, std::int64_t b, double x, std::int64_t n) {
  require(std::isfinite(x), "doubling_tripling_average: x must be finite");
  int e = 0;
  const double frac = std::frexp(x, &e);  // x = frac 2^e, 1/2 <= |frac| < 1
  const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  const int shift = 53 - e;  // x = mant / 2^shift
  if (shift <= 0) return 1.0;
  return doubling_tripling_average(a, b, BigInt(mant), BigInt(1) << shift, n);
}

std::vector<PeriodicPoint> common_periodic_points(int n, int m) {
  require(n >= 1 && n <= 63, "common_periodic_points: need 1 <= n <= 63");
  require(m >= 1 && m <= 40, "common_periodic_points: need 1 <= m <= 40");
  const std::uint64_t two = (std::uint64_t{1} << n) - 1;
  std::uint64_t three = 1;
  for (int i = 0; i < m; ++i) three *= 3;
  const std::uint64_t d = std::gcd(two, three - 1);
  std::vector<PeriodicPoint> out;
  for (std::uint64_t k = 1; k < d; ++k) out.push_back({k, d});
  return out;
}

bool verify_periodic_point(const PeriodicPoint& x, int n, int m) {
  if (x.d < 2 || x.k == 0 || x.k >= x.d) return false;
  auto returns = [&](unsigned __int128 mult, int steps) {
    unsigned __int128 y = x.k;
    for (int i = 0; i < steps; ++i) y = (y * mult) % x.d;
    return y == x.k;
  };
  return returns(2, n) && returns(3, m);
}

MonteCarloEstimate empirical_pressure_23(std::int64_t a, std::int64_t b, double s, double t, int n, int samples,
                                         std::uint64_t seed) {
  require(n >= 1 && samples >= 1, "empirical_pressure_23: n and samples must be >= 1");
  constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;
  auto mulmod = [](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * y) % P);
  };
  auto reduce = [](std::int64_t v) {
    const std::int64_t r = v % static_cast<std::int64_t>(P);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(P) : r);
  };
  const std::uint64_t ra = reduce(a), rb = reduce(b);

  std::vector<double> log_q(samples);
  for (int i = 0; i < samples; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const std::uint64_t U = rng.next_u64() % P;
    std::uint64_t p2 = 2, p3 = 3;
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
      const std::uint64_t phase = mulmod((mulmod(ra, p2) + mulmod(rb, p3)) % P, U);
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(phase) / static_cast<double>(P));
      acc += s * std::cos(theta) + t * std::sin(theta);
      p2 = mulmod(p2, 2);
      p3 = mulmod(p3, 3);
    }
    log_q[i] = acc;
  }
  const double top = *std::max_element(log_q.begin(), log_q.end());
  double mean = 0.0, sq = 0.0;
  for (double v : log_q) {
    const double w = std::exp(v - top);
    mean += w;
    sq += w * w;
  }
  mean /= samples;
  const double var = samples > 1 ? std::max(0.0, (sq / samples - mean * mean) * samples / (samples - 1.0)) : 0.0;
  MonteCarloEstimate out;
  out.mean = (std::log(mean) + top) / n;
  out.std_error = std::sqrt(var / samples) / mean / n;
  out.samples = samples;
  return out;
}

double bessel_pressure(double s, double t) {
  require(std::isfinite(s) && std::isfinite(t), "bessel_pressure: s and t must be finite");
  const double r = std::hypot(s, t);
  if (r == 0.0) return 0.0;
  const double log_r = std::log(r);
  const double log4 = std::log(4.0);
  double log_sum = 0.0;  // n = 0 term
  for (int n = 1;; ++n) {
    const double term = 2.0 * n * log_r - 2.0 * std::lgamma(n + 1.0) - n * log4;
    const double hi = std::max(log_sum, term);
    log_sum = hi + std::log1p(std::exp(std::min(log_sum, term) - hi));
    if (n > r && term < log_sum + std::log(1e-18)) break;
  }
  return log_sum;
}

}  // namespace mfa::riesz

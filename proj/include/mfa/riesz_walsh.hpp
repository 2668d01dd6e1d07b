#pragma once

// Riesz products on the Walsh group {-1, 1}^N
//   mu_b = prod_k (1 + b x_k x_{2k} ... x_{dk}),
// the closed-form spectrum of the averages (1/n) sum x_k x_{2k} ... x_{dk},
// and exploratory doubling/tripling averages on the circle.

#include "mfa/common.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace mfa::riesz {

/// Sequence over {-1, +1}; kept apart from the {0, .., m-1} words of the shift.
using SignWord = std::vector<std::int8_t>;

void validate_signs(const SignWord& u);

/// 1 - 1/d + H((1 + alpha) / 2) / (d log 2).
double walsh_spectrum(int d, double alpha);

struct WalshRieszMeasure {
  int d = 2;
  double b = 0.0;

  WalshRieszMeasure(int d_, double b_);
};

/// 2^{-n} prod_{dk <= n} (1 + b u_k u_{2k} ... u_{dk}).
double cylinder_mass(const WalshRieszMeasure& measure, const SignWord& u);

/// Finite set of coordinates {k_1 < k_2 < ...}: the character x -> prod x_{k_i}.
struct CharacterIndex {
  std::vector<std::int64_t> coords;

  explicit CharacterIndex(std::vector<std::int64_t> c = {});
};

/// Integral of the character against mu_b: b^e when the character is a product of
/// e generators x_k x_{2k} ... x_{dk}, and 0 when it is not in their span.
double fourier_coefficient(const WalshRieszMeasure& measure, const CharacterIndex& chi);

/// Coefficient of gamma_1^{e_1} ... gamma_n^{e_n} in prod (1 + Re(a_k gamma_k)):
/// each factor contributes 1, a_k / 2 or conj(a_k) / 2 for e_k = 0, 1, -1.
std::complex<double> riesz_fourier_coefficient(const std::vector<std::complex<double>>& a, const std::vector<int>& eps);

/// Draws u_1..u_n from the exact conditionals of mu_b.
SignWord sample(const WalshRieszMeasure& measure, std::size_t n, std::uint64_t seed);

/// (1/n) sum_{k<=n} x_k x_{2k} ... x_{dk}; needs d n <= |x|.
double walsh_average(const SignWord& x, int d, std::size_t n);

// ---------------------------------------------------------------------------
// Doubling and tripling.

/// (1/n) sum_{k=1}^n exp(2 pi i (a 2^k + b 3^k) x) at x = num / den, exactly reduced mod 1.
std::complex<double> doubling_tripling_average(std::int64_t a, std::int64_t b, const BigInt& num, const BigInt& den,
                                               std::int64_t n);
/// Same at a double x, read as the dyadic rational it represents.
std::complex<double> doubling_tripling_average(std::int64_t a, std::int64_t b, double x, std::int64_t n);

struct PeriodicPoint {
  std::uint64_t k = 0;
  std::uint64_t d = 1;
};

/// k/d for 1 <= k < d with d = gcd(2^n - 1, 3^m - 1); empty when d = 1.
std::vector<PeriodicPoint> common_periodic_points(int n, int m);

/// Simulates x -> 2x and x -> 3x mod 1 on k/d and checks the periods divide n and m.
bool verify_periodic_point(const PeriodicPoint& x, int n, int m);

/// (1/n) log of a Monte Carlo estimate of Z_n(s, t) = int_0^1 Q_n(x) dx with
/// uniform x = U / (2^61 - 1) and exact modular orbits.
MonteCarloEstimate empirical_pressure_23(std::int64_t a, std::int64_t b, double s, double t, int n, int samples,
                                         std::uint64_t seed);

/// log J_0-type series sum_n r^{2n} / ((n!)^2 4^n) at r = sqrt(s^2 + t^2).
double bessel_pressure(double s, double t);

}  // namespace mfa::riesz

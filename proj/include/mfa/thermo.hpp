#pragma once

// Nonlinear thermodynamic formalism for multiple ergodic averages
//   A_n phi(x) = (1/n) sum_{k<=n} phi(x_k, x_{qk}, ..., x_{q^{d-1}k})
// on the full shift over m symbols.
//
// For each s the nonlinear operator psi -> (L_s psi)^{1/q}, with
//   L_s psi(a) = sum_j exp(s phi(a, j)) psi(Ta, j),   a in A^{d-1},
// has a unique positive fixed point psi_s. The pressure, its Legendre
// transform and the Markov measure mu_s are all read off psi_s.
//
// Dimensions are normalised to [0, 1] (base-m symbolic metric).

#include "mfa/common.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mfa::thermo {

/// phi : A^d -> R with its base q. Table entries are indexed by the word
/// a_1 ... a_d read as a base-m numeral, most significant symbol first.
class Potential {
 public:
  Potential(int m, int q, int d, std::vector<double> table);

  int m() const noexcept { return m_; }
  int q() const noexcept { return q_; }
  int d() const noexcept { return d_; }
  const std::vector<double>& table() const noexcept { return table_; }
  double operator()(std::span<const int> word) const;
  double at(std::size_t index) const { return table_.at(index); }

  double alpha_min() const noexcept { return alpha_min_; }
  double alpha_max() const noexcept { return alpha_max_; }
  bool is_constant() const noexcept { return alpha_min_ == alpha_max_; }

  /// phi(x, y) = x_1 y_1 on two symbols, q = 2.
  static Potential product_01();
  /// phi(x_1..x_d) = prod (2 x_i - 1) on two symbols.
  static Potential rademacher(int d, int q = 2);
  static Potential constant(int m, int q, int d, double c);

  static Potential from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  int m_, q_, d_;
  std::vector<double> table_;
  double alpha_min_, alpha_max_;
};

/// Fixed point psi_s with its extensions to shorter words, stored as logs.
struct PsiSolution {
  double s = 0.0;
  int m = 0;
  /// log_levels[k] holds log psi^{(k)} on A^k, k = 1..d-1; index 0 is unused.
  std::vector<std::vector<double>> log_levels;
  double residual = 0.0;
  int iterations = 0;

  double value(int level, std::size_t word_index) const;
};

inline constexpr double kFixedPointTolerance = 1e-14;
inline constexpr int kFixedPointMaxIterations = 100000;
/// |s| used as a stand-in for s = +-infinity at the ends of the level domain.
inline constexpr double kEndpointS = 40.0;

PsiSolution solve_psi(const Potential& phi, double s);

/// P(s) = (q-1) q^{d-2} log sum_j psi_s(j).
double pressure(const Potential& phi, double s);

/// P'(s) by Richardson-extrapolated central differences, h = 1e-4 max(1, |s|).
double pressure_derivative(const Potential& phi, double s);

struct LevelDomain {
  double lo = 0.0;
  double hi = 0.0;
  /// true when the endpoints are P'(-+40) rather than exact limits.
  bool extrapolated = true;
};

LevelDomain level_domain(const Potential& phi);

struct SpectrumPoint {
  double alpha = 0.0;
  double s = 0.0;
  double dim = 0.0;
  bool extrapolated = false;
};

/// dim_H E(alpha) = P*(alpha) / (q^{d-1} log m). nullopt when alpha lies outside
/// the level domain (E(alpha) empty).
std::optional<SpectrumPoint> legendre_spectrum(const Potential& phi, double alpha);

/// (P(s) - s P'(s)) / (q^{d-1} log m): the dimension of the telescopic
/// product of mu_s, normalised to [0, 1].
double ruelle_dimension(const Potential& phi, double s);

/// (d-1)-step Markov measure mu_s on Sigma_m.
struct MarkovMeasureSpec {
  int m = 0;
  int order = 0;
  /// initial law on A^order (base-m index, most significant first).
  std::vector<double> initial;
  /// kernel[w * m + j] = probability of symbol j after window w.
  std::vector<double> kernel;

  /// Q(u, v) on A^order x A^order; zero unless v = (u_2..u_r, j).
  double transition(std::size_t u, std::size_t v) const;
};

MarkovMeasureSpec markov_measure(const Potential& phi, double s);

struct PressureRecord {
  double s, P, dP, alpha, dim;
};

struct PressureCurve {
  std::vector<PressureRecord> records;
};

/// Samples (s, P, P', alpha = P', dim) on the given grid.
PressureCurve pressure_curve(const Potential& phi, const std::vector<double>& s_grid);

}  // namespace mfa::thermo

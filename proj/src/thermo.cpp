#include "mfa/thermo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace mfa::thermo {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace

Potential::Potential(int m, int q, int d, std::vector<double> table)
    : m_(m), q_(q), d_(d), table_(std::move(table)) {
  require(m >= 2, "potential: m must be >= 2");
  require(q >= 2, "potential: q must be >= 2");
  require(d >= 2, "potential: d must be >= 2 (the classical d = 1 case is not supported)");
  require(table_.size() == ipow(m, d), "potential: table needs m^d = " + std::to_string(ipow(m, d)) + " entries");
  for (double v : table_) require(std::isfinite(v), "potential: non-finite table entry");
  const auto [lo, hi] = std::minmax_element(table_.begin(), table_.end());
  alpha_min_ = *lo;
  alpha_max_ = *hi;
}

double Potential::operator()(std::span<const int> word) const {
  require(static_cast<int>(word.size()) == d_, "potential: word length differs from d");
  std::size_t idx = 0;
  for (int a : word) {
    require(a >= 0 && a < m_, "potential: symbol out of range");
    idx = idx * static_cast<std::size_t>(m_) + static_cast<std::size_t>(a);
  }
  return table_[idx];
}

Potential Potential::product_01() { return Potential(2, 2, 2, {0.0, 0.0, 0.0, 1.0}); }

Potential Potential::rademacher(int d, int q) {
  std::vector<double> t(ipow(2, d));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
  // Sign of prod(2a-1) is (-1)^{number of zeros}; popcount counts ones.
  if (d % 2 == 1)
    for (auto& v : t) v = -v;
  return Potential(2, q, d, std::move(t));
}

Potential Potential::constant(int m, int q, int d, double c) { return Potential(m, q, d, std::vector<double>(ipow(m, d), c)); }

Potential Potential::from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("m").get<int>();
    const int q = j.at("q").get<int>();
    const int d = j.at("d").get<int>();
    require(m >= 2 && d >= 2 && d <= 24, "potential JSON: bad m or d");
    const auto& tab = j.at("table");
    std::vector<double> table(ipow(m, d), std::numeric_limits<double>::quiet_NaN());
    if (tab.is_array()) {
      table = tab.get<std::vector<double>>();
    } else {
      require(m <= 10, "potential JSON: keyed tables need m <= 10 (use an array otherwise)");
      require(tab.size() == table.size(), "potential JSON: table needs m^d keys");
      for (const auto& [key, val] : tab.items()) {
        require(static_cast<int>(key.size()) == d, "potential JSON: key '" + key + "' must have length d");
        std::size_t idx = 0;
        for (char c : key) {
          const int a = c - '0';
          require(a >= 0 && a < m, "potential JSON: bad symbol in key '" + key + "'");
          idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(a);
        }
        table[idx] = val.get<double>();
      }
    }
    return Potential(m, q, d, std::move(table));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("potential JSON: ") + e.what());
  }
}

nlohmann::json Potential::to_json() const {
  nlohmann::json tab = nlohmann::json::object();
  if (m_ <= 10) {
    for (std::size_t i = 0; i < table_.size(); ++i) {
      std::string key(d_, '0');
      std::size_t r = i;
      for (int k = d_ - 1; k >= 0; --k) {
        key[k] = static_cast<char>('0' + r % m_);
        r /= m_;
      }
      tab[key] = table_[i];
    }
  } else {
    tab = table_;
  }
  return {{"m", m_}, {"q", q_}, {"d", d_}, {"table", tab}};
}

// ---------------------------------------------------------------------------

double PsiSolution::value(int level, std::size_t word_index) const {
  return std::exp(log_levels.at(level).at(word_index));
}

PsiSolution solve_psi(const Potential& phi, double s) {
  require(std::isfinite(s), "solve_psi: s must be finite");
  const int m = phi.m();
  const int q = phi.q();
  const int d = phi.d();
  const std::size_t n = ipow(m, d - 1);
  const std::size_t tail = n / m;  // |A^{d-2}|

  // Work with psi = e^c u, max u = 1. At the fixed point u solves
  // u = v / max v with v = (L_s u)^{1/q}, and e^{c(1-1/q)} = max v.
  std::vector<double> log_u(n, 0.0), log_v(n), terms(m);
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  double log_max_v = 0.0;
  for (; it < kFixedPointMaxIterations; ++it) {
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t shifted = (a % tail) * m;  // index of (Ta, 0)
      for (int j = 0; j < m; ++j) terms[j] = s * phi.at(a * m + j) + log_u[shifted + j];
      log_v[a] = log_sum_exp(terms) / q;
    }
    log_max_v = *std::max_element(log_v.begin(), log_v.end());
    residual = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const double next = log_v[a] - log_max_v;
      residual = std::max(residual, std::abs(std::exp(next) - std::exp(log_u[a])));
      log_u[a] = next;
    }
    if (residual < kFixedPointTolerance) {
      ++it;
      break;
    }
  }
  if (residual >= kFixedPointTolerance)
    throw ConvergenceError("solve_psi: no convergence at s = " + std::to_string(s), residual);

  PsiSolution sol;
  sol.s = s;
  sol.m = m;
  sol.residual = residual;
  sol.iterations = it;
  sol.log_levels.resize(d);
  const double c = log_max_v * q / (q - 1.0);
  auto& top = sol.log_levels[d - 1];
  top.resize(n);
  for (std::size_t a = 0; a < n; ++a) top[a] = c + log_u[a];
  for (int k = d - 2; k >= 1; --k) {
    const auto& upper = sol.log_levels[k + 1];
    auto& lvl = sol.log_levels[k];
    lvl.resize(ipow(m, k));
    for (std::size_t a = 0; a < lvl.size(); ++a) {
      for (int j = 0; j < m; ++j) terms[j] = upper[a * m + j];
      lvl[a] = log_sum_exp(terms) / q;
    }
  }
  return sol;
}

double pressure(const Potential& phi, double s) {
  const auto sol = solve_psi(phi, s);
  const double scale = (phi.q() - 1.0) * static_cast<double>(ipow(phi.q(), phi.d() - 2));
  return scale * log_sum_exp(sol.log_levels[1]);
}

double pressure_derivative(const Potential& phi, double s) {
  const double h = 1e-4 * std::max(1.0, std::abs(s));
  auto central = [&](double step) { return (pressure(phi, s + step) - pressure(phi, s - step)) / (2.0 * step); };
  const double coarse = central(h);
  const double fine = central(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

LevelDomain level_domain(const Potential& phi) {
  if (phi.is_constant()) return {phi.alpha_min(), phi.alpha_min(), false};
  const double lo = pressure_derivative(phi, -kEndpointS);
  const double mid = pressure_derivative(phi, 0.0);
  const double hi = pressure_derivative(phi, kEndpointS);
  if (!(lo <= mid && mid <= hi))
    throw ConvergenceError("level_domain: P' is not monotone on [-40, 40]", std::max(lo - mid, mid - hi));
  return {lo, hi, true};
}

namespace {

constexpr double kEndpointSlack = 1e-6;

double normaliser(const Potential& phi) {
  return static_cast<double>(ipow(phi.q(), phi.d() - 1)) * std::log(static_cast<double>(phi.m()));
}

}  // namespace

std::optional<SpectrumPoint> legendre_spectrum(const Potential& phi, double alpha) {
  if (phi.is_constant()) {
    if (alpha != phi.alpha_min()) return std::nullopt;
    return SpectrumPoint{alpha, 0.0, 1.0, false};
  }
  const double norm = normaliser(phi);
  auto value_at = [&](double s, bool extrapolated) {
    return SpectrumPoint{alpha, s, (pressure(phi, s) - s * alpha) / norm, extrapolated};
  };

  const double d_lo = pressure_derivative(phi, -kEndpointS);
  const double d_hi = pressure_derivative(phi, kEndpointS);
  if (alpha <= d_lo) {
    if (alpha < d_lo - kEndpointSlack) return std::nullopt;
    return value_at(-kEndpointS, true);
  }
  if (alpha >= d_hi) {
    if (alpha > d_hi + kEndpointSlack) return std::nullopt;
    return value_at(kEndpointS, true);
  }

  // Grow a bracket [a, b] around the root of P'(s) = alpha geometrically.
  double a = -1.0, b = 1.0;
  while (a > -kEndpointS && pressure_derivative(phi, a) > alpha) a = std::max(2.0 * a, -kEndpointS);
  while (b < kEndpointS && pressure_derivative(phi, b) < alpha) b = std::min(2.0 * b, kEndpointS);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    const double mid = 0.5 * (a + b);
    if (pressure_derivative(phi, mid) < alpha)
      a = mid;
    else
      b = mid;
  }
  const double root = 0.5 * (a + b);
  const bool edge = std::abs(root) >= kEndpointS - 1e-9 || alpha >= d_hi - 1e-9 || alpha <= d_lo + 1e-9;
  return value_at(root, edge);
}

double ruelle_dimension(const Potential& phi, double s) {
  if (phi.is_constant()) return 1.0;
  return (pressure(phi, s) - s * pressure_derivative(phi, s)) / normaliser(phi);
}

// ---------------------------------------------------------------------------

double MarkovMeasureSpec::transition(std::size_t u, std::size_t v) const {
  const std::size_t windows = initial.size();
  require(u < windows && v < windows, "transition: window index out of range");
  const std::size_t tail = windows / static_cast<std::size_t>(m);
  if (order == 0) return kernel[v];
  if (v / static_cast<std::size_t>(m) != u % tail) return 0.0;
  return kernel[u * m + v % m];
}

MarkovMeasureSpec markov_measure(const Potential& phi, double s) {
  const int m = phi.m();
  const int q = phi.q();
  const int r = phi.d() - 1;
  const auto sol = solve_psi(phi, s);
  const std::size_t n = ipow(m, r);

  MarkovMeasureSpec spec;
  spec.m = m;
  spec.order = r;
  spec.initial.assign(n, 0.0);
  spec.kernel.assign(n * m, 0.0);

  // log psi(empty) chosen so that the level-1 factor sums to one.
  const double log_psi_empty = log_sum_exp(sol.log_levels[1]) / q;
  for (std::size_t w = 0; w < n; ++w) {
    double log_pi = 0.0;
    double parent = log_psi_empty;
    for (int j = 1; j <= r; ++j) {
      const std::size_t prefix = w / ipow(m, r - j);
      const double here = sol.log_levels[j][prefix];
      log_pi += here - q * parent;
      parent = here;
    }
    spec.initial[w] = std::exp(log_pi);
  }

  const std::size_t tail = n / m;
  const auto& top = sol.log_levels[r];
  for (std::size_t w = 0; w < n; ++w)
    for (int j = 0; j < m; ++j) {
      const std::size_t next = (w % tail) * m + j;
      spec.kernel[w * m + j] = std::exp(s * phi.at(w * m + j) + top[next] - q * top[w]);
    }
  return spec;
}

PressureCurve pressure_curve(const Potential& phi, const std::vector<double>& s_grid) {
  PressureCurve curve;
  curve.records.reserve(s_grid.size());
  const double norm = normaliser(phi);
  for (double s : s_grid) {
    const double P = pressure(phi, s);
    const double dP = phi.is_constant() ? phi.alpha_min() : pressure_derivative(phi, s);
    const double dim = phi.is_constant() ? 1.0 : (P - s * dP) / norm;
    curve.records.push_back({s, P, dP, dP, dim});
  }
  return curve;
}

}  // namespace mfa::thermo

#include "mfa/walks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mfa::walks {

WalkSystem::WalkSystem(int p, Eigen::MatrixXd tau, Eigen::VectorXd v, std::vector<long> steps)
    : p_(p), tau_(std::move(tau)), v_(std::move(v)), steps_(std::move(steps)) {
  require(p >= 2, "walk: p must be >= 2");
  require(v_.size() >= 1, "walk: v must be non-empty");
  require(tau_.rows() == v_.size() && tau_.cols() == v_.size(), "walk: tau must be D x D with D = dim v");
  require(tau_.allFinite() && v_.allFinite(), "walk: non-finite entries");
  require(v_.norm() > 0.0, "walk: v must be non-zero");
  require(!steps_.empty(), "walk: A must be non-empty");

  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(v_.size(), v_.size());
  for (int j = 0; j < p; ++j) {
    orbit_.push_back(power * v_);
    power = tau_ * power;
  }
  const double err = (power - Eigen::MatrixXd::Identity(v_.size(), v_.size())).norm();
  require(err < 1e-10, "walk: tau^p differs from the identity (norm " + std::to_string(err) + ")");

  std::vector<bool> seen(p, false);
  long g = p;
  for (long a : steps_) {
    const int r = residue(a);
    require(!seen[r], "walk: steps must be distinct mod p");
    seen[r] = true;
    residues_.push_back(r);
    g = std::gcd(g, static_cast<long>(r));
  }
  require(g == 1, "walk: A mod p does not generate Z/pZ");
}

int WalkSystem::residue(long step) const noexcept {
  const long r = step % p_;
  return static_cast<int>(r < 0 ? r + p_ : r);
}

WalkSystem WalkSystem::case1() {
  return WalkSystem(2, Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::VectorXd::Constant(1, 1.0), {0, 1});
}

WalkSystem WalkSystem::case2() {
  Eigen::MatrixXd tau(2, 2);
  tau << 0.0, -1.0, 1.0, 0.0;
  Eigen::VectorXd v(2);
  v << 1.0, 0.0;
  return WalkSystem(4, tau, v, {-1, 1});
}

WalkSystem WalkSystem::from_json(const nlohmann::json& j) {
  try {
    const int p = j.at("p").get<int>();
    const auto v = j.at("v").get<std::vector<double>>();
    const int D = static_cast<int>(v.size());
    Eigen::MatrixXd tau(D, D);
    const auto& t = j.at("tau");
    if (D == 1 && t.is_number()) {
      tau(0, 0) = t.get<double>();
    } else {
      const auto rows = t.get<std::vector<std::vector<double>>>();
      require(static_cast<int>(rows.size()) == D, "walk JSON: tau must have dim(v) rows");
      for (int r = 0; r < D; ++r) {
        require(static_cast<int>(rows[r].size()) == D, "walk JSON: tau must be square");
        for (int c = 0; c < D; ++c) tau(r, c) = rows[r][c];
      }
    }
    return WalkSystem(p, tau, Eigen::Map<const Eigen::VectorXd>(v.data(), D), j.at("A").get<std::vector<long>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("walk JSON: ") + e.what());
  }
}

nlohmann::json WalkSystem::to_json() const {
  std::vector<std::vector<double>> rows(tau_.rows(), std::vector<double>(tau_.cols()));
  for (Eigen::Index r = 0; r < tau_.rows(); ++r)
    for (Eigen::Index c = 0; c < tau_.cols(); ++c) rows[r][c] = tau_(r, c);
  return {{"p", p_}, {"tau", rows}, {"v", std::vector<double>(v_.data(), v_.data() + v_.size())}, {"A", steps_}};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> exponents(const WalkSystem& system, const Eigen::VectorXd& s) {
  require(s.size() == system.dim(), "walk: s has the wrong dimension");
  require(s.allFinite(), "walk: s must be finite");
  std::vector<double> c(system.p());
  for (int j = 0; j < system.p(); ++j) c[j] = s.dot(system.orbit(j));
  return c;
}

Eigen::MatrixXd scaled_matrix(const WalkSystem& system, const std::vector<double>& c, double shift) {
  const int p = system.p();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int r : system.residues()) {
      const int j = (i + r) % p;
      M(i, j) = std::exp(c[j] - shift);
    }
  return M;
}

}  // namespace

Eigen::MatrixXd transfer_matrix(const WalkSystem& system, const Eigen::VectorXd& s) {
  return scaled_matrix(system, exponents(system, s), 0.0);
}

PerronPair spectral_radius(const Eigen::MatrixXd& M) {
  require(M.rows() == M.cols() && M.rows() > 0, "spectral_radius: matrix must be square");
  require((M.array() >= 0.0).all(), "spectral_radius: matrix must be nonnegative");
  const Eigen::Index n = M.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  // Power iteration on M + r I, with r raised to the best lower bound for lambda.
  double r = (M * x).minCoeff();
  if (!(r > 0.0)) r = 1.0;
  constexpr int kMaxIterations = 100000;
  double lo = 0.0, hi = 0.0;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Eigen::VectorXd y = M * x + r * x;
    const Eigen::ArrayXd ratio = y.array() / x.array();
    lo = ratio.minCoeff();
    hi = ratio.maxCoeff();
    x = y / y.maxCoeff();
    if (hi - lo < 1e-14 * hi) {
      PerronPair out;
      out.lambda = 0.5 * (lo + hi) - r;
      out.t = x / x.sum();
      out.iterations = it;
      return out;
    }
    r = std::max(r, lo - r);
  }
  throw ConvergenceError("spectral_radius: power iteration did not converge", hi - lo);
}

WalkPressure walk_pressure(const WalkSystem& system, const Eigen::VectorXd& s) {
  const auto c = exponents(system, s);
  const double shift = *std::max_element(c.begin(), c.end());
  const auto perron = spectral_radius(scaled_matrix(system, c, shift));
  WalkPressure out;
  out.s = s;
  out.P = std::log(perron.lambda) + shift;
  out.lambda = std::exp(out.P);
  out.t = perron.t;
  return out;
}

double pressure(const WalkSystem& system, const Eigen::VectorXd& s) { return walk_pressure(system, s).P; }

Eigen::VectorXd pressure_gradient(const WalkSystem& system, const Eigen::VectorXd& s) {
  Eigen::VectorXd g(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double h = 1e-4 * std::max(1.0, std::abs(s[i]));
    auto central = [&](double step) {
      Eigen::VectorXd plus = s, minus = s;
      plus[i] += step;
      minus[i] -= step;
      return (pressure(system, plus) - pressure(system, minus)) / (2.0 * step);
    };
    const double coarse = central(h);
    const double fine = central(h / 2.0);
    g[i] = (4.0 * fine - coarse) / 3.0;
  }
  return g;
}

namespace {

constexpr double kGradientTolerance = 1e-11;
constexpr double kDomainSlack = 1e-6;

Eigen::VectorXd clamp(Eigen::VectorXd s) {
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::clamp(s[i], -kWalkClamp, kWalkClamp);
  return s;
}

struct Solve {
  Eigen::VectorXd s;
  double residual;
};

Solve newton(const WalkSystem& system, const Eigen::VectorXd& alpha) {
  const Eigen::Index D = alpha.size();
  auto objective = [&](const Eigen::VectorXd& s) { return pressure(system, s) - s.dot(alpha); };
  Eigen::VectorXd s = Eigen::VectorXd::Zero(D);
  Eigen::VectorXd g = pressure_gradient(system, s) - alpha;
  for (int it = 0; it < 200 && g.lpNorm<Eigen::Infinity>() >= kGradientTolerance; ++it) {
    Eigen::MatrixXd H(D, D);
    for (Eigen::Index i = 0; i < D; ++i) {
      const double h = 1e-3 * std::max(1.0, std::abs(s[i]));
      Eigen::VectorXd plus = s, minus = s;
      plus[i] += h;
      minus[i] -= h;
      H.col(i) = (pressure_gradient(system, plus) - pressure_gradient(system, minus)) / (2.0 * h);
    }
    H = 0.5 * (H + H.transpose()).eval();
    H += 1e-12 * Eigen::MatrixXd::Identity(D, D);
    const Eigen::VectorXd step = -H.ldlt().solve(g);
    if (!step.allFinite()) break;

    const double f0 = objective(s);
    double scale = 1.0;
    Eigen::VectorXd trial = clamp(s + step);
    while (scale > 1e-10 && objective(trial) > f0 + 1e-15 * std::max(1.0, std::abs(f0))) {
      scale *= 0.5;
      trial = clamp(s + scale * step);
    }
    if ((trial - s).lpNorm<Eigen::Infinity>() == 0.0) break;
    s = trial;
    g = pressure_gradient(system, s) - alpha;
  }
  return {s, g.lpNorm<Eigen::Infinity>()};
}

/// Cyclic coordinate bisection on d_i P(s) = alpha_i.
Solve coordinate_bisection(const WalkSystem& system, const Eigen::VectorXd& alpha, Eigen::VectorXd s) {
  Eigen::VectorXd g = pressure_gradient(system, s) - alpha;
  for (int sweep = 0; sweep < 200 && g.lpNorm<Eigen::Infinity>() >= kGradientTolerance; ++sweep) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      double a = -kWalkClamp, b = kWalkClamp;
      for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
        s[i] = 0.5 * (a + b);
        if (pressure_gradient(system, s)[i] < alpha[i])
          a = s[i];
        else
          b = s[i];
      }
      s[i] = 0.5 * (a + b);
    }
    g = pressure_gradient(system, s) - alpha;
  }
  return {s, g.lpNorm<Eigen::Infinity>()};
}

}  // namespace

std::optional<WalkSpectrumPoint> walk_spectrum(const WalkSystem& system, const Eigen::VectorXd& alpha) {
  require(alpha.size() == system.dim(), "walk_spectrum: alpha has the wrong dimension");
  require(alpha.allFinite(), "walk_spectrum: alpha must be finite");
  Solve sol = newton(system, alpha);
  if (sol.residual >= kGradientTolerance) {
    const Solve alt = coordinate_bisection(system, alpha, sol.s);
    if (alt.residual < sol.residual) sol = alt;
  }
  const bool clamped = sol.s.cwiseAbs().maxCoeff() >= kWalkClamp - 1e-12;
  if (sol.residual >= kDomainSlack) return std::nullopt;
  if (sol.residual >= 1e-8 && !clamped)
    throw ConvergenceError("walk_spectrum: gradient equation not solved", sol.residual);

  WalkSpectrumPoint out;
  out.alpha = alpha;
  out.s = sol.s;
  out.residual = sol.residual;
  out.extrapolated = clamped;
  const double log_a = std::log(static_cast<double>(system.steps().size()));
  out.dim = std::clamp((pressure(system, sol.s) - sol.s.dot(alpha)) / log_a, 0.0, 1.0);
  return out;
}

double closed_form_case1(double alpha) {
  require(alpha >= -1.0 && alpha <= 1.0, "closed_form_case1: alpha must lie in [-1, 1]");
  return binary_entropy((1.0 + alpha) / 2.0) / std::numbers::ln2;
}

double closed_form_case2(double a, double b) {
  require(std::abs(a) <= 0.5 && std::abs(b) <= 0.5, "closed_form_case2: |a|, |b| must be <= 1/2");
  return (binary_entropy(0.5 + a) + binary_entropy(0.5 + b)) / (2.0 * std::numbers::ln2);
}

// ---------------------------------------------------------------------------

EvolutionMeasure::EvolutionMeasure(const WalkSystem& system, const Eigen::VectorXd& s)
    : system_(system), pressure_(walk_pressure(system, s)) {
  double norm = 0.0;
  for (int r : system_.residues()) norm += pressure_.t[r];
  log_norm_ = std::log(norm);
}

double EvolutionMeasure::log_mass(const StepWord& u) const {
  if (u.empty()) return 0.0;
  const auto& steps = system_.steps();
  for (long a : u) require(std::find(steps.begin(), steps.end(), a) != steps.end(), "evolution measure: step not in A");
  const int p = system_.p();
  const Eigen::VectorXd& s = pressure_.s;
  int w = system_.residue(u[0]);
  double out = std::log(pressure_.t[w]) - log_norm_;
  for (std::size_t k = 1; k < u.size(); ++k) {
    const int next = (w + system_.residue(u[k])) % p;
    out += std::log(pressure_.t[next]) + s.dot(system_.orbit(next)) - pressure_.P - std::log(pressure_.t[w]);
    w = next;
  }
  return out;
}

double EvolutionMeasure::mass(const StepWord& u) const { return std::exp(log_mass(u)); }

StepWord EvolutionMeasure::sample(std::size_t n, CounterRng& rng) const {
  const int p = system_.p();
  const auto& res = system_.residues();
  const auto& steps = system_.steps();
  const Eigen::VectorXd& s = pressure_.s;
  // Row w holds the weights of w -> w + a for a in A.
  std::vector<std::vector<double>> rows(p, std::vector<double>(res.size()));
  for (int w = 0; w < p; ++w)
    for (std::size_t a = 0; a < res.size(); ++a) {
      const int next = (w + res[a]) % p;
      rows[w][a] = std::exp(std::log(pressure_.t[next]) + s.dot(system_.orbit(next)) - pressure_.P -
                            std::log(pressure_.t[w]));
    }
  std::vector<double> first(res.size());
  for (std::size_t a = 0; a < res.size(); ++a) first[a] = pressure_.t[res[a]];

  StepWord out;
  out.reserve(n);
  if (n == 0) return out;
  std::size_t a = rng.categorical(first);
  out.push_back(steps[a]);
  int w = res[a];
  while (out.size() < n) {
    a = rng.categorical(rows[w]);
    out.push_back(steps[a]);
    w = (w + res[a]) % p;
  }
  return out;
}

double EvolutionMeasure::prop43_constant() const {
  double c = 0.0;
  for (int r : system_.residues())
    for (int w = 0; w < system_.p(); ++w)
      c = std::max(c, std::abs(pressure_.P - pressure_.s.dot(system_.orbit(r)) - log_norm_ + std::log(pressure_.t[w])));
  return c;
}

std::vector<Eigen::VectorXd> trajectory(const WalkSystem& system, const StepWord& x, std::size_t n) {
  require(n <= x.size(), "trajectory: n exceeds the word length");
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  Eigen::VectorXd S = Eigen::VectorXd::Zero(system.dim());
  int w = 0;
  for (std::size_t k = 0; k < n; ++k) {
    w = (w + system.residue(x[k])) % system.p();
    S += system.orbit(w);
    out.push_back(S);
  }
  return out;
}

double feller_second_moment(double angle, int n) {
  require(n >= 0, "feller: n must be >= 0");
  const double c = std::cos(angle);
  require(std::abs(1.0 - c) > 1e-12, "feller: angle 0 makes the walk deterministic (L_n = n)");
  return n * (1.0 + c) / (1.0 - c) - 2.0 * c * (1.0 - std::pow(c, n)) / ((1.0 - c) * (1.0 - c));
}

MonteCarloEstimate feller_monte_carlo(double angle, int n, int trials, std::uint64_t seed) {
  require(trials >= 1, "feller_monte_carlo: trials must be >= 1");
  require(n >= 1, "feller_monte_carlo: n must be >= 1");
  double sum = 0.0, sum_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    double theta = 0.0, x = 1.0, y = 0.0;
    for (int k = 1; k < n; ++k) {
      theta += (rng.next_u64() >> 63) ? angle : -angle;
      x += std::cos(theta);
      y += std::sin(theta);
    }
    const double L2 = x * x + y * y;
    sum += L2;
    sum_sq += L2 * L2;
  }
  const double mean = sum / trials;
  const double var = trials > 1 ? (sum_sq - trials * mean * mean) / (trials - 1) : 0.0;
  return {mean, std::sqrt(std::max(var, 0.0) / trials), trials};
}

}  // namespace mfa::walks

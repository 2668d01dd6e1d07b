#include "verify.hpp"

#include "mfa/multiplicative.hpp"
#include "mfa/riesz_walsh.hpp"
#include "mfa/telescopic.hpp"
#include "mfa/thermo.hpp"
#include "mfa/walks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace mfa::cli {

nlohmann::json CheckResult::to_json() const {
  return {{"name", name}, {"passed", passed}, {"statistic", statistic}, {"bound", bound}, {"detail", detail}};
}

namespace {

using thermo::Potential;

CheckResult make(const std::string& name, double statistic, double bound, std::string detail = {}) {
  return {name, statistic <= bound, statistic, bound, std::move(detail)};
}

double walsh_error(const Potential& phi, const std::function<double(double)>& oracle, int points) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double alpha = -0.95 + 1.9 * i / (points - 1);
    const auto pt = thermo::legendre_spectrum(phi, alpha);
    if (!pt) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(pt->dim - oracle(alpha)));
  }
  return worst;
}

CheckResult walsh_d2(const VerifyOptions&) {
  const double err = walsh_error(Potential::rademacher(2), [](double a) { return riesz::walsh_spectrum(2, a); }, 101);
  return make("walsh-d2", err, 1e-6, "max |legendre - walsh_spectrum(2)| over 101 points");
}

CheckResult walsh_d3(const VerifyOptions&) {
  const double err = walsh_error(Potential::rademacher(3), [](double a) { return riesz::walsh_spectrum(3, a); }, 101);
  return make("walsh-d3", err, 1e-6, "rademacher d=3 against 1 - 1/3 + H/(3 log 2)");
}

CheckResult rademacher_d3(const VerifyOptions&) {
  auto oracle = [](double a) { return 0.75 + binary_entropy((1.0 + a) / 2.0) / (4.0 * std::numbers::ln2); };
  const double err = walsh_error(Potential::rademacher(3), oracle, 21);
  return make("rademacher-d3", err, 1e-6, "rademacher d=3 against 3/4 + H/(4 log 2)");
}

CheckResult kps_fibonacci(const VerifyOptions&) {
  // a^3 - 2a^2 + a - 1 = 0 with a = x^2, x^3 = x + 1.
  const double r = std::sqrt(69.0);
  const double x = std::cbrt((9.0 + r) / 18.0) + std::cbrt((9.0 - r) / 18.0);
  const double oracle = std::log2(x * x);
  const double got = multiplicative::kps_hausdorff(symbolic::PrefixAutomaton::golden_mean(), 2);
  return make("kps-fibonacci", std::abs(got - oracle), 1e-9);
}

CheckResult x2_box(const VerifyOptions&) {
  const double tol = 1e-6;
  const auto fib = multiplicative::fibonacci_box_x2(tol);
  const auto kps = multiplicative::kps_box(symbolic::PrefixAutomaton::golden_mean(), 2, tol);
  std::ostringstream os;
  os.precision(12);
  os << "fibonacci " << fib.value << ", kps " << kps.value;
  CheckResult r = make("x2-box", std::abs(fib.value - kps.value), 2 * tol, os.str());
  r.passed = r.passed && std::abs(fib.value - 0.82429) < 1e-5;
  return r;
}

CheckResult x2_count(const VerifyOptions& o) {
  const auto golden = symbolic::PrefixAutomaton::golden_mean();
  int mismatches = 0;
  std::ostringstream os;
  for (int n = 1; n <= o.n; ++n) {
    const auto exact = multiplicative::exact_count_x2(n);
    const auto brute = multiplicative::brute_force_count(golden, 2, n);
    if (exact != brute) {
      ++mismatches;
      os << "n=" << n << ": " << exact << " vs " << brute << "; ";
    }
  }
  if (mismatches == 0) os << "N_" << o.n << " = " << multiplicative::exact_count_x2(o.n);
  return make("x2-count", mismatches, 0.0, os.str());
}

CheckResult legendre_ruelle(const VerifyOptions&) {
  double worst = 0.0;
  for (const auto& phi : {Potential::product_01(), Potential::rademacher(2)}) {
    for (int s = -3; s <= 3; ++s) {
      const double ruelle = thermo::ruelle_dimension(phi, s);
      const auto pt = thermo::legendre_spectrum(phi, thermo::pressure_derivative(phi, s));
      worst = std::max(worst, pt ? std::abs(pt->dim - ruelle) : 1.0);
      const telescopic::TelescopicMeasure tm(telescopic::BaseMeasure::from_markov(thermo::markov_measure(phi, s)), 2);
      worst = std::max(worst, std::abs(telescopic::dimension(tm, 1e-12).value - ruelle));
    }
  }
  return make("legendre-ruelle", worst, 1e-8, "phi1, phi2 at s = -3..3; legendre and telescopic against ruelle");
}

CheckResult uniform_telescopic(const VerifyOptions& o) {
  const telescopic::TelescopicMeasure tm(telescopic::BaseMeasure::uniform(2), 2);
  const auto dim = telescopic::dimension(tm, o.tol);
  // The truncation error equals the tail bound here, so allow for rounding.
  CheckResult r = make("uniform-telescopic", std::abs(dim.value - 1.0), dim.tail_bound + 1e-14);
  r.passed = r.passed && dim.tail_bound <= 1e-10;
  r.detail = "tail bound " + std::to_string(dim.tail_bound);
  return r;
}

CheckResult level_sampling(const VerifyOptions& o) {
  const auto phi = Potential::product_01();
  const auto pt = thermo::legendre_spectrum(phi, 0.5);
  if (!pt) return make("level-sampling", 1.0, 0.01, "alpha = 0.5 outside the level domain");
  const telescopic::TelescopicMeasure tm(telescopic::BaseMeasure::from_markov(thermo::markov_measure(phi, pt->s)), 2);
  constexpr std::size_t n = 100000;
  std::vector<double> dev;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto path = telescopic::sample(tm, 2 * n, o.seed + i);
    dev.push_back(std::abs(telescopic::empirical_multiple_average(path.symbols, phi, n) - 0.5));
  }
  std::nth_element(dev.begin(), dev.begin() + 100, dev.end());
  const double hi = dev[100];
  const double lo = *std::max_element(dev.begin(), dev.begin() + 100);
  return make("level-sampling", 0.5 * (lo + hi), 0.01, "median over 200 paths, n = 1e5, s = " + std::to_string(pt->s));
}

CheckResult walk_closed_forms(const VerifyOptions&) {
  const auto c1 = walks::WalkSystem::case1();
  const auto c2 = walks::WalkSystem::case2();
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double a = -0.95 + 1.9 * i / 20;
    const auto pt = walks::walk_spectrum(c1, Eigen::VectorXd::Constant(1, a));
    worst = std::max(worst, pt ? std::abs(pt->dim - walks::closed_form_case1(a)) : 1.0);
  }
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) {
      Eigen::VectorXd alpha(2);
      alpha << -0.45 + 0.9 * i / 8, -0.45 + 0.9 * j / 8;
      const auto pt = walks::walk_spectrum(c2, alpha);
      worst = std::max(worst, pt ? std::abs(pt->dim - walks::closed_form_case2(alpha[0], alpha[1])) : 1.0);
    }
  return make("walk-closed-forms", worst, 1e-6);
}

CheckResult walk_prop43(const VerifyOptions& o) {
  double worst_excess = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd s1 = Eigen::VectorXd::Constant(1, 0.7);
  Eigen::VectorXd s2(2);
  s2 << 0.5, -0.3;
  const std::vector<std::pair<walks::WalkSystem, Eigen::VectorXd>> cases = {{walks::WalkSystem::case1(), s1},
                                                                            {walks::WalkSystem::case2(), s2}};
  for (const auto& [system, s] : cases) {
    const walks::EvolutionMeasure mu(system, s);
    const double C = mu.prop43_constant();
    for (std::uint64_t path = 0; path < 100; ++path) {
      CounterRng rng(o.seed, path);
      const auto x = mu.sample(1000, rng);
      const auto S = walks::trajectory(system, x, x.size());
      // Running log mass along the path, one factor per step.
      walks::StepWord prefix;
      for (std::size_t n = 1; n <= x.size(); n += 37) {
        prefix.assign(x.begin(), x.begin() + n);
        const double gap = mu.log_mass(prefix) - s.dot(S[n - 1]) + n * mu.pressure().P;
        worst_excess = std::max(worst_excess, std::abs(gap) - C);
      }
    }
  }
  return make("walk-prop43", worst_excess, 1e-9, "max |log mu - <s,S_n> + n log lambda| - C(s)");
}

CheckResult feller(const VerifyOptions& o) {
  double worst = 0.0;
  for (int n = 1; n <= 60; ++n)
    worst = std::max(worst, std::abs(walks::feller_second_moment(std::numbers::pi, n) - (1 - (n % 2 == 0 ? 1 : -1)) / 2.0));
  const auto mc = walks::feller_monte_carlo(std::numbers::pi / 2, 100, 100000, o.seed);
  const double z = std::abs(mc.mean - 100.0) / mc.std_error;
  CheckResult r = make("feller", worst, 1e-12);
  r.passed = r.passed && z <= 3.0;
  r.detail = "pi: max error " + std::to_string(worst) + "; pi/2 monte carlo " + std::to_string(mc.mean) + " +- " +
             std::to_string(mc.std_error) + " (z = " + std::to_string(z) + ")";
  return r;
}

CheckResult riesz_masses(const VerifyOptions&) {
  double worst = 0.0;
  for (int d : {1, 2, 3})
    for (double b : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
      const riesz::WalshRieszMeasure mu(d, b);
      for (int n = 1; n <= 16; ++n) {
        long double total = 0.0L;
        riesz::SignWord u(n);
        for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
          for (int k = 0; k < n; ++k) u[k] = ((bits >> k) & 1u) ? 1 : -1;
          total += riesz::cylinder_mass(mu, u);
        }
        worst = std::max(worst, static_cast<double>(std::abs(total - 1.0L)));
      }
    }
  return make("riesz-masses", worst, 1e-12);
}

CheckResult riesz_sampling(const VerifyOptions& o) {
  double worst = 0.0;
  for (double b : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
    const auto u = riesz::sample(riesz::WalshRieszMeasure(2, b), 200000, o.seed);
    worst = std::max(worst, std::abs(riesz::walsh_average(u, 2, 100000) - b));
  }
  return make("riesz-sampling", worst, 0.01, "d = 2, n = 1e5");
}

CheckResult periodic_points(const VerifyOptions&) {
  const auto pts = riesz::common_periodic_points(4, 4);
  bool ok = pts.size() == 4;
  for (std::size_t i = 0; ok && i < pts.size(); ++i)
    ok = pts[i].k == i + 1 && pts[i].d == 5 && riesz::verify_periodic_point(pts[i], 4, 4);
  int failures = ok ? 0 : 1;
  int nonempty = 0;
  for (int n = 1; n <= 10; ++n)
    for (int m = 1; m <= 10; ++m) {
      const auto list = riesz::common_periodic_points(n, m);
      if (!list.empty()) ++nonempty;
      for (const auto& x : list) failures += riesz::verify_periodic_point(x, n, m) ? 0 : 1;
    }
  return make("periodic-points", failures, 0.0, std::to_string(nonempty) + " nonempty (n, m) pairs up to 10");
}

CheckResult convexity(const VerifyOptions&) {
  double worst = 0.0;  // most negative second difference
  bool in_range = true;
  for (const auto& phi : {Potential::product_01(), Potential::rademacher(2)}) {
    const double h = 0.05;
    std::vector<double> P;
    for (int i = 0; i <= 200; ++i) P.push_back(thermo::pressure(phi, -5.0 + h * i));
    for (std::size_t i = 1; i + 1 < P.size(); ++i) worst = std::min(worst, P[i - 1] - 2 * P[i] + P[i + 1]);
    for (int i = 0; i <= 40; ++i) {
      const double dim = thermo::ruelle_dimension(phi, -10.0 + 0.5 * i);
      in_range = in_range && dim >= -1e-12 && dim <= 1.0 + 1e-12;
    }
  }
  const auto c2 = walks::WalkSystem::case2();
  Eigen::VectorXd dir(2), base(2);
  dir << 0.8, -0.6;
  base << 0.3, 0.1;
  std::vector<double> W;
  for (int i = 0; i <= 100; ++i) W.push_back(walks::pressure(c2, base + (-4.0 + 0.08 * i) * dir));
  for (std::size_t i = 1; i + 1 < W.size(); ++i) worst = std::min(worst, W[i - 1] - 2 * W[i] + W[i + 1]);
  CheckResult r = make("convexity", -worst, 1e-9, in_range ? "spectra in [0, 1]" : "spectrum outside [0, 1]");
  r.passed = r.passed && in_range;
  return r;
}

const std::map<std::string, std::function<CheckResult(const VerifyOptions&)>>& registry() {
  static const std::map<std::string, std::function<CheckResult(const VerifyOptions&)>> checks = {
      {"walsh-d2", walsh_d2},
      {"walsh-d3", walsh_d3},
      {"rademacher-d3", rademacher_d3},
      {"kps-fibonacci", kps_fibonacci},
      {"x2-box", x2_box},
      {"x2-count", x2_count},
      {"legendre-ruelle", legendre_ruelle},
      {"uniform-telescopic", uniform_telescopic},
      {"level-sampling", level_sampling},
      {"walk-closed-forms", walk_closed_forms},
      {"walk-prop43", walk_prop43},
      {"feller", feller},
      {"riesz-masses", riesz_masses},
      {"riesz-sampling", riesz_sampling},
      {"periodic-points", periodic_points},
      {"convexity", convexity},
  };
  return checks;
}

}  // namespace

std::vector<std::string> default_checks() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry())
    if (name != "walsh-d3") out.push_back(name);
  return out;
}

std::vector<std::string> all_checks() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

CheckResult run_check(const std::string& name, const VerifyOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("verify: unknown check '" + name + "'");
  return it->second(options);
}

}  // namespace mfa::cli

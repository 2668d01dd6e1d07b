#include <doctest.h>

#include "mfa/walks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace mfa;
using namespace mfa::walks;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// Enumerates A^n in lexicographic order.
template <class F>
void for_each_word(const std::vector<long>& A, int n, F&& f) {
  std::vector<std::size_t> idx(n, 0);
  StepWord u(n);
  while (true) {
    for (int k = 0; k < n; ++k) u[k] = A[idx[k]];
    f(u);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == A.size()) idx[k--] = 0;
    if (k < 0) return;
  }
}

}  // namespace

TEST_CASE("walk system validation") {
  const Eigen::MatrixXd minus = Eigen::MatrixXd::Constant(1, 1, -1.0);
  const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, 1.0);
  CHECK_THROWS_AS(WalkSystem(3, minus, one, {0, 1}), ConfigError);           // tau^3 != I
  CHECK_THROWS_AS(WalkSystem(2, minus, Eigen::VectorXd::Zero(1), {0, 1}), ConfigError);
  CHECK_THROWS_AS(WalkSystem(2, minus, one, {0, 2}), ConfigError);           // 0 == 2 mod 2
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK_THROWS_AS(WalkSystem(4, rot, vec({1, 0}), {0, 2}), ConfigError);     // generates 2Z/4Z only
  CHECK_NOTHROW(WalkSystem(4, rot, vec({1, 0}), {0, 3}));
  const auto c2 = WalkSystem::case2();
  CHECK(WalkSystem::from_json(c2.to_json()).to_json() == c2.to_json());
  CHECK(WalkSystem::from_json(nlohmann::json::parse(R"({"p":2,"tau":-1,"v":[1],"A":[0,1]})")).p() == 2);
  CHECK_THROWS_AS(WalkSystem::from_json(nlohmann::json::parse(R"({"p":4,"v":[1,0],"A":[1]})")), ConfigError);
}

TEST_CASE("transfer matrices") {
  const auto c1 = WalkSystem::case1();
  CHECK(transfer_matrix(c1, vec({0.0})).isApprox(Eigen::MatrixXd::Ones(2, 2)));
  const double s = 0.8;
  const auto M = transfer_matrix(c1, vec({s}));
  for (int i = 0; i < 2; ++i) {
    CHECK(M(i, 0) == doctest::Approx(std::exp(s)));
    CHECK(M(i, 1) == doctest::Approx(std::exp(-s)));
  }
  const auto M2 = transfer_matrix(WalkSystem::case2(), vec({0, 0}));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(M2(i, j) == ((j - i + 4) % 2 == 1 ? 1.0 : 0.0));
}

TEST_CASE("spectral radius") {
  const auto ones = spectral_radius(Eigen::MatrixXd::Ones(2, 2));
  CHECK(ones.lambda == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ones.t[0] == doctest::Approx(0.5));
  const auto cycle = spectral_radius(transfer_matrix(WalkSystem::case2(), vec({0, 0})));
  CHECK(cycle.lambda == doctest::Approx(2.0).epsilon(1e-14));
  for (const auto& sys : {WalkSystem::case1(), WalkSystem::case2()})
    for (double a : {-3.0, -0.4, 0.0, 1.1, 5.0}) {
      const Eigen::VectorXd s = Eigen::VectorXd::Constant(sys.dim(), a);
      const auto M = transfer_matrix(sys, s);
      const auto pr = spectral_radius(M);
      CHECK((M * pr.t - pr.lambda * pr.t).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, pr.lambda));
      CHECK(pr.t.minCoeff() > 0.0);
      CHECK(pr.t.sum() == doctest::Approx(1.0).epsilon(1e-14));
    }
  CHECK_THROWS_AS(spectral_radius(-Eigen::MatrixXd::Ones(2, 2)), ConfigError);
}

TEST_CASE("pressure and gradient closed forms") {
  const auto c1 = WalkSystem::case1();
  const auto c2 = WalkSystem::case2();
  for (double s : {-4.0, -1.0, 0.0, 0.5, 2.0}) {
    CHECK(pressure(c1, vec({s})) == doctest::Approx(std::log(2 * std::cosh(s))).epsilon(1e-13));
    CHECK(pressure_gradient(c1, vec({s}))[0] == doctest::Approx(std::tanh(s)).epsilon(1e-9));
    for (double t : {-2.0, 0.3}) {
      CHECK(pressure(c2, vec({s, t})) ==
            doctest::Approx(0.5 * std::log(4 * std::cosh(s) * std::cosh(t))).epsilon(1e-13));
      const auto g = pressure_gradient(c2, vec({s, t}));
      CHECK(g[0] == doctest::Approx(0.5 * std::tanh(s)).epsilon(1e-9));
      CHECK(g[1] == doctest::Approx(0.5 * std::tanh(t)).epsilon(1e-9));
    }
  }
  CHECK(std::isfinite(pressure(c2, vec({700, -700}))));
}

TEST_CASE("walk spectrum") {
  const auto c1 = WalkSystem::case1();
  const auto at0 = walk_spectrum(c1, vec({0.0}));
  REQUIRE(at0);
  CHECK(at0->dim == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(walk_spectrum(c1, vec({0.5}))->dim == doctest::Approx(0.8112781244591328).epsilon(1e-9));
  CHECK_FALSE(walk_spectrum(c1, vec({1.2})));
  const auto edge = walk_spectrum(c1, vec({1.0}));
  REQUIRE(edge);
  CHECK(edge->dim < 1e-6);
  const auto c2 = WalkSystem::case2();
  CHECK(walk_spectrum(c2, vec({0, 0}))->dim == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(walk_spectrum(c2, vec({0.3, -0.2}))->dim == doctest::Approx(closed_form_case2(0.3, -0.2)).epsilon(1e-8));
  CHECK_FALSE(walk_spectrum(c2, vec({0.6, 0.0})));
}

TEST_CASE("closed forms") {
  CHECK(closed_form_case1(1.0) == 0.0);
  CHECK(closed_form_case1(-1.0) == 0.0);
  CHECK(closed_form_case1(0.0) == doctest::Approx(1.0));
  CHECK(closed_form_case2(0.5, 0.5) == 0.0);
  CHECK(closed_form_case2(0.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(closed_form_case1(1.1), ConfigError);
  CHECK_THROWS_AS(closed_form_case2(0.6, 0.0), ConfigError);
}

TEST_CASE("evolution measure") {
  const EvolutionMeasure flat(WalkSystem::case1(), vec({0.0}));
  CHECK(flat.mass({0, 1, 1, 0}) == doctest::Approx(1.0 / 16));
  CHECK_THROWS_AS(flat.mass({2}), ConfigError);

  const std::vector<std::pair<WalkSystem, Eigen::VectorXd>> cases = {{WalkSystem::case1(), vec({0.9})},
                                                                     {WalkSystem::case2(), vec({-0.7, 0.4})}};
  for (const auto& [sys, s] : cases) {
    const EvolutionMeasure mu(sys, s);
    for (int n = 1; n <= 10; ++n) {
      double total = 0.0;
      for_each_word(sys.steps(), n, [&](const StepWord& u) { total += mu.mass(u); });
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
    for_each_word(sys.steps(), 6, [&](const StepWord& u) {
      double children = 0.0;
      StepWord v = u;
      v.push_back(0);
      for (long a : sys.steps()) {
        v.back() = a;
        children += mu.mass(v);
      }
      CHECK(children == doctest::Approx(mu.mass(u)).epsilon(1e-12));
    });
  }
}

TEST_CASE("sampled walks follow the gradient") {
  const auto c2 = WalkSystem::case2();
  const Eigen::VectorXd s = vec({0.6, -0.3});
  const EvolutionMeasure mu(c2, s);
  const Eigen::VectorXd target = pressure_gradient(c2, s);
  const std::size_t n = 100000;
  std::vector<double> dev;
  for (std::uint64_t path = 0; path < 1000; ++path) {
    CounterRng rng(99, path);
    const auto x = mu.sample(n, rng);
    Eigen::Vector2d S = Eigen::Vector2d::Zero();
    int w = 0;
    for (long a : x) {
      w = (w + c2.residue(a)) % 4;
      S += c2.orbit(w);
    }
    dev.push_back((S / double(n) - target).cwiseAbs().maxCoeff());
  }
  std::nth_element(dev.begin(), dev.begin() + 500, dev.end());
  CHECK(dev[500] < 0.02);
}

TEST_CASE("trajectories") {
  const auto c1 = WalkSystem::case1();
  const auto zeros = trajectory(c1, StepWord(5, 0), 5);
  CHECK(zeros.back()[0] == 5.0);
  for (const auto& p : trajectory(c1, StepWord(9, 1), 9)) CHECK((p[0] == -1.0 || p[0] == 0.0));
  const auto four = trajectory(WalkSystem::case2(), StepWord(4, 1), 4);
  CHECK(four.back().norm() < 1e-15);
  CHECK_THROWS_AS(trajectory(c1, StepWord(3, 0), 4), ConfigError);
}

TEST_CASE("feller second moment") {
  for (int n = 1; n <= 20; ++n) {
    CHECK(feller_second_moment(std::numbers::pi, n) == (n % 2 == 1 ? 1.0 : 0.0));
    CHECK(feller_second_moment(std::numbers::pi / 2, n) == doctest::Approx(n).epsilon(1e-12));
  }
  CHECK(feller_second_moment(1.0, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(feller_second_moment(0.0, 5), ConfigError);
  // n = 3 by enumerating the four turn sequences.
  const double a = 0.9;
  double exact = 0.0;
  for (int t1 : {-1, 1})
    for (int t2 : {-1, 1}) {
      const double th1 = t1 * a, th2 = th1 + t2 * a;
      const double x = 1 + std::cos(th1) + std::cos(th2), y = std::sin(th1) + std::sin(th2);
      exact += 0.25 * (x * x + y * y);
    }
  CHECK(feller_second_moment(a, 3) == doctest::Approx(exact).epsilon(1e-13));
  const auto mc = feller_monte_carlo(std::numbers::pi / 2, 100, 100000, 5);
  CHECK(std::abs(mc.mean - 100.0) <= 3.0 * mc.std_error);
  CHECK(feller_monte_carlo(0.7, 30, 1000, 5).mean == feller_monte_carlo(0.7, 30, 1000, 5).mean);
}

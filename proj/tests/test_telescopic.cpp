#include <doctest.h>

#include "mfa/telescopic.hpp"

#include <cmath>
#include <map>
#include <numbers>

using namespace mfa;
using namespace mfa::telescopic;
using symbolic::Word;

namespace {

Word word_from_bits(std::uint32_t bits, int n) {
  Word w(n);
  for (int k = 0; k < n; ++k) w[k] = (bits >> k) & 1u;
  return w;
}

BaseMeasure markov2() {
  // Order 2 on two symbols; rows chosen by hand.
  return BaseMeasure(2, 2, {0.1, 0.2, 0.3, 0.4}, {0.9, 0.1, 0.5, 0.5, 0.25, 0.75, 0.6, 0.4});
}

/// -sum p log p over all words of length k, by enumeration.
double brute_entropy(const BaseMeasure& mu, int k) {
  double h = 0.0;
  for (std::uint32_t bits = 0; bits < (1u << k); ++bits) {
    const double p = mu.mass(word_from_bits(bits, k));
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

TEST_CASE("base measure validation") {
  CHECK_THROWS_AS(BaseMeasure(2, 0, {1.0}, {0.6, 0.6}), ConfigError);
  CHECK_THROWS_AS(BaseMeasure(2, 1, {1.0}, {0.5, 0.5, 0.5, 0.5}), ConfigError);
  CHECK_THROWS_AS(BaseMeasure(2, 0, {1.0}, {-0.1, 1.1}), ConfigError);
  CHECK_THROWS_AS(TelescopicMeasure(BaseMeasure::uniform(2), 1), ConfigError);
  const auto mu = markov2();
  CHECK(BaseMeasure::from_json(mu.to_json()).kernel() == mu.kernel());
}

TEST_CASE("base measure masses are consistent") {
  const auto mu = markov2();
  CHECK(mu.mass({}) == doctest::Approx(1.0));
  CHECK(mu.mass({1}) == doctest::Approx(0.7));
  for (int n = 0; n <= 8; ++n)
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      Word u = word_from_bits(bits, n);
      const double parent = mu.mass(u);
      u.push_back(0);
      double children = mu.mass(u);
      u.back() = 1;
      children += mu.mass(u);
      CHECK(children == doctest::Approx(parent).epsilon(1e-14));
    }
}

TEST_CASE("telescopic cylinder masses") {
  const TelescopicMeasure uniform(BaseMeasure::uniform(2), 2);
  CHECK(cylinder_mass(uniform, {1, 0, 1}) == doctest::Approx(0.125));
  const TelescopicMeasure tm(markov2(), 3);
  for (int n = 1; n <= 12; ++n) {
    double total = 0.0;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) total += cylinder_mass(tm, word_from_bits(bits, n));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Positions 1 and 3 sit on one chain {1, 3, 9}; position 2 on its own.
  const auto b = BaseMeasure::bernoulli({0.3, 0.7});
  const TelescopicMeasure tb(b, 3);
  CHECK(cylinder_mass(tb, {1, 0, 1}) == doctest::Approx(0.7 * 0.3 * 0.7));
}

TEST_CASE("marginal entropies") {
  const auto mu = markov2();
  const auto H = marginal_entropies(mu, 10);
  for (int k = 1; k <= 10; ++k) CHECK(H[k - 1] == doctest::Approx(brute_entropy(mu, k)).epsilon(1e-12));
  const auto b = BaseMeasure::bernoulli({0.2, 0.3, 0.5});
  const double h1 = -(0.2 * std::log(0.2) + 0.3 * std::log(0.3) + 0.5 * std::log(0.5));
  CHECK(marginal_entropy(b, 7) == doctest::Approx(7 * h1).epsilon(1e-13));
}

TEST_CASE("dimension of Bernoulli telescopic products") {
  // sum_k k / q^{k+1} = 1 / (q-1)^2, so the dimension collapses to H(p) / log m.
  for (int q : {2, 3, 7}) {
    const auto b = BaseMeasure::bernoulli({0.25, 0.75});
    const auto dim = dimension(TelescopicMeasure(b, q), 1e-12);
    CHECK(dim.value == doctest::Approx(binary_entropy(0.25) / std::numbers::ln2).epsilon(1e-11));
    CHECK(dim.tail_bound < 1e-12);
  }
  const auto one = dimension(TelescopicMeasure(BaseMeasure::uniform(5), 2), 1e-10);
  CHECK(std::abs(one.value - 1.0) <= one.tail_bound + 1e-14);
  CHECK(one.tail_bound <= 1e-10);
  CHECK(dimension(TelescopicMeasure(BaseMeasure::point_mass(2, 1), 2), 1e-10).value == 0.0);
}

TEST_CASE("sampling is deterministic and prefix-stable") {
  const TelescopicMeasure tm(markov2(), 2);
  const auto a = sample(tm, 500, 42);
  const auto b = sample(tm, 500, 42);
  const auto c = sample(tm, 500, 43);
  const auto longer = sample(tm, 1000, 42);
  CHECK(a.symbols == b.symbols);
  CHECK(a.symbols != c.symbols);
  CHECK(Word(longer.symbols.begin(), longer.symbols.begin() + 500) == a.symbols);
}

TEST_CASE("sampled cylinder frequencies") {
  // Empirical law of (x_1, x_2, x_3, x_4) over many seeds against cylinder_mass.
  const TelescopicMeasure tm(markov2(), 2);
  std::map<Word, int> counts;
  const int trials = 40000;
  for (int t = 0; t < trials; ++t) {
    const auto p = sample(tm, 4, 1000 + t);
    ++counts[p.symbols];
  }
  for (const auto& [w, c] : counts) {
    const double p = cylinder_mass(tm, w);
    CHECK(std::abs(c / double(trials) - p) < 4.0 * std::sqrt(p * (1 - p) / trials) + 1e-9);
  }
}

TEST_CASE("empirical multiple average") {
  const auto phi = thermo::Potential::product_01();
  const Word ones(10, 1);
  CHECK(empirical_multiple_average(ones, phi, 5) == 1.0);
  CHECK_THROWS_AS(empirical_multiple_average(ones, phi, 6), ConfigError);
  const Word x = {1, 1, 0, 0, 1, 1};  // pairs (x1,x2)=(1,1), (x2,x4)=(1,0), (x3,x6)=(0,1)
  CHECK(empirical_multiple_average(x, phi, 3) == doctest::Approx(1.0 / 3.0));
}

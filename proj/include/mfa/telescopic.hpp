#pragma once

// Telescopic product measures: a base measure mu on Sigma_m copied
// independently onto every chain Lambda_i = {i q^j}, q not dividing i.

#include "mfa/common.hpp"
#include "mfa/rng.hpp"
#include "mfa/symbolic.hpp"
#include "mfa/thermo.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace mfa::telescopic {

using symbolic::Word;

/// r-step Markov measure on Sigma_m (r = 0 is Bernoulli).
class BaseMeasure {
 public:
  /// `initial` is the law of the first r symbols (m^r entries, base-m index);
  /// `kernel[w * m + j]` is the probability of j after window w (m^r * m entries).
  BaseMeasure(int m, int order, std::vector<double> initial, std::vector<double> kernel);

  int m() const noexcept { return m_; }
  int order() const noexcept { return order_; }
  const std::vector<double>& initial() const noexcept { return initial_; }
  const std::vector<double>& kernel() const noexcept { return kernel_; }

  /// mu([u]) for a word of any length (including the empty word).
  double mass(const Word& u) const;

  /// Draws the first n symbols of a mu-typical sequence.
  Word draw(std::size_t n, CounterRng& rng) const;

  static BaseMeasure uniform(int m);
  static BaseMeasure bernoulli(std::vector<double> p);
  static BaseMeasure point_mass(int m, int symbol);
  static BaseMeasure from_markov(const thermo::MarkovMeasureSpec& spec);

  static BaseMeasure from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  int m_, order_;
  std::vector<double> initial_, kernel_;
};

struct TelescopicMeasure {
  BaseMeasure base;
  int q = 2;

  TelescopicMeasure(BaseMeasure b, int q_);
};

/// P_mu([u]) = prod over chains of mu([u restricted to the chain]).
double cylinder_mass(const TelescopicMeasure& measure, const Word& u);

/// H_k(mu) in nats.
double marginal_entropy(const BaseMeasure& base, int k);

/// H_1 .. H_K computed in one forward pass over window marginals.
std::vector<double> marginal_entropies(const BaseMeasure& base, int K);

/// (q-1)^2 / log m * sum_k H_k(mu) / q^{k+1}, truncated once the tail bound
/// (from H_k <= k log m) drops below tol. Result lies in [0, 1].
SeriesValue dimension(const TelescopicMeasure& measure, double tol);

struct SamplePath {
  Word symbols;
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

/// Each chain is drawn from the base measure on its own substream (seed, i).
SamplePath sample(const TelescopicMeasure& measure, std::size_t n, std::uint64_t seed);

/// (1/n) sum_{k<=n} phi(x_k, x_{qk}, ..., x_{q^{d-1}k}).
double empirical_multiple_average(const Word& x, const thermo::Potential& phi, std::size_t n);

}  // namespace mfa::telescopic

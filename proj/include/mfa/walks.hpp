#pragma once

// Oriented walks S_n(x) = sum_{k<=n} tau^{x_1 + ... + x_k} v driven by steps
// x_k in A, with tau^p = I. Spectra come from the Perron root of
//   M_s(i, j) = 1_A(j - i) exp<s, tau^j v>   on Z/pZ.

#include "mfa/common.hpp"
#include "mfa/rng.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <optional>
#include <vector>

namespace mfa::walks {

class WalkSystem {
 public:
  /// Validates ||tau^p - I|| < 1e-10, v != 0, distinct steps mod p that generate Z/pZ.
  WalkSystem(int p, Eigen::MatrixXd tau, Eigen::VectorXd v, std::vector<long> steps);

  int p() const noexcept { return p_; }
  int dim() const noexcept { return static_cast<int>(v_.size()); }
  const Eigen::MatrixXd& tau() const noexcept { return tau_; }
  const Eigen::VectorXd& v() const noexcept { return v_; }
  const std::vector<long>& steps() const noexcept { return steps_; }
  /// steps reduced into [0, p).
  const std::vector<int>& residues() const noexcept { return residues_; }
  /// tau^j v for j = 0..p-1.
  const Eigen::VectorXd& orbit(int j) const { return orbit_.at(j); }
  int residue(long step) const noexcept;

  /// p = 2, tau = -1, v = 1, A = {0, 1}.
  static WalkSystem case1();
  /// p = 4, tau = rotation by pi/2, v = (1, 0), A = {-1, 1}.
  static WalkSystem case2();

  static WalkSystem from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  int p_;
  Eigen::MatrixXd tau_;
  Eigen::VectorXd v_;
  std::vector<long> steps_;
  std::vector<int> residues_;
  std::vector<Eigen::VectorXd> orbit_;
};

Eigen::MatrixXd transfer_matrix(const WalkSystem& system, const Eigen::VectorXd& s);

struct PerronPair {
  double lambda = 0.0;
  /// Right eigenvector, positive, summing to one.
  Eigen::VectorXd t;
  int iterations = 0;
};

/// Power iteration on M + I (handles periodic M); stops when the
/// Collatz-Wielandt bounds agree to 1e-14.
PerronPair spectral_radius(const Eigen::MatrixXd& M);

struct WalkPressure {
  Eigen::VectorXd s;
  double lambda = 0.0;
  Eigen::VectorXd t;
  double P = 0.0;
};

/// Evaluated with the columns rescaled by max_j exp<s, tau^j v> so large |s| is safe.
WalkPressure walk_pressure(const WalkSystem& system, const Eigen::VectorXd& s);
double pressure(const WalkSystem& system, const Eigen::VectorXd& s);

/// Richardson-extrapolated central differences, h = 1e-4 max(1, |s_i|).
Eigen::VectorXd pressure_gradient(const WalkSystem& system, const Eigen::VectorXd& s);

struct WalkSpectrumPoint {
  Eigen::VectorXd alpha;
  Eigen::VectorXd s;
  double dim = 0.0;
  double residual = 0.0;
  /// s reached the clamp |s_i| = 40 (alpha on the boundary of the domain).
  bool extrapolated = false;
};

inline constexpr double kWalkClamp = 40.0;

/// (P(s) - <s, alpha>) / log |A| at grad P(s) = alpha; nullopt outside the
/// closure of the gradient range.
std::optional<WalkSpectrumPoint> walk_spectrum(const WalkSystem& system, const Eigen::VectorXd& alpha);

/// H((1 + alpha) / 2) / log 2.
double closed_form_case1(double alpha);
/// (H(1/2 + a) + H(1/2 + b)) / (2 log 2).
double closed_form_case2(double a, double b);

/// Steps of a walk, as elements of A.
using StepWord = std::vector<long>;

/// Markov measure on A^N: pi(a) = t_a / sum_A t_b and
/// Q(w -> w + a) = t_{w+a} exp<s, tau^{w+a} v> / (lambda t_w) on residues w.
class EvolutionMeasure {
 public:
  EvolutionMeasure(const WalkSystem& system, const Eigen::VectorXd& s);

  const WalkPressure& pressure() const noexcept { return pressure_; }
  double mass(const StepWord& u) const;
  double log_mass(const StepWord& u) const;
  StepWord sample(std::size_t n, CounterRng& rng) const;

  /// log mu([u_1..u_n]) - <s, S_n> + n log lambda
  ///   = log lambda - <s, tau^{u_1} v> - log sum_A t + log t_{w_n},
  /// so C(s) is the largest |.| of the right side over u_1 in A and residues w_n.
  double prop43_constant() const;

 private:
  WalkSystem system_;
  WalkPressure pressure_;
  double log_norm_;  // log sum_A t_a
};

/// S_1 .. S_n.
std::vector<Eigen::VectorXd> trajectory(const WalkSystem& system, const StepWord& x, std::size_t n);

/// E L_n^2 for a unit-step planar walk turning by +-angle at each step.
double feller_second_moment(double angle, int n);
MonteCarloEstimate feller_monte_carlo(double angle, int n, int trials, std::uint64_t seed);

}  // namespace mfa::walks

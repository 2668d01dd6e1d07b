#pragma once

// Dimensions of multiplicatively invariant sets
//   X_Omega     = {x : x restricted to i q^N lies in Omega for all q not dividing i}
//   X_Omega^(S) = {x : x restricted to i S  lies in Omega for all (i, S) = 1}
// with Omega given by a prefix automaton.

#include "mfa/common.hpp"
#include "mfa/symbolic.hpp"

#include <json.hpp>

#include <vector>

namespace mfa::multiplicative {

using symbolic::PrefixAutomaton;
using symbolic::SemigroupSpec;

/// Solution of t_v^q = sum over children t_{vi}; t depends only on the state of v.
struct KpsSolution {
  std::vector<double> t;  // per automaton state
  double t_root = 1.0;
  int q = 2;
  int m = 2;
  double residual = 0.0;
  int iterations = 0;
};

KpsSolution kps_solve(const PrefixAutomaton& automaton, int q);

/// (q-1) log_m t_root.
double kps_hausdorff(const PrefixAutomaton& automaton, int q);

/// (q-1)^2 sum_k log_m |Pref_k| / q^{k+1}.
SeriesValue kps_box(const PrefixAutomaton& automaton, int q, double tol);

/// (1 / (2 log 2)) sum_n log F_n / 2^n with F_0 = 1, F_1 = 2.
SeriesValue fibonacci_box_x2(double tol);

/// Number of 0/1 words of length n with x_k x_{2k} = 0 whenever 2k <= n,
/// via the column product of Fibonacci numbers.
BigInt exact_count_x2(int n);

/// Counts words u of length n whose restriction to every chain Lambda_i is a
/// prefix of Omega, by explicit depth-first enumeration. Requires m^n <= 2^24.
BigInt brute_force_count(const PrefixAutomaton& automaton, int q, int n);

/// Same enumeration for the cells i S of a semigroup partition.
BigInt brute_force_count(const PrefixAutomaton& automaton, const SemigroupSpec& spec, int n);

struct PsssSolution {
  double dim = 0.0;
  /// Rigorous bracket from the boundary values t = 1 and t = upper bound.
  double dim_lower = 0.0;
  double dim_upper = 0.0;
  double t_root = 1.0;
  int levels = 0;
  double residual = 0.0;
};

inline constexpr double kPsssLevelBound = 1e12;

PsssSolution psss_solve(const PrefixAutomaton& automaton, const SemigroupSpec& spec,
                        double level_bound = kPsssLevelBound);

/// log_m t(empty).
double psss_hausdorff(const PrefixAutomaton& automaton, const SemigroupSpec& spec);

/// gamma(S)^{-1} sum_k (1/l_k - 1/l_{k+1}) log_m |Pref_k|.
SeriesValue psss_box(const PrefixAutomaton& automaton, const SemigroupSpec& spec, double tol);

struct DimsReport {
  double dim_h = 0.0;
  double dim_b = 0.0;
  bool symmetric = false;
  double residual = 0.0;
  double box_tail_bound = 0.0;

  nlohmann::json to_json() const;
};

DimsReport kps_report(const PrefixAutomaton& automaton, int q, double tol);
DimsReport psss_report(const PrefixAutomaton& automaton, const SemigroupSpec& spec, double tol);

}  // namespace mfa::multiplicative

#include "mfa/multiplicative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mfa::multiplicative {

namespace {

constexpr double kKpsTolerance = 1e-15;
constexpr int kMaxIterations = 100000;

double children_sum(const PrefixAutomaton& a, int state, const std::vector<double>& t) {
  double sum = 0.0;
  for (int sym = 0; sym < a.alphabet_size(); ++sym) {
    const int nxt = a.next(state, sym);
    if (nxt >= 0) sum += t[nxt];
  }
  return sum;
}

double children_log_sum(const PrefixAutomaton& a, int state, const std::vector<double>& log_t) {
  std::vector<double> terms;
  for (int sym = 0; sym < a.alphabet_size(); ++sym) {
    const int nxt = a.next(state, sym);
    if (nxt >= 0) terms.push_back(log_t[nxt]);
  }
  return log_sum_exp(terms);
}

/// Perron root and right vector of the automaton's transition-count matrix.
std::pair<double, std::vector<double>> perron(const PrefixAutomaton& a) {
  const int n = a.state_count();
  std::vector<double> e(n, 1.0), next(n);
  double rho = 1.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    for (int s = 0; s < n; ++s) next[s] = e[s] + children_sum(a, s, e);  // (A + I) e
    const double mx = *std::max_element(next.begin(), next.end());
    double change = 0.0;
    for (int s = 0; s < n; ++s) {
      next[s] /= mx;
      change = std::max(change, std::abs(next[s] - e[s]));
    }
    e.swap(next);
    rho = mx - 1.0;
    if (change < 1e-14) break;
  }
  return {rho, e};
}

}  // namespace

KpsSolution kps_solve(const PrefixAutomaton& automaton, int q) {
  require(q >= 2, "kps: q must be >= 2");
  const int n = automaton.state_count();
  KpsSolution sol;
  sol.q = q;
  sol.m = automaton.alphabet_size();
  sol.t.assign(n, 1.0);
  std::vector<double> next(n);
  double change = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < kMaxIterations && change >= kKpsTolerance) {
    change = 0.0;
    for (int s = 0; s < n; ++s) {
      next[s] = std::pow(children_sum(automaton, s, sol.t), 1.0 / q);
      change = std::max(change, std::abs(next[s] - sol.t[s]));
    }
    sol.t.swap(next);
    ++it;
  }
  sol.iterations = it;
  sol.residual = 0.0;
  for (int s = 0; s < n; ++s)
    sol.residual = std::max(sol.residual, std::abs(std::pow(sol.t[s], q) - children_sum(automaton, s, sol.t)));
  if (change >= kKpsTolerance) throw ConvergenceError("kps_solve: no convergence", sol.residual);
  sol.t_root = std::pow(children_sum(automaton, automaton.initial(), sol.t), 1.0 / q);
  return sol;
}

double kps_hausdorff(const PrefixAutomaton& automaton, int q) {
  const auto sol = kps_solve(automaton, q);
  return (q - 1) * std::log(sol.t_root) / std::log(static_cast<double>(automaton.alphabet_size()));
}

SeriesValue kps_box(const PrefixAutomaton& automaton, int q, double tol) {
  require(q >= 2, "kps_box: q must be >= 2");
  require(tol > 0.0, "kps_box: tol must be positive");
  const double lead = (q - 1.0) * (q - 1.0);
  int K = 1;
  while (lead * linear_geometric_tail(q, K) >= tol) ++K;
  const auto counts = symbolic::prefix_counts(automaton, K);
  const double log_m = std::log(static_cast<double>(automaton.alphabet_size()));
  double sum = 0.0;
  double weight = 1.0 / (static_cast<double>(q) * q);
  for (int k = 1; k <= K; ++k, weight /= q) sum += log_big(counts[k]) / log_m * weight;
  return {lead * sum, lead * linear_geometric_tail(q, K), K};
}

SeriesValue fibonacci_box_x2(double tol) {
  require(tol > 0.0, "fibonacci_box_x2: tol must be positive");
  const double log2 = std::log(2.0);
  const double log_phi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  // F_n <= 2 phi^n, so the tail after N is at most
  // [log 2 * 2^{-N} + log(phi) * sum_{n>N} n 2^{-n}] / (2 log 2).
  auto tail = [&](int N) {
    return (log2 * std::ldexp(1.0, -N) + log_phi * 2.0 * linear_geometric_tail(2.0, N)) / (2.0 * log2);
  };
  int N = 1;
  while (tail(N) >= tol) ++N;
  double f_prev = 1.0, f = 2.0;  // F_0, F_1
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) {
    sum += std::log(f) * std::ldexp(1.0, -n);
    const double f_next = f + f_prev;
    f_prev = f;
    f = f_next;
  }
  return {sum / (2.0 * log2), tail(N), N};
}

BigInt exact_count_x2(int n) {
  require(n >= 1, "exact_count_x2: n must be >= 1");
  int top = 0;  // floor(log2 n)
  while ((std::int64_t{1} << (top + 1)) <= n) ++top;
  std::vector<BigInt> F{1, 2};
  while (static_cast<int>(F.size()) <= top + 1) F.push_back(F.back() + F[F.size() - 2]);
  // n_k = floor(n / 2^{k+1} + 1/2): number of odd multiples of 2^k up to n.
  std::vector<std::int64_t> cols(top + 1);
  for (int k = 0; k <= top; ++k) cols[k] = (n + (std::int64_t{1} << k)) >> (k + 1);
  BigInt N = boost::multiprecision::pow(F[top + 1], static_cast<unsigned>(cols[top]));
  for (int k = 0; k < top; ++k)
    N *= boost::multiprecision::pow(F[k + 1], static_cast<unsigned>(cols[k] - cols[k + 1]));
  return N;
}

namespace {

/// parent[k] = previous position in k's cell (0 for the first element).
BigInt enumerate(const PrefixAutomaton& a, const std::vector<int>& parent, int n) {
  require(n >= 1, "brute_force_count: n must be >= 1");
  require(n * std::log(static_cast<double>(a.alphabet_size())) <= 24 * std::log(2.0) + 1e-9,
          "brute_force_count: m^n exceeds 2^24");
  std::vector<int> state(n + 1, a.initial());
  std::vector<int> symbol(n + 1, -1);
  std::uint64_t count = 0;
  int k = 1;
  // Iterative depth-first search: position k tries symbols in increasing order.
  while (k >= 1) {
    const int from = parent[k] == 0 ? a.initial() : state[parent[k]];
    int sym = symbol[k] + 1;
    while (sym < a.alphabet_size() && a.next(from, sym) < 0) ++sym;
    if (sym >= a.alphabet_size()) {
      symbol[k] = -1;
      --k;
      continue;
    }
    symbol[k] = sym;
    state[k] = a.next(from, sym);
    if (k == n)
      ++count;
    else
      ++k;
  }
  return BigInt(count);
}

}  // namespace

BigInt brute_force_count(const PrefixAutomaton& automaton, int q, int n) {
  require(q >= 2, "brute_force_count: q must be >= 2");
  std::vector<int> parent(n + 1, 0);
  for (int k = 1; k <= n; ++k) parent[k] = (k % q == 0) ? k / q : 0;
  return enumerate(automaton, parent, n);
}

BigInt brute_force_count(const PrefixAutomaton& automaton, const SemigroupSpec& spec, int n) {
  std::vector<int> parent(std::max(n, 1) + 1, 0);
  if (n >= 1)
    for (const auto& cell : symbolic::semigroup_partition(spec, n))
      for (std::size_t j = 1; j < cell.elements.size(); ++j)
        parent[cell.elements[j]] = static_cast<int>(cell.elements[j - 1]);
  return enumerate(automaton, parent, n);
}

// ---------------------------------------------------------------------------

PsssSolution psss_solve(const PrefixAutomaton& automaton, const SemigroupSpec& spec, double level_bound) {
  require(level_bound >= 2.0, "psss: level bound must be >= 2");
  const int n = automaton.state_count();
  const double log_m = std::log(static_cast<double>(automaton.alphabet_size()));
  const double gamma = gamma_of_semigroup(spec);

  auto root_from_level1 = [&](const std::vector<double>& log_t1) {
    return children_log_sum(automaton, automaton.initial(), log_t1) / gamma / log_m;
  };

  PsssSolution sol;
  if (spec.primes().size() == 1) {
    // Constant exponent ratio p: the whole tree below level 1 is the KPS system with q = p.
    const auto kps = kps_solve(automaton, static_cast<int>(spec.primes()[0]));
    std::vector<double> log_t(n);
    for (int s = 0; s < n; ++s) log_t[s] = std::log(kps.t[s]);
    sol.dim = sol.dim_lower = sol.dim_upper = root_from_level1(log_t);
    sol.t_root = std::exp(sol.dim * log_m);
    sol.levels = 1;
    sol.residual = kps.residual;
    return sol;
  }

  const auto ell = symbolic::semigroup_elements(spec, static_cast<std::uint64_t>(level_bound));
  // tail[L] = sum_{i > L} 1/l_i (1-based L), via the Euler product.
  long double partial = 0.0L;
  int L = 0;
  long double tail = gamma;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    partial += 1.0L / static_cast<long double>(ell[i]);
    L = static_cast<int>(i) + 1;
    tail = static_cast<long double>(gamma) - partial;
    if (static_cast<double>(tail) / gamma < 1e-10) break;
  }
  const double ell_L = static_cast<double>(ell[L - 1]);
  const double upper_log = ell_L * static_cast<double>(tail) * log_m;

  const auto [rho, e] = perron(automaton);
  const double emax = *std::max_element(e.begin(), e.end());

  auto solve_from = [&](std::vector<double> log_t) {
    // log_t holds level L; walk back to level 1 with exponent l_{k+1} / l_k.
    std::vector<double> next(n);
    for (int k = L - 1; k >= 1; --k) {
      const double ratio = static_cast<double>(ell[k - 1]) / static_cast<double>(ell[k]);
      for (int s = 0; s < n; ++s) next[s] = ratio * children_log_sum(automaton, s, log_t);
      log_t.swap(next);
    }
    return log_t;
  };

  std::vector<double> lo(n, 0.0), hi(n, upper_log), mid(n);
  for (int s = 0; s < n; ++s) {
    const double guess = ell_L * static_cast<double>(tail) * std::log(std::max(rho, 1.0)) +
                         std::log(std::max(e[s] / emax, 1e-300));
    mid[s] = std::clamp(guess, 0.0, upper_log);
  }
  const auto level1 = solve_from(mid);
  sol.dim = root_from_level1(level1);
  sol.dim_lower = root_from_level1(solve_from(lo));
  sol.dim_upper = root_from_level1(solve_from(hi));
  sol.t_root = std::exp(sol.dim * log_m);
  sol.levels = L;
  // The backward recursion satisfies the level equations exactly; report the
  // root equation's floating-point residual.
  sol.residual = std::abs(gamma * std::log(sol.t_root) - children_log_sum(automaton, automaton.initial(), level1));
  return sol;
}

double psss_hausdorff(const PrefixAutomaton& automaton, const SemigroupSpec& spec) {
  return psss_solve(automaton, spec).dim;
}

SeriesValue psss_box(const PrefixAutomaton& automaton, const SemigroupSpec& spec, double tol) {
  require(tol > 0.0, "psss_box: tol must be positive");
  const double gamma = gamma_of_semigroup(spec);
  for (double bound = 1e6;; bound *= 1e3) {
    const auto ell = symbolic::semigroup_elements(spec, static_cast<std::uint64_t>(std::min(bound, 1e18)));
    // With log_m |Pref_k| <= k the tail after K is (K / l_{K+1} + sum_{k>K} 1/l_k) / gamma.
    long double partial = 0.0L;
    int K = -1;
    double bound_K = 0.0;
    for (std::size_t i = 0; i + 1 < ell.size(); ++i) {
      partial += 1.0L / static_cast<long double>(ell[i]);
      const double k = static_cast<double>(i + 1);
      const double t = (k / static_cast<double>(ell[i + 1]) + static_cast<double>(gamma - partial)) / gamma;
      if (t < tol) {
        K = static_cast<int>(i) + 1;
        bound_K = t;
        break;
      }
    }
    if (K < 0) {
      if (bound >= 1e18) throw ConvergenceError("psss_box: tail bound not reached below 1e18", tol);
      continue;
    }
    const auto counts = symbolic::prefix_counts(automaton, K);
    const double log_m = std::log(static_cast<double>(automaton.alphabet_size()));
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double w = 1.0 / static_cast<double>(ell[k - 1]) - 1.0 / static_cast<double>(ell[k]);
      sum += w * log_big(counts[k]) / log_m;
    }
    return {sum / gamma, bound_K, K};
  }
}

nlohmann::json DimsReport::to_json() const {
  return {{"dim_H", dim_h}, {"dim_B", dim_b}, {"symmetric", symmetric}, {"residual", residual},
          {"dim_B_tail_bound", box_tail_bound}};
}

DimsReport kps_report(const PrefixAutomaton& automaton, int q, double tol) {
  const auto sol = kps_solve(automaton, q);
  const auto box = kps_box(automaton, q, tol);
  DimsReport r;
  r.dim_h = (q - 1) * std::log(sol.t_root) / std::log(static_cast<double>(automaton.alphabet_size()));
  r.dim_b = box.value;
  r.box_tail_bound = box.tail_bound;
  r.symmetric = symbolic::spherically_symmetric(automaton);
  r.residual = sol.residual;
  return r;
}

DimsReport psss_report(const PrefixAutomaton& automaton, const SemigroupSpec& spec, double tol) {
  const auto sol = psss_solve(automaton, spec);
  const auto box = psss_box(automaton, spec, tol);
  DimsReport r;
  r.dim_h = sol.dim;
  r.dim_b = box.value;
  r.box_tail_bound = box.tail_bound;
  r.symmetric = symbolic::spherically_symmetric(automaton);
  r.residual = sol.residual;
  return r;
}

}  // namespace mfa::multiplicative

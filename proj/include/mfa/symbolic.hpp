#pragma once

// Alphabets, words, multiplicative partitions of the positive integers and
// finite-state descriptions of shift-adapted generating sets.
//
// Positions are 1-based: a sequence x = x_1 x_2 ... is stored in a vector with
// x_k at index k-1.

#include "mfa/common.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfa::symbolic {

class Alphabet {
 public:
  explicit Alphabet(int m);
  int size() const noexcept { return m_; }
  bool contains(int symbol) const noexcept { return symbol >= 0 && symbol < m_; }

 private:
  int m_;
};

/// Finite word over {0, ..., m-1}.
using Word = std::vector<int>;

void validate_word(const Word& w, const Alphabet& alphabet);

/// One cell of a multiplicative partition: {base * g : g in generators} cut at a horizon.
struct IndexChain {
  std::int64_t base = 0;
  std::vector<std::int64_t> elements;
};

/// Chains Lambda_i = {i q^j} for q not dividing i, restricted to [1, n].
std::vector<IndexChain> lambda_partition(int q, std::int64_t n);

/// x restricted to the chain positions, in chain order.
Word restrict_to(const Word& x, const IndexChain& chain);

class SemigroupSpec {
 public:
  /// Generators must be distinct primes; stored ascending.
  explicit SemigroupSpec(std::vector<std::uint64_t> primes);
  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  /// true iff no generator divides i.
  bool coprime(std::uint64_t i) const noexcept;

 private:
  std::vector<std::uint64_t> primes_;
};

/// All semigroup elements <= bound in increasing order, starting at 1.
std::vector<std::uint64_t> semigroup_elements(const SemigroupSpec& spec, std::uint64_t bound);

/// gamma(S) = sum_k 1/l_k = prod_j (1 - 1/p_j)^{-1}.
double gamma_of_semigroup(const SemigroupSpec& spec);

/// Cells i*S for (i, S) = 1, restricted to [1, n].
std::vector<IndexChain> semigroup_partition(const SemigroupSpec& spec, std::int64_t n);

/// Deterministic automaton whose language is Pref(Omega) for a closed,
/// shift-adapted set Omega. Every state is reachable and has an outgoing edge.
class PrefixAutomaton {
 public:
  struct Transition {
    std::string from;
    int symbol = 0;
    std::string to;
  };

  PrefixAutomaton(int m, std::vector<std::string> states, const std::string& initial,
                  const std::vector<Transition>& transitions);

  int alphabet_size() const noexcept { return m_; }
  int state_count() const noexcept { return static_cast<int>(names_.size()); }
  int initial() const noexcept { return initial_; }
  const std::string& state_name(int s) const { return names_.at(s); }
  /// Target state or -1 when the symbol is not allowed.
  int next(int state, int symbol) const { return next_.at(state).at(symbol); }
  int out_degree(int state) const;
  /// State reached by reading w from the initial state, or nullopt if w is not a prefix.
  std::optional<int> run(const Word& w) const;

  static PrefixAutomaton full_shift(int m);
  /// Binary sequences with no two consecutive 1s.
  static PrefixAutomaton golden_mean();
  /// Binary sequences with no run of `run` consecutive 1s.
  static PrefixAutomaton forbid_ones(int run);
  /// The single sequence 000...
  static PrefixAutomaton single_point(int m);

  static PrefixAutomaton from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  int m_;
  std::vector<std::string> names_;
  int initial_;
  std::vector<std::vector<int>> next_;
};

/// |Pref_k(Omega)| by state-count dynamic programming.
BigInt prefix_count(const PrefixAutomaton& automaton, int k);

/// |Pref_k(Omega)| for k = 0..K.
std::vector<BigInt> prefix_counts(const PrefixAutomaton& automaton, int K);

/// True iff every prefix of length k < depth has the same number of children
/// as every other prefix of that length.
bool spherically_symmetric(const PrefixAutomaton& automaton, int depth);

/// Definitive answer: walks the sequence of level state-sets until it repeats.
bool spherically_symmetric(const PrefixAutomaton& automaton);

}  // namespace mfa::symbolic

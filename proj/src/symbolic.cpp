#include "mfa/symbolic.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace mfa::symbolic {

Alphabet::Alphabet(int m) : m_(m) { require(m >= 2, "alphabet needs at least 2 symbols"); }

void validate_word(const Word& w, const Alphabet& alphabet) {
  for (int s : w)
    require(alphabet.contains(s), "symbol " + std::to_string(s) + " outside alphabet of size " +
                                      std::to_string(alphabet.size()));
}

std::vector<IndexChain> lambda_partition(int q, std::int64_t n) {
  require(q >= 2, "lambda_partition: q must be >= 2");
  require(n >= 1, "lambda_partition: horizon must be >= 1");
  std::vector<IndexChain> chains;
  for (std::int64_t i = 1; i <= n; ++i) {
    if (i % q == 0) continue;
    IndexChain c{i, {}};
    for (std::int64_t k = i; k <= n; k *= q) {
      c.elements.push_back(k);
      if (k > n / q) break;
    }
    chains.push_back(std::move(c));
  }
  return chains;
}

Word restrict_to(const Word& x, const IndexChain& chain) {
  Word out;
  out.reserve(chain.elements.size());
  for (auto k : chain.elements) {
    if (k < 1 || static_cast<std::size_t>(k) > x.size())
      throw std::out_of_range("restrict_to: index " + std::to_string(k) + " beyond word of length " +
                              std::to_string(x.size()));
    out.push_back(x[static_cast<std::size_t>(k - 1)]);
  }
  return out;
}

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

SemigroupSpec::SemigroupSpec(std::vector<std::uint64_t> primes) : primes_(std::move(primes)) {
  require(!primes_.empty(), "semigroup needs at least one generator");
  std::sort(primes_.begin(), primes_.end());
  require(std::adjacent_find(primes_.begin(), primes_.end()) == primes_.end(),
          "semigroup generators must be distinct");
  for (auto p : primes_) require(is_prime(p), "semigroup generator " + std::to_string(p) + " is not prime");
}

bool SemigroupSpec::coprime(std::uint64_t i) const noexcept {
  for (auto p : primes_)
    if (i % p == 0) return false;
  return true;
}

std::vector<std::uint64_t> semigroup_elements(const SemigroupSpec& spec, std::uint64_t bound) {
  require(bound >= 1, "semigroup_elements: bound must be >= 1");
  // Merge of the streams p_j * l for l already produced (Hamming-number scheme).
  const auto& ps = spec.primes();
  std::vector<std::uint64_t> out{1};
  std::vector<std::size_t> cursor(ps.size(), 0);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (;;) {
    std::uint64_t best = kMax;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const auto base = out[cursor[j]];
      if (base > kMax / ps[j]) continue;
      best = std::min(best, base * ps[j]);
    }
    if (best == kMax || best > bound) break;
    out.push_back(best);
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (out[cursor[j]] <= kMax / ps[j] && out[cursor[j]] * ps[j] == best) ++cursor[j];
  }
  return out;
}

double gamma_of_semigroup(const SemigroupSpec& spec) {
  double g = 1.0;
  for (auto p : spec.primes()) g *= static_cast<double>(p) / static_cast<double>(p - 1);
  return g;
}

std::vector<IndexChain> semigroup_partition(const SemigroupSpec& spec, std::int64_t n) {
  require(n >= 1, "semigroup_partition: horizon must be >= 1");
  const auto elems = semigroup_elements(spec, static_cast<std::uint64_t>(n));
  std::vector<IndexChain> chains;
  for (std::int64_t i = 1; i <= n; ++i) {
    if (!spec.coprime(static_cast<std::uint64_t>(i))) continue;
    IndexChain c{i, {}};
    for (auto l : elems) {
      if (static_cast<std::int64_t>(l) > n / i) break;
      c.elements.push_back(i * static_cast<std::int64_t>(l));
    }
    chains.push_back(std::move(c));
  }
  return chains;
}

// ---------------------------------------------------------------------------

PrefixAutomaton::PrefixAutomaton(int m, std::vector<std::string> states, const std::string& initial,
                                 const std::vector<Transition>& transitions)
    : m_(m), names_(std::move(states)), initial_(-1) {
  require(m >= 2, "automaton alphabet needs at least 2 symbols");
  require(!names_.empty(), "automaton has no states");
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
    require(index.emplace(names_[i], i).second, "duplicate state name '" + names_[i] + "'");
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    require(it != index.end(), "unknown state '" + name + "'");
    return it->second;
  };
  initial_ = lookup(initial);
  next_.assign(names_.size(), std::vector<int>(m, -1));
  for (const auto& t : transitions) {
    const int from = lookup(t.from);
    const int to = lookup(t.to);
    require(t.symbol >= 0 && t.symbol < m, "transition symbol " + std::to_string(t.symbol) + " out of range");
    require(next_[from][t.symbol] < 0, "nondeterministic transition from '" + t.from + "' on " +
                                           std::to_string(t.symbol));
    next_[from][t.symbol] = to;
  }
  for (int s = 0; s < state_count(); ++s)
    require(out_degree(s) > 0, "dead state '" + names_[s] + "' (no outgoing transition)");

  std::vector<bool> seen(names_.size(), false);
  std::deque<int> queue{initial_};
  seen[initial_] = true;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int to : next_[s])
      if (to >= 0 && !seen[to]) {
        seen[to] = true;
        queue.push_back(to);
      }
  }
  for (int s = 0; s < state_count(); ++s)
    require(seen[s], "unreachable state '" + names_[s] + "'");
}

int PrefixAutomaton::out_degree(int state) const {
  const auto& row = next_.at(state);
  return static_cast<int>(std::count_if(row.begin(), row.end(), [](int t) { return t >= 0; }));
}

std::optional<int> PrefixAutomaton::run(const Word& w) const {
  int s = initial_;
  for (int sym : w) {
    if (sym < 0 || sym >= m_) return std::nullopt;
    s = next_[s][sym];
    if (s < 0) return std::nullopt;
  }
  return s;
}

PrefixAutomaton PrefixAutomaton::full_shift(int m) {
  std::vector<Transition> tr;
  for (int a = 0; a < m; ++a) tr.push_back({"s", a, "s"});
  return PrefixAutomaton(m, {"s"}, "s", tr);
}

PrefixAutomaton PrefixAutomaton::golden_mean() { return forbid_ones(2); }

PrefixAutomaton PrefixAutomaton::forbid_ones(int run) {
  require(run >= 1, "forbid_ones: run length must be >= 1");
  // State r = number of trailing 1s read so far.
  std::vector<std::string> names;
  std::vector<Transition> tr;
  for (int r = 0; r < run; ++r) names.push_back("r" + std::to_string(r));
  for (int r = 0; r < run; ++r) {
    tr.push_back({names[r], 0, names[0]});
    if (r + 1 < run) tr.push_back({names[r], 1, names[r + 1]});
  }
  return PrefixAutomaton(2, names, names[0], tr);
}

PrefixAutomaton PrefixAutomaton::single_point(int m) {
  return PrefixAutomaton(m, {"z"}, "z", {{"z", 0, "z"}});
}

PrefixAutomaton PrefixAutomaton::from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("alphabet").get<int>();
    auto states = j.at("states").get<std::vector<std::string>>();
    const auto initial = j.at("initial").get<std::string>();
    std::vector<Transition> tr;
    for (const auto& t : j.at("transitions"))
      tr.push_back({t.at("from").get<std::string>(), t.at("symbol").get<int>(), t.at("to").get<std::string>()});
    return PrefixAutomaton(m, std::move(states), initial, tr);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("automaton JSON: ") + e.what());
  }
}

nlohmann::json PrefixAutomaton::to_json() const {
  nlohmann::json tr = nlohmann::json::array();
  for (int s = 0; s < state_count(); ++s)
    for (int a = 0; a < m_; ++a)
      if (next_[s][a] >= 0) tr.push_back({{"from", names_[s]}, {"symbol", a}, {"to", names_[next_[s][a]]}});
  return {{"alphabet", m_}, {"states", names_}, {"initial", names_[initial_]}, {"transitions", tr}};
}

// ---------------------------------------------------------------------------

std::vector<BigInt> prefix_counts(const PrefixAutomaton& automaton, int K) {
  require(K >= 0, "prefix_counts: depth must be >= 0");
  const int n = automaton.state_count();
  std::vector<BigInt> by_state(n, 0);
  by_state[automaton.initial()] = 1;
  std::vector<BigInt> out{1};
  for (int k = 1; k <= K; ++k) {
    std::vector<BigInt> nxt(n, 0);
    for (int s = 0; s < n; ++s) {
      if (by_state[s] == 0) continue;
      for (int a = 0; a < automaton.alphabet_size(); ++a) {
        const int t = automaton.next(s, a);
        if (t >= 0) nxt[t] += by_state[s];
      }
    }
    by_state = std::move(nxt);
    BigInt total = 0;
    for (const auto& c : by_state) total += c;
    out.push_back(total);
  }
  return out;
}

BigInt prefix_count(const PrefixAutomaton& automaton, int k) { return prefix_counts(automaton, k).back(); }

namespace {

std::vector<char> successor_set(const PrefixAutomaton& a, const std::vector<char>& level) {
  std::vector<char> out(level.size(), 0);
  for (std::size_t s = 0; s < level.size(); ++s) {
    if (!level[s]) continue;
    for (int sym = 0; sym < a.alphabet_size(); ++sym) {
      const int t = a.next(static_cast<int>(s), sym);
      if (t >= 0) out[t] = 1;
    }
  }
  return out;
}

bool uniform_degree(const PrefixAutomaton& a, const std::vector<char>& level) {
  int degree = -1;
  for (std::size_t s = 0; s < level.size(); ++s) {
    if (!level[s]) continue;
    const int d = a.out_degree(static_cast<int>(s));
    if (degree >= 0 && d != degree) return false;
    degree = d;
  }
  return true;
}

}  // namespace

bool spherically_symmetric(const PrefixAutomaton& automaton, int depth) {
  require(depth >= 1, "spherically_symmetric: depth must be >= 1");
  std::vector<char> level(automaton.state_count(), 0);
  level[automaton.initial()] = 1;
  for (int k = 0; k < depth; ++k) {
    if (!uniform_degree(automaton, level)) return false;
    level = successor_set(automaton, level);
  }
  return true;
}

bool spherically_symmetric(const PrefixAutomaton& automaton) {
  std::vector<char> level(automaton.state_count(), 0);
  level[automaton.initial()] = 1;
  std::set<std::vector<char>> seen;
  while (seen.insert(level).second) {
    if (!uniform_degree(automaton, level)) return false;
    level = successor_set(automaton, level);
  }
  return true;
}

}  // namespace mfa::symbolic

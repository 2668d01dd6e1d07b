#include "mfa/telescopic.hpp"

#include <cmath>

namespace mfa::telescopic {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

constexpr double kStochasticTolerance = 1e-12;

void require_probability(std::span<const double> p, const std::string& what) {
  double total = 0.0;
  for (double v : p) {
    require(std::isfinite(v) && v >= 0.0, what + ": negative or non-finite probability");
    total += v;
  }
  require(std::abs(total - 1.0) <= kStochasticTolerance, what + ": probabilities sum to " + std::to_string(total));
}

}  // namespace

BaseMeasure::BaseMeasure(int m, int order, std::vector<double> initial, std::vector<double> kernel)
    : m_(m), order_(order), initial_(std::move(initial)), kernel_(std::move(kernel)) {
  require(m >= 2, "base measure: m must be >= 2");
  require(order >= 0 && order <= 20, "base measure: order out of range");
  const std::size_t windows = ipow(m, order);
  require(initial_.size() == windows, "base measure: initial law needs m^order entries");
  require(kernel_.size() == windows * m, "base measure: kernel needs m^order * m entries");
  require_probability(initial_, "base measure initial law");
  for (std::size_t w = 0; w < windows; ++w)
    require_probability(std::span<const double>(kernel_).subspan(w * m, m),
                        "base measure kernel row " + std::to_string(w));
}

double BaseMeasure::mass(const Word& u) const {
  const std::size_t k = u.size();
  const auto r = static_cast<std::size_t>(order_);
  for (int a : u) require(a >= 0 && a < m_, "base measure: symbol out of range");
  if (k <= r) {
    std::size_t prefix = 0;
    for (int a : u) prefix = prefix * m_ + a;
    const std::size_t span = ipow(m_, static_cast<int>(r - k));
    double total = 0.0;
    for (std::size_t w = prefix * span; w < (prefix + 1) * span; ++w) total += initial_[w];
    return total;
  }
  std::size_t window = 0;
  for (std::size_t t = 0; t < r; ++t) window = window * m_ + u[t];
  double p = initial_[window];
  const std::size_t tail = ipow(m_, static_cast<int>(r)) / m_;
  for (std::size_t t = r; t < k && p > 0.0; ++t) {
    p *= kernel_[window * m_ + u[t]];
    window = r == 0 ? 0 : (window % tail) * m_ + u[t];
  }
  return p;
}

Word BaseMeasure::draw(std::size_t n, CounterRng& rng) const {
  Word out;
  out.reserve(std::max(n, static_cast<std::size_t>(order_)));
  std::size_t window = 0;
  if (order_ > 0) {
    window = rng.categorical(initial_);
    for (int t = order_ - 1; t >= 0; --t) out.push_back(static_cast<int>((window / ipow(m_, t)) % m_));
  }
  const std::size_t tail = ipow(m_, order_) / m_;
  while (out.size() < n) {
    const auto j = static_cast<int>(rng.categorical(std::span<const double>(kernel_).subspan(window * m_, m_)));
    out.push_back(j);
    window = order_ == 0 ? 0 : (window % tail) * m_ + j;
  }
  out.resize(n);
  return out;
}

BaseMeasure BaseMeasure::uniform(int m) {
  require(m >= 2, "uniform: m must be >= 2");
  return BaseMeasure(m, 0, {1.0}, std::vector<double>(m, 1.0 / m));
}

BaseMeasure BaseMeasure::bernoulli(std::vector<double> p) {
  const int m = static_cast<int>(p.size());
  return BaseMeasure(m, 0, {1.0}, std::move(p));
}

BaseMeasure BaseMeasure::point_mass(int m, int symbol) {
  require(symbol >= 0 && symbol < m, "point_mass: symbol out of range");
  std::vector<double> p(m, 0.0);
  p[symbol] = 1.0;
  return BaseMeasure(m, 0, {1.0}, std::move(p));
}

BaseMeasure BaseMeasure::from_markov(const thermo::MarkovMeasureSpec& spec) {
  return BaseMeasure(spec.m, spec.order, spec.initial, spec.kernel);
}

BaseMeasure BaseMeasure::from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("m").get<int>();
    const int order = j.value("order", 0);
    auto initial = j.contains("initial") ? j.at("initial").get<std::vector<double>>() : std::vector<double>{1.0};
    std::vector<double> kernel;
    for (const auto& row : j.at("kernel")) {
      if (row.is_array())
        for (double v : row.get<std::vector<double>>()) kernel.push_back(v);
      else
        kernel.push_back(row.get<double>());
    }
    return BaseMeasure(m, order, std::move(initial), std::move(kernel));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("base measure JSON: ") + e.what());
  }
}

nlohmann::json BaseMeasure::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t w = 0; w < initial_.size(); ++w)
    rows.push_back(std::vector<double>(kernel_.begin() + w * m_, kernel_.begin() + (w + 1) * m_));
  return {{"m", m_}, {"order", order_}, {"initial", initial_}, {"kernel", rows}};
}

TelescopicMeasure::TelescopicMeasure(BaseMeasure b, int q_) : base(std::move(b)), q(q_) {
  require(q >= 2, "telescopic measure: q must be >= 2");
}

double cylinder_mass(const TelescopicMeasure& measure, const Word& u) {
  if (u.empty()) return 1.0;
  double p = 1.0;
  for (const auto& chain : symbolic::lambda_partition(measure.q, static_cast<std::int64_t>(u.size()))) {
    p *= measure.base.mass(symbolic::restrict_to(u, chain));
    if (p == 0.0) break;
  }
  return p;
}

std::vector<double> marginal_entropies(const BaseMeasure& base, int K) {
  require(K >= 1, "marginal_entropies: K must be >= 1");
  const int m = base.m();
  const int r = base.order();
  std::vector<double> out;
  out.reserve(K);
  // Lengths k <= r: marginals of the initial law.
  for (int k = 1; k <= std::min(K, r); ++k) {
    const std::size_t span = ipow(m, r - k);
    std::vector<double> marg(ipow(m, k), 0.0);
    for (std::size_t w = 0; w < base.initial().size(); ++w) marg[w / span] += base.initial()[w];
    out.push_back(shannon_entropy(marg));
  }
  if (K <= r) return out;

  const std::size_t windows = ipow(m, r);
  const std::size_t tail = windows / m;
  std::vector<double> row_entropy(windows);
  for (std::size_t w = 0; w < windows; ++w)
    row_entropy[w] = shannon_entropy(std::span<const double>(base.kernel()).subspan(w * m, m));

  std::vector<double> dist = base.initial();
  double h = r == 0 ? 0.0 : out.back();
  for (int k = r + 1; k <= K; ++k) {
    for (std::size_t w = 0; w < windows; ++w) h += dist[w] * row_entropy[w];
    out.push_back(h);
    if (r > 0) {
      std::vector<double> next(windows, 0.0);
      for (std::size_t w = 0; w < windows; ++w)
        for (int j = 0; j < m; ++j) next[(w % tail) * m + j] += dist[w] * base.kernel()[w * m + j];
      dist = std::move(next);
    }
  }
  return out;
}

double marginal_entropy(const BaseMeasure& base, int k) {
  require(k >= 1, "marginal_entropy: k must be >= 1");
  return marginal_entropies(base, k).back();
}

SeriesValue dimension(const TelescopicMeasure& measure, double tol) {
  require(tol > 0.0, "dimension: tol must be positive");
  const double q = measure.q;
  const double lead = (q - 1.0) * (q - 1.0);
  int K = 1;
  while (lead * linear_geometric_tail(q, K) >= tol) ++K;
  const auto H = marginal_entropies(measure.base, K);
  double sum = 0.0;
  double weight = 1.0 / (q * q);  // 1 / q^{k+1}
  for (int k = 1; k <= K; ++k, weight /= q) sum += H[k - 1] * weight;
  return {lead * sum / std::log(static_cast<double>(measure.base.m())), lead * linear_geometric_tail(q, K), K};
}

SamplePath sample(const TelescopicMeasure& measure, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample: horizon must be >= 1");
  SamplePath path{Word(n, 0), seed, n};
  for (const auto& chain : symbolic::lambda_partition(measure.q, static_cast<std::int64_t>(n))) {
    CounterRng rng(seed, static_cast<std::uint64_t>(chain.base));
    const auto z = measure.base.draw(chain.elements.size(), rng);
    for (std::size_t j = 0; j < z.size(); ++j) path.symbols[static_cast<std::size_t>(chain.elements[j] - 1)] = z[j];
  }
  return path;
}

double empirical_multiple_average(const Word& x, const thermo::Potential& phi, std::size_t n) {
  require(n >= 1, "empirical_multiple_average: n must be >= 1");
  const auto reach = static_cast<std::size_t>(ipow(phi.q(), phi.d() - 1));
  if (reach * n > x.size())
    throw ConfigError("empirical_multiple_average: need q^{d-1} n = " + std::to_string(reach * n) +
                      " symbols, have " + std::to_string(x.size()));
  std::vector<int> tuple(phi.d());
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t pos = k;
    for (int j = 0; j < phi.d(); ++j, pos *= phi.q()) tuple[j] = x[pos - 1];
    sum += phi(tuple);
  }
  return sum / static_cast<double>(n);
}

}  // namespace mfa::telescopic

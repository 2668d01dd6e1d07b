#include "cli.hpp"

#include "verify.hpp"

#include "mfa/multiplicative.hpp"
#include "mfa/riesz_walsh.hpp"
#include "mfa/telescopic.hpp"
#include "mfa/thermo.hpp"
#include "mfa/walks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mfa::cli {

namespace {

using nlohmann::json;

struct Common {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::string grid;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--config", c.config, "input JSON file");
  cmd->add_option("--out", c.out, "output file (stdout when omitted)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--tol", c.tol, "series / solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--grid", c.grid, "grid start:stop:count");
}

std::string num(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_grid(const std::string& spec, const std::string& fallback) {
  const std::string text = spec.empty() ? fallback : spec;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  require(parts.size() == 3, "grid must look like start:stop:count, got '" + text + "'");
  double a = 0.0, b = 0.0;
  long count = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    count = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("grid must look like start:stop:count, got '" + text + "'");
  }
  require(count >= 2, "grid count must be >= 2");
  require(std::isfinite(a) && std::isfinite(b) && a < b, "grid needs start < stop");
  std::vector<double> out(count);
  for (long i = 0; i < count; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(used == item.size(), "bad number");
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse '" + item + "'");
    }
  }
  require(!out.empty(), what + ": empty list");
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Writes the whole result at once; a failed run leaves no file behind.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  const std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << content;
    if (!f.flush()) throw ConfigError("cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

thermo::Potential load_potential(const Common& c, const std::string& builtin) {
  if (!c.config.empty()) return thermo::Potential::from_json(read_json(c.config));
  if (builtin == "phi1") return thermo::Potential::product_01();
  if (builtin == "phi2") return thermo::Potential::rademacher(2);
  if (builtin == "phi3") return thermo::Potential::rademacher(3);
  throw ConfigError("spectrum: give --config FILE or --builtin phi1|phi2|phi3");
}

symbolic::PrefixAutomaton load_automaton(const Common& c, const std::string& builtin) {
  if (!c.config.empty()) return symbolic::PrefixAutomaton::from_json(read_json(c.config));
  if (builtin == "golden") return symbolic::PrefixAutomaton::golden_mean();
  if (builtin == "forbid111") return symbolic::PrefixAutomaton::forbid_ones(3);
  if (builtin == "point") return symbolic::PrefixAutomaton::single_point(2);
  if (builtin.rfind("full", 0) == 0) {
    const int m = builtin.size() > 4 ? std::atoi(builtin.c_str() + 4) : 2;
    return symbolic::PrefixAutomaton::full_shift(m);
  }
  throw ConfigError("dims: give --config FILE or --builtin golden|forbid111|point|fullM");
}

walks::WalkSystem load_system(const std::string& system) {
  if (system == "case1") return walks::WalkSystem::case1();
  if (system == "case2") return walks::WalkSystem::case2();
  if (system.empty()) throw ConfigError("walk: --system FILE|case1|case2 is required");
  return walks::WalkSystem::from_json(read_json(system));
}

telescopic::BaseMeasure load_measure(const Common& c, const std::string& spec) {
  if (!c.config.empty()) return telescopic::BaseMeasure::from_json(read_json(c.config));
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "uniform") return telescopic::BaseMeasure::uniform(arg.empty() ? 2 : std::stoi(arg));
  if (kind == "bernoulli") return telescopic::BaseMeasure::bernoulli(parse_list(arg, "bernoulli weights"));
  if (kind == "phi1" || kind == "phi2") {
    const auto phi = kind == "phi1" ? thermo::Potential::product_01() : thermo::Potential::rademacher(2);
    const double s = arg.empty() ? 0.0 : parse_list(arg, "s")[0];
    return telescopic::BaseMeasure::from_markov(thermo::markov_measure(phi, s));
  }
  throw ConfigError("sample: unknown measure '" + spec + "' (uniform[:m], bernoulli:p0,p1,..., phi1:s, phi2:s)");
}

// ---------------------------------------------------------------------------

std::string cmd_spectrum(const Common& c, const std::string& builtin) {
  const auto phi = load_potential(c, builtin);
  auto grid = parse_grid(c.grid, "-10:10:401");
  if (phi.is_constant()) grid = {0.0};
  const auto curve = thermo::pressure_curve(phi, grid);
  if (c.format == "json") {
    json records = json::array();
    for (const auto& r : curve.records)
      records.push_back({{"s", r.s}, {"P", r.P}, {"dP", r.dP}, {"alpha", r.alpha}, {"dim", r.dim}});
    return json{{"potential", phi.to_json()}, {"records", records}}.dump(2) + "\n";
  }
  std::string out = "s,P,dP,alpha,dim\n";
  for (const auto& r : curve.records)
    out += num(r.s) + "," + num(r.P) + "," + num(r.dP) + "," + num(r.alpha) + "," + num(r.dim) + "\n";
  return out;
}

std::string cmd_dims(const Common& c, const std::string& builtin, int q, const std::string& semigroup) {
  const auto automaton = load_automaton(c, builtin);
  json j;
  if (!semigroup.empty()) {
    std::vector<std::uint64_t> primes;
    for (double p : parse_list(semigroup, "semigroup")) {
      require(p >= 2 && p == std::floor(p), "semigroup generators must be integers >= 2");
      primes.push_back(static_cast<std::uint64_t>(p));
    }
    const symbolic::SemigroupSpec spec(primes);
    j = multiplicative::psss_report(automaton, spec, c.tol).to_json();
    j["semigroup"] = primes;
  } else {
    j = multiplicative::kps_report(automaton, q, c.tol).to_json();
    j["q"] = q;
  }
  return j.dump(2) + "\n";
}

std::string vec_csv(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

std::string cmd_walk(const Common& c, const std::string& system_arg, const std::string& alpha_arg,
                     const std::string& s_arg, std::size_t trajectory_n) {
  const auto system = load_system(system_arg.empty() ? c.config : system_arg);
  const int D = system.dim();

  if (trajectory_n > 0) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(D);
    if (!s_arg.empty()) {
      const auto v = parse_list(s_arg, "s");
      require(static_cast<int>(v.size()) == D, "walk: --s needs " + std::to_string(D) + " entries");
      s = Eigen::Map<const Eigen::VectorXd>(v.data(), D);
    }
    const walks::EvolutionMeasure mu(system, s);
    CounterRng rng(c.seed, 0);
    const auto x = mu.sample(trajectory_n, rng);
    const auto S = walks::trajectory(system, x, trajectory_n);
    if (c.format == "json") {
      json rows = json::array();
      for (const auto& p : S) rows.push_back(std::vector<double>(p.data(), p.data() + p.size()));
      return json{{"s", std::vector<double>(s.data(), s.data() + D)}, {"steps", x}, {"trajectory", rows}}.dump(2) + "\n";
    }
    std::string out = "n";
    for (int i = 1; i <= D; ++i) out += ",x" + std::to_string(i);
    out += "\n";
    for (std::size_t k = 0; k < S.size(); ++k) out += std::to_string(k + 1) + "," + vec_csv(S[k]) + "\n";
    return out;
  }

  std::vector<Eigen::VectorXd> points;
  if (!alpha_arg.empty()) {
    const auto v = parse_list(alpha_arg, "alpha");
    require(static_cast<int>(v.size()) == D, "walk: --alpha needs " + std::to_string(D) + " entries");
    points.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), D));
  } else {
    const auto g = parse_grid(c.grid, D == 1 ? "-1:1:41" : "-0.5:0.5:21");
    std::vector<int> idx(D, 0);
    while (true) {
      Eigen::VectorXd a(D);
      for (int i = 0; i < D; ++i) a[i] = g[idx[i]];
      points.push_back(a);
      int i = D - 1;
      while (i >= 0 && ++idx[i] == static_cast<int>(g.size())) idx[i--] = 0;
      if (i < 0) break;
    }
  }

  json rows = json::array();
  std::string csv;
  for (int i = 1; i <= D; ++i) csv += (D == 1 ? std::string("alpha") : "alpha" + std::to_string(i)) + ",";
  csv += "dim\n";
  for (const auto& a : points) {
    const auto pt = walks::walk_spectrum(system, a);
    const double dim = pt ? pt->dim : std::numeric_limits<double>::quiet_NaN();
    csv += vec_csv(a) + "," + num(dim) + "\n";
    json row = {{"alpha", std::vector<double>(a.data(), a.data() + D)}};
    row["dim"] = pt ? json(dim) : json(nullptr);
    if (pt) row["s"] = std::vector<double>(pt->s.data(), pt->s.data() + D);
    rows.push_back(row);
  }
  if (c.format == "json") return json{{"system", system.to_json()}, {"spectrum", rows}}.dump(2) + "\n";
  return csv;
}

struct RieszResult {
  std::string summary;
  std::string path;
};

RieszResult cmd_riesz(const Common& c, int d, double b, std::size_t n) {
  require(n >= 1, "riesz: --n must be >= 1");
  const riesz::WalshRieszMeasure mu(d, b);
  const auto u = riesz::sample(mu, static_cast<std::size_t>(d) * n, c.seed);
  const double avg = riesz::walsh_average(u, d, n);
  json spectrum = json::array();
  for (double a : parse_grid(c.grid, "-1:1:21")) spectrum.push_back({a, riesz::walsh_spectrum(d, a)});
  const json summary = {{"d", d}, {"b", b}, {"n", n}, {"seed", c.seed}, {"average", avg}, {"spectrum", spectrum}};
  std::string path;
  path.reserve(u.size() * 3);
  for (auto v : u) path += v > 0 ? "1\n" : "-1\n";
  return {summary.dump(2) + "\n", path};
}

std::string cmd_sample(const Common& c, const std::string& measure, int q, std::size_t n) {
  require(n >= 1, "sample: --n must be >= 1");
  const telescopic::TelescopicMeasure tm(load_measure(c, measure), q);
  const auto path = telescopic::sample(tm, n, c.seed);
  if (c.format == "json")
    return json{{"seed", c.seed}, {"q", q}, {"n", n}, {"symbols", path.symbols}}.dump() + "\n";
  std::string line;
  const bool digits = tm.base.m() <= 10;
  for (std::size_t i = 0; i < path.symbols.size(); ++i) {
    if (!digits && i) line += ' ';
    line += std::to_string(path.symbols[i]);
  }
  return line + "\n";
}

std::pair<std::string, bool> cmd_verify(const Common& c, const std::string& only, int n) {
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.tol = c.tol;
  opt.n = n;
  std::vector<std::string> names = default_checks();
  if (!only.empty()) {
    names.clear();
    std::stringstream ss(only);
    for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
  }
  // Validate every name before running anything.
  const auto known = all_checks();
  for (const auto& name : names)
    require(std::find(known.begin(), known.end(), name) != known.end(), "verify: unknown check '" + name + "'");

  json checks = json::array();
  bool all = true;
  for (const auto& name : names) {
    const auto r = run_check(name, opt);
    all = all && r.passed;
    checks.push_back(r.to_json());
  }
  if (c.format == "csv") {
    std::string out = "name,passed,statistic,bound\n";
    for (const auto& r : checks)
      out += r["name"].get<std::string>() + "," + (r["passed"].get<bool>() ? "true" : "false") + "," +
             num(r["statistic"].get<double>()) + "," + num(r["bound"].get<double>()) + "\n";
    return {out, all};
  }
  return {json{{"passed", all}, {"checks", checks}}.dump(2) + "\n", all};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multifractal spectra of multiple ergodic averages"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common spectrum_c, dims_c, walk_c, riesz_c, sample_c, verify_c;
  std::string spectrum_builtin = "phi2";

  auto* spectrum = app.add_subcommand("spectrum", "pressure and spectrum curve (s, P, dP, alpha, dim)");
  add_common(spectrum, spectrum_c, "csv");
  spectrum->add_option("--builtin", spectrum_builtin, "phi1, phi2 or phi3 when no --config is given");

  std::string dims_builtin = "golden", semigroup;
  int q = 2;
  auto* dims = app.add_subcommand("dims", "Hausdorff and box dimensions of a multiplicative set");
  add_common(dims, dims_c, "json");
  dims->add_option("--builtin", dims_builtin, "golden, forbid111, point or fullM when no --config is given");
  dims->add_option("--q", q, "multiplicative base")->check(CLI::Range(2, 1 << 20));
  dims->add_option("--semigroup", semigroup, "comma-separated primes, e.g. 2,3");

  std::string system, alpha, s_vec;
  std::size_t trajectory_n = 0;
  auto* walk = app.add_subcommand("walk", "oriented-walk spectrum or trajectory");
  add_common(walk, walk_c, "csv");
  walk->add_option("--system", system, "walk JSON file, case1 or case2");
  walk->add_option("--alpha", alpha, "comma-separated alpha");
  walk->add_option("--trajectory", trajectory_n, "sample a path of this length from the evolution measure");
  walk->add_option("--s", s_vec, "comma-separated s for --trajectory");

  int d = 2;
  double b = 0.0;
  std::size_t riesz_n = 100000;
  auto* rz = app.add_subcommand("riesz", "sample a Walsh Riesz product and report the empirical average");
  add_common(rz, riesz_c, "json");
  rz->add_option("--d", d, "arity")->check(CLI::Range(1, 64));
  rz->add_option("--b", b, "coefficient in [-1, 1]")->check(CLI::Range(-1.0, 1.0));
  rz->add_option("--n", riesz_n, "number of averaged terms");

  std::string measure = "uniform";
  int sample_q = 2;
  std::size_t sample_n = 100;
  auto* smp = app.add_subcommand("sample", "draw a path from a telescopic product measure");
  add_common(smp, sample_c, "csv");
  smp->add_option("--measure", measure, "uniform[:m], bernoulli:p0,p1,..., phi1:s or phi2:s");
  smp->add_option("--q", sample_q, "multiplicative base")->check(CLI::Range(2, 1 << 20));
  smp->add_option("--n", sample_n, "path length");

  std::string only;
  int verify_n = 24;
  auto* verify = app.add_subcommand("verify", "run the cross-check suite");
  add_common(verify, verify_c, "json");
  verify->add_option("--only", only, "comma-separated check names");
  verify->add_option("--n", verify_n, "horizon for counting checks")->check(CLI::Range(1, 24));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (spectrum->parsed()) {
      emit(spectrum_c.out, cmd_spectrum(spectrum_c, spectrum_builtin), out);
    } else if (dims->parsed()) {
      emit(dims_c.out, cmd_dims(dims_c, dims_builtin, q, semigroup), out);
    } else if (walk->parsed()) {
      emit(walk_c.out, cmd_walk(walk_c, system, alpha, s_vec, trajectory_n), out);
    } else if (rz->parsed()) {
      const auto r = cmd_riesz(riesz_c, d, b, riesz_n);
      if (!riesz_c.out.empty()) emit(riesz_c.out, r.path, out);
      out << r.summary;
    } else if (smp->parsed()) {
      emit(sample_c.out, cmd_sample(sample_c, measure, sample_q, sample_n), out);
    } else if (verify->parsed()) {
      const auto [report, passed] = cmd_verify(verify_c, only, verify_n);
      emit(verify_c.out, report, out);
      return passed ? kExitOk : kExitVerify;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace mfa::cli

// Copyright 2026 The awe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "awe/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "awe/adapted_ot.hpp"
#include "awe/bounds.hpp"
#include "awe/csv.hpp"
#include "awe/error.hpp"
#include "awe/format.hpp"
#include "awe/mixing.hpp"
#include "awe/rng.hpp"

namespace awe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t tag, std::size_t lag, std::size_t n, std::size_t rep) {
  std::uint64_t h = splitmix(tag);
  h = splitmix(h ^ lag);
  h = splitmix(h ^ n);
  return splitmix(h ^ rep);
}

constexpr std::uint64_t kRateTag = 1;
constexpr std::uint64_t kConcentrationTag = 2;
constexpr std::uint64_t kConsistencyTag = 3;
constexpr std::uint64_t kSmoothingTag = 4;
constexpr std::uint64_t kBddTag = 5;

// ---------------------------------------------------------------------------
// Config parsing.

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
  const double x = parse_number(v);
  if (!(x >= 0.0) || x != std::floor(x) || x > 1e15) {
    throw IoError("config: '" + key + "' must be a nonnegative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(x);
}

std::vector<std::size_t> parse_counts(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(v)) out.push_back(parse_count(key, item));
  return out;
}

std::vector<double> parse_reals(const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_number(item));
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw IoError("config: '" + key + "' must be true or false, got '" + v + "'");
}

// ---------------------------------------------------------------------------
// Statistics.

struct Moments {
  double mean = 0.0;
  double std_err = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  std::size_t count = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    m.mean += x;
    ++m.count;
  }
  if (m.count == 0) {
    m.mean = kNaN;
    return m;
  }
  m.mean /= static_cast<double>(m.count);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    const double d = x - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(m.count);
  if (m.count > 1) {
    m.sd = std::sqrt(m2 / (n - 1.0));
    m.std_err = m.sd / std::sqrt(n);
  }
  const double pop2 = m2 / n;
  m.skewness = pop2 > 0.0 ? (m3 / n) / std::pow(pop2, 1.5) : 0.0;
  return m;
}

std::vector<double> finite_sorted(const std::vector<double>& xs) {
  std::vector<double> v;
  for (double x : xs) {
    if (!std::isnan(x)) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

// Nearest-rank percentile.
double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return kNaN;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

double binomial_slack(double p, std::size_t m) {
  const double mm = static_cast<double>(std::max<std::size_t>(m, 1));
  const double q = std::clamp(p, 1.0 / mm, 1.0);
  return 3.0 * std::sqrt(q * (1.0 - q) / mm);
}

double support_diameter(const DiscretePathMeasure& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.path(i).size(); ++k) {
        const double d = m.path(i)[k] - m.path(j)[k];
        s += d * d;
      }
      best = std::max(best, std::sqrt(s));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Process plumbing.

std::vector<double> markov_kernel(const ExperimentConfig& c) {
  if (c.kind == ProcessKind::kBernoulli) return {1.0 - c.p, c.p, 1.0 - c.p, c.p};
  return c.transition;
}

std::vector<double> markov_values(const ExperimentConfig& c) {
  if (c.kind == ProcessKind::kBernoulli) return {0.0, 1.0};
  return c.states;
}

FiniteMarkovChain as_chain(const ExperimentConfig& c) {
  FiniteMarkovChain chain;
  chain.states = markov_values(c).size();
  chain.transition = markov_kernel(c);
  return chain;
}

// Dobrushin coefficient: max_{i,j} TV(K(i,.), K(j,.)).
double dobrushin(const FiniteMarkovChain& chain) {
  double best = 0.0;
  for (std::size_t i = 0; i < chain.states; ++i) {
    for (std::size_t j = i + 1; j < chain.states; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < chain.states; ++k) s += std::abs(chain.k(i, k) - chain.k(j, k));
      best = std::max(best, 0.5 * s);
    }
  }
  return best;
}

std::vector<double> markov_series(const ExperimentConfig& c, std::size_t length,
                                  std::uint64_t key) {
  const FiniteMarkovChain chain = as_chain(c);
  const auto pi = stationary_distribution(chain);
  const auto values = markov_values(c);
  const CounterRng rng(c.seed, key);
  auto draw = [&](const double* w, double u) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < chain.states; ++k) {
      acc += w[k];
      if (u < acc) return k;
    }
    return chain.states - 1;
  };
  std::vector<double> out(length);
  std::size_t state = draw(pi.data(), rng.uniforms(0)[0]);
  for (std::size_t n = 0; n < length; ++n) {
    if (n > 0) state = draw(chain.transition.data() + state * chain.states, rng.uniforms(n)[0]);
    out[n] = values[state];
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG helpers.

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string svg_num(double x) { return format_number(x, 6); }

struct Frame {
  double width = 640;
  double height = 420;
  double left = 70;
  double right = 150;
  double top = 30;
  double bottom = 55;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void svg_open(std::ostream& out, const Frame& f, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(f.width)
      << "\" height=\"" << svg_num(f.height) << "\" viewBox=\"0 0 " << svg_num(f.width) << ' '
      << svg_num(f.height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << svg_num(f.width) << "\" height=\""
      << svg_num(f.height) << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << svg_num(f.width / 2) << "\" y=\"18\" text-anchor=\"middle\">" << title
      << "</text>\n";
  out << "<rect x=\"" << svg_num(f.left) << "\" y=\"" << svg_num(f.top) << "\" width=\""
      << svg_num(f.width - f.left - f.right) << "\" height=\""
      << svg_num(f.height - f.top - f.bottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
}

void svg_xtick(std::ostream& out, const Frame& f, double pos, const std::string& label) {
  const double x = f.px(pos);
  const double y = f.height - f.bottom;
  out << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(y) << "\" x2=\"" << svg_num(x)
      << "\" y2=\"" << svg_num(y + 5) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(y + 18)
      << "\" text-anchor=\"middle\">" << label << "</text>\n";
}

void svg_ytick(std::ostream& out, const Frame& f, double pos, const std::string& label) {
  const double y = f.py(pos);
  out << "<line x1=\"" << svg_num(f.left - 5) << "\" y1=\"" << svg_num(y) << "\" x2=\""
      << svg_num(f.left) << "\" y2=\"" << svg_num(y) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << svg_num(f.left - 8) << "\" y=\"" << svg_num(y + 4)
      << "\" text-anchor=\"end\">" << label << "</text>\n";
}

void svg_labels(std::ostream& out, const Frame& f, const std::string& xlabel,
                const std::string& ylabel) {
  out << "<text x=\"" << svg_num((f.left + f.width - f.right) / 2) << "\" y=\""
      << svg_num(f.height - 12) << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << svg_num((f.top + f.height - f.bottom) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << svg_num((f.top + f.height - f.bottom) / 2) << ")\">" << ylabel << "</text>\n";
}

void svg_legend(std::ostream& out, const Frame& f, std::size_t k, const std::string& color,
                const std::string& label, bool dashed) {
  const double x = f.width - f.right + 12;
  const double y = f.top + 14 + 18 * static_cast<double>(k);
  out << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(y) << "\" x2=\"" << svg_num(x + 24)
      << "\" y2=\"" << svg_num(y) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
      << (dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
  out << "<text x=\"" << svg_num(x + 30) << "\" y=\"" << svg_num(y + 4) << "\">" << label
      << "</text>\n";
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void finish(std::ofstream& out, const std::string& file, std::vector<std::string>& files) {
  out.flush();
  if (!out) throw IoError("write failed for '" + file + "'");
  files.push_back(file);
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  require(replications >= 1, "config: replications must be >= 1");
  require(!n_grid.empty(), "config: N grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    require(n_grid[i] >= 1, "config: N values must be >= 1");
    if (i > 0) require(n_grid[i] > n_grid[i - 1], "config: N grid must be strictly increasing");
  }
  require(!lags.empty(), "config: at least one lag D is required");
  for (std::size_t d : lags) require(d >= 1, "config: lags must be >= 1");
  require(bins >= 1, "config: bins must be >= 1");
  require(concentration_n >= 1 && concentration_replications >= 2,
          "config: concentration needs N >= 1 and at least 2 replications");
  require(noise_samples >= 1, "config: noise_samples must be >= 1");
  require(bdd_n >= 1 && bdd_replications >= 1, "config: bdd_n and bdd_replications must be >= 1");
  switch (kind) {
    case ProcessKind::kMemory:
      require(rho >= 0.0 && rho < 1.0, "config: memory chain needs rho in [0, 1)");
      break;
    case ProcessKind::kSeasonal:
      require(rho >= 0.0 && theta >= 0.0 && rho + theta < 1.0,
              "config: seasonal chain needs rho, theta >= 0, rho + theta < 1");
      require(tau >= 1, "config: tau must be >= 1");
      break;
    case ProcessKind::kMarkov: {
      require(!states.empty(), "config: markov process needs states");
      FiniteMarkovChain chain;
      chain.states = states.size();
      chain.transition = transition;
      chain.validate();
      break;
    }
    case ProcessKind::kBernoulli:
      require(p >= 0.0 && p <= 1.0, "config: bernoulli p must lie in [0, 1]");
      break;
  }
  for (const auto& e : experiments) {
    require(e == "rate" || e == "concentration" || e == "consistency" || e == "bdd",
            "config: unknown experiment '" + e + "'");
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto where = [&]() { return "config line " + std::to_string(lineno) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw IoError(where() + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "process" && section != "grid" && section != "output") {
        throw IoError(where() + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(where() + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    const std::string qualified = section + "." + key;
    if (qualified == "process.kind") {
      if (v == "memory") {
        c.kind = ProcessKind::kMemory;
      } else if (v == "seasonal") {
        c.kind = ProcessKind::kSeasonal;
      } else if (v == "markov") {
        c.kind = ProcessKind::kMarkov;
      } else if (v == "bernoulli") {
        c.kind = ProcessKind::kBernoulli;
      } else {
        throw IoError(where() + "unknown process kind '" + v + "'");
      }
    } else if (qualified == "process.rho") {
      c.rho = parse_number(v);
    } else if (qualified == "process.lags" || qualified == "process.lag") {
      c.lags = parse_counts(key, v);
    } else if (qualified == "process.theta") {
      c.theta = parse_number(v);
    } else if (qualified == "process.tau") {
      c.tau = parse_count(key, v);
    } else if (qualified == "process.states") {
      c.states = parse_reals(v);
    } else if (qualified == "process.transition") {
      c.transition = parse_reals(v);
    } else if (qualified == "process.p") {
      c.p = parse_number(v);
    } else if (qualified == "grid.n") {
      c.n_grid = parse_counts(key, v);
    } else if (qualified == "grid.replications") {
      c.replications = parse_count(key, v);
    } else if (qualified == "grid.seed") {
      c.seed = parse_count(key, v);
    } else if (qualified == "grid.concentration_n") {
      c.concentration_n = parse_count(key, v);
    } else if (qualified == "grid.concentration_replications") {
      c.concentration_replications = parse_count(key, v);
    } else if (qualified == "grid.bins") {
      c.bins = parse_count(key, v);
    } else if (qualified == "grid.noise_samples") {
      c.noise_samples = parse_count(key, v);
    } else if (qualified == "grid.bdd_n") {
      c.bdd_n = parse_count(key, v);
    } else if (qualified == "grid.bdd_replications") {
      c.bdd_replications = parse_count(key, v);
    } else if (qualified == "output.dir") {
      c.out_dir = v;
    } else if (qualified == "output.calibrate") {
      c.calibrate = parse_bool(key, v);
    } else if (qualified == "output.experiments") {
      c.experiments = split_list(v);
    } else {
      throw IoError(where() + "unknown key '" + key + "'" +
                    (section.empty() ? " outside any section" : " in [" + section + "]"));
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config '" + file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

DiscretePathMeasure reference_law(const ExperimentConfig& config, std::size_t lag) {
  (void)lag;
  switch (config.kind) {
    case ProcessKind::kMemory:
      return exact_law_memory_chain(config.rho);
    case ProcessKind::kSeasonal:
      throw PreconditionError("the seasonal chain has no closed-form slice law");
    case ProcessKind::kMarkov:
    case ProcessKind::kBernoulli: {
      const FiniteMarkovChain chain = as_chain(config);
      const auto pi = stationary_distribution(chain);
      const auto values = markov_values(config);
      std::vector<double> paths;
      std::vector<double> weights;
      for (std::size_t i = 0; i < chain.states; ++i) {
        for (std::size_t j = 0; j < chain.states; ++j) {
          paths.push_back(values[i]);
          paths.push_back(values[j]);
          weights.push_back(pi[i] * chain.k(i, j));
        }
      }
      double total = 0.0;
      for (double w : weights) total += w;
      for (double& w : weights) w /= total;
      return DiscretePathMeasure(2, 1, std::move(paths), std::move(weights));
    }
  }
  throw PreconditionError("unknown process kind");
}

PathSample simulate_slices(const ExperimentConfig& config, std::size_t lag, std::size_t n,
                           std::uint64_t key) {
  switch (config.kind) {
    case ProcessKind::kMemory:
      return simulate_memory_chain(MemoryChainParams{config.rho, lag}, n, config.seed, key);
    case ProcessKind::kSeasonal:
      return simulate_seasonal(SeasonalParams{config.rho, config.theta, config.tau}, n,
                               config.seed, key);
    case ProcessKind::kMarkov:
    case ProcessKind::kBernoulli: {
      const auto x = markov_series(config, lag * (n - 1) + 2, key);
      return slice_series(x, 1, 2, lag);
    }
  }
  throw PreconditionError("unknown process kind");
}

namespace {

// Closed-form eta(s) bound for slices at the given stride.
double eta_term(const ExperimentConfig& config, std::size_t lag, std::size_t s) {
  switch (config.kind) {
    case ProcessKind::kMemory:
      return eta_bound_memory_chain(config.rho, lag, s);
    case ProcessKind::kSeasonal: {
      const double e = static_cast<double>(config.tau * s) - 1.0;
      return std::min(1.0, 2.0 * std::pow(config.rho + config.theta, e));
    }
    case ProcessKind::kMarkov:
    case ProcessKind::kBernoulli: {
      const double e = static_cast<double>(lag * s) - 1.0;
      return std::min(1.0, std::pow(dobrushin(as_chain(config)), e));
    }
  }
  return 1.0;
}

}  // namespace

double eta_sum_bound(const ExperimentConfig& config, std::size_t lag, std::size_t n) {
  double acc = 1.0;
  for (std::size_t s = 1; s < n; ++s) {
    const double e = eta_term(config, lag, s);
    acc += 2.0 * e;
    if (e < 1e-18) break;
  }
  return acc;
}

double eta_bar_sum_bound(const ExperimentConfig& config, std::size_t lag, std::size_t n) {
  double acc = 1.0;
  for (std::size_t s = 1; s < n; ++s) {
    const double e = eta_term(config, lag, s);
    acc += e;
    if (e < 1e-18) break;
  }
  return acc;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& f) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need at least two points");
  double mx = 0.0;
  double my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

// One AW replication against the reference law.
RunRecord replicate(const ExperimentConfig& config, const DiscretePathMeasure& reference,
                    std::size_t lag, std::size_t n, std::size_t rep, std::uint64_t tag) {
  RunRecord r;
  r.lag = lag;
  r.n = n;
  r.replication = rep;
  const auto start = std::chrono::steady_clock::now();
  try {
    const PathSample sample = simulate_slices(config, lag, n, stream_key(tag, lag, n, rep));
    r.aw_value = estimate_aw(sample, reference);
  } catch (const Error& e) {
    r.aw_value = kNaN;
    r.error = e.what();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

RateResult run_rate_experiment(const ExperimentConfig& config) {
  config.validate();
  RateResult out;
  out.lags = config.lags;
  const std::size_t m = config.replications;
  for (std::size_t lag : config.lags) {
    const DiscretePathMeasure reference = reference_law(config, lag);
    std::vector<double> means;
    std::vector<double> xs;
    std::vector<double> ns;
    const std::size_t first_row = out.rows.size();
    for (std::size_t n : config.n_grid) {
      std::vector<RunRecord> runs(m);
      parallel_for(m, config.threads, [&](std::size_t rep) {
        runs[rep] = replicate(config, reference, lag, n, rep, kRateTag);
      });
      std::vector<double> values;
      RateRow row;
      row.lag = lag;
      row.n = n;
      for (const auto& r : runs) {
        values.push_back(r.aw_value);
        if (std::isnan(r.aw_value)) ++row.failures;
      }
      const Moments mo = moments(values);
      row.mean = mo.mean;
      row.std_err = mo.std_err;
      out.rows.push_back(row);
      out.runs.insert(out.runs.end(), runs.begin(), runs.end());
      means.push_back(row.mean);
      ns.push_back(static_cast<double>(n));
      xs.push_back(std::sqrt(eta_sum_bound(config, lag, n)) *
                   rate_inf(static_cast<double>(n), reference.dim(), reference.horizon()));
    }
    // C fitted by least squares on the two smallest N.
    double c = 1.0;
    if (config.calibrate) {
      double sxy = 0.0;
      double sxx = 0.0;
      for (std::size_t i = 0; i < std::min<std::size_t>(2, xs.size()); ++i) {
        if (std::isnan(means[i])) continue;
        sxy += xs[i] * means[i];
        sxx += xs[i] * xs[i];
      }
      c = sxx > 0.0 ? sxy / sxx : kNaN;
    }
    out.calibrated_c.push_back(c);
    for (std::size_t i = 0; i < xs.size(); ++i) out.rows[first_row + i].bound = c * xs[i];
    bool decreasing = true;
    for (std::size_t i = 1; i < means.size(); ++i) {
      if (!(means[i] < means[i - 1])) decreasing = false;
    }
    out.decreasing.push_back(decreasing);
    bool positive = means.size() >= 2;
    for (double v : means) positive = positive && v > 0.0;
    out.slope.push_back(positive ? loglog_slope(ns, means) : kNaN);
  }
  return out;
}

ConcentrationResult run_concentration_experiment(const ExperimentConfig& config) {
  config.validate();
  ConcentrationResult out;
  const std::size_t n = config.concentration_n;
  const std::size_t m = config.concentration_replications;
  const std::size_t fit_count = m / 2;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double max_dev = 0.0;
  for (std::size_t lag : config.lags) {
    const DiscretePathMeasure reference = reference_law(config, lag);
    out.diameter = support_diameter(reference);
    std::vector<RunRecord> runs(m);
    parallel_for(m, config.threads, [&](std::size_t rep) {
      runs[rep] = replicate(config, reference, lag, n, rep, kConcentrationTag);
    });
    HistogramTable h;
    h.lag = lag;
    h.n = n;
    for (const auto& r : runs) {
      h.values.push_back(r.aw_value);
      if (std::isnan(r.aw_value)) ++h.failures;
    }
    const Moments mo = moments(h.values);
    h.mean = mo.mean;
    h.std_err = mo.std_err;
    h.skewness = mo.skewness;
    const auto sorted = finite_sorted(h.values);
    h.p95 = percentile(sorted, 0.95);
    h.eta_bar_sum = eta_bar_sum_bound(config, lag, n);
    if (!sorted.empty()) {
      lo = std::min(lo, sorted.front());
      hi = std::max(hi, sorted.back());
      max_dev = std::max({max_dev, std::abs(sorted.front() - h.mean),
                          std::abs(sorted.back() - h.mean)});
    }
    out.per_lag.push_back(std::move(h));
  }
  // Shared histogram edges.
  if (!(hi > lo)) {
    lo = std::isfinite(lo) ? lo - 0.5 : 0.0;
    hi = lo + 1.0;
  }
  const std::size_t bins = config.bins;
  for (auto& h : out.per_lag) {
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
      h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    }
    h.counts.assign(bins, 0);
    for (double v : h.values) {
      if (std::isnan(v)) continue;
      auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      h.counts[std::min(b, bins - 1)] += 1;
    }
  }
  // Deviation grid: ten pooled levels plus two standard deviations per lag.
  const std::size_t levels = 10;
  auto tail = [](const std::vector<double>& v, std::size_t begin, std::size_t end, double mean,
                 double eps) {
    std::size_t hits = 0;
    std::size_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (std::isnan(v[i])) continue;
      ++count;
      if (std::abs(v[i] - mean) > eps) ++hits;
    }
    return count ? static_cast<double>(hits) / static_cast<double>(count) : 0.0;
  };
  const double diam = out.diameter > 0.0 ? out.diameter : 1.0;
  double c = std::numeric_limits<double>::infinity();
  for (auto& h : out.per_lag) {
    std::vector<double> grid;
    for (std::size_t k = 1; k <= levels; ++k) {
      grid.push_back(max_dev * static_cast<double>(k) / static_cast<double>(levels));
    }
    const double sd = h.std_err * std::sqrt(static_cast<double>(m - h.failures));
    grid.push_back(2.0 * sd);
    std::sort(grid.begin(), grid.end());
    for (double eps : grid) {
      if (!(eps > 0.0)) continue;
      TailPoint tp;
      tp.eps = eps;
      tp.tail_fit = tail(h.values, 0, fit_count, h.mean, eps);
      tp.tail_test = tail(h.values, fit_count, m, h.mean, eps);
      h.tails.push_back(tp);
      if (tp.tail_fit > 0.0) {
        const double scale = diam * diam * h.eta_bar_sum * h.eta_bar_sum /
                             (static_cast<double>(n) * eps * eps);
        c = std::min(c, -std::log(tp.tail_fit / 2.0) * scale);
      }
    }
  }
  if (!config.calibrate || !std::isfinite(c)) c = 1.0;
  out.calibrated_c = c;
  for (auto& h : out.per_lag) {
    for (auto& tp : h.tails) {
      tp.bound = concentration_bound_compact(static_cast<double>(n), tp.eps, diam, h.eta_bar_sum, c);
      tp.slack = binomial_slack(tp.bound, m - fit_count);
      tp.holds = tp.tail_test <= tp.bound + tp.slack;
      out.tails_hold = out.tails_hold && tp.holds;
    }
  }
  return out;
}

ConsistencyResult run_consistency_experiment(const ExperimentConfig& config) {
  config.validate();
  ConsistencyResult out;
  const std::size_t lag = config.lags.front();
  out.lag = lag;
  const DiscretePathMeasure reference = reference_law(config, lag);
  const std::size_t m = config.replications;
  for (std::size_t n : config.n_grid) {
    std::vector<double> plain(m);
    std::vector<double> smooth(m);
    parallel_for(m, config.threads, [&](std::size_t rep) {
      try {
        const PathSample sample =
            simulate_slices(config, lag, n, stream_key(kConsistencyTag, lag, n, rep));
        plain[rep] = estimate_aw(sample, reference);
        const auto smoothed = smoothed_adapted_estimator(
            sample, config.noise_samples, stream_key(kSmoothingTag, lag, n, rep) ^ config.seed);
        smooth[rep] = aw_distance(reference, smoothed).cost;
      } catch (const Error&) {
        plain[rep] = kNaN;
        smooth[rep] = kNaN;
      }
    });
    ConsistencyRow row;
    row.n = n;
    row.sigma = smoothing_sigma(n, reference.dim(), reference.horizon());
    const Moments a = moments(plain);
    const Moments b = moments(smooth);
    row.mean_plain = a.mean;
    row.se_plain = a.std_err;
    row.mean_smoothed = b.mean;
    row.se_smoothed = b.std_err;
    out.rows.push_back(row);
  }
  out.halves = out.rows.size() >= 2 &&
               out.rows.back().mean_plain <= 0.5 * out.rows.front().mean_plain;
  return out;
}

BddReport run_bdd_check(const ExperimentConfig& config) {
  config.validate();
  BddReport out;
  const std::size_t n = config.bdd_n;
  const std::size_t m = config.bdd_replications;
  out.n = n;
  double expected = 0.0;
  double range = 0.0;
  double contraction = 0.0;
  std::function<std::vector<double>(std::uint64_t)> series;
  switch (config.kind) {
    case ProcessKind::kMemory:
      // Kernel rho I + (1 - rho) U has Dobrushin coefficient rho.
      expected = 0.0;
      range = 2.0;
      contraction = config.rho;
      series = [&](std::uint64_t key) {
        auto x = memory_chain_series(MemoryChainParams{config.rho, 1}, n + 1, config.seed, key);
        x.erase(x.begin());
        return x;
      };
      break;
    case ProcessKind::kMarkov:
    case ProcessKind::kBernoulli: {
      const FiniteMarkovChain chain = as_chain(config);
      const auto pi = stationary_distribution(chain);
      const auto values = markov_values(config);
      for (std::size_t i = 0; i < values.size(); ++i) expected += pi[i] * values[i];
      range = *std::max_element(values.begin(), values.end()) -
              *std::min_element(values.begin(), values.end());
      contraction = dobrushin(chain);
      series = [&](std::uint64_t key) { return markov_series(config, n, key); };
      break;
    }
    case ProcessKind::kSeasonal:
      throw PreconditionError("bdd check supports memory, markov and bernoulli processes");
  }
  out.lipschitz = range > 0.0 ? range / static_cast<double>(n) : 1.0 / static_cast<double>(n);
  out.eta_bar_sum = 1.0;
  for (std::size_t s = 1; s < n; ++s) {
    const double e = std::pow(contraction, static_cast<double>(s));
    out.eta_bar_sum += e;
    if (e < 1e-18) break;
  }
  std::vector<double> dev(m);
  parallel_for(m, config.threads, [&](std::size_t rep) {
    const auto x = series(stream_key(kBddTag, 0, n, rep));
    double s = 0.0;
    for (double v : x) s += v;
    dev[rep] = std::abs(s / static_cast<double>(n) - expected);
  });
  double sd = 0.0;
  for (double d : dev) sd += d * d;
  sd = std::sqrt(sd / static_cast<double>(m));
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= 8; ++k) {
    BddPoint p;
    // Deviations below 1e-9 L are rounding noise in the stationary mean.
    p.eps = sd > 1e-9 * out.lipschitz ? 0.5 * static_cast<double>(k) * sd
                                      : out.lipschitz * static_cast<double>(k);
    std::size_t hits = 0;
    for (double d : dev) hits += d > p.eps ? 1 : 0;
    p.tail = static_cast<double>(hits) / static_cast<double>(m);
    p.bound = bdd_bound(static_cast<double>(n), out.lipschitz, p.eps, out.eta_bar_sum);
    p.slack = binomial_slack(p.bound, m);
    p.violation = p.tail - p.bound - p.slack;
    out.max_violation = std::max(out.max_violation, p.violation);
    out.points.push_back(p);
  }
  out.holds = out.max_violation <= 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Output.

void emit_rate(const std::string& dir, const RateResult& r, std::vector<std::string>& files) {
  {
    const std::string file = join_path(dir, "rate.csv");
    auto out = open_output(file);
    out << "D,N,mean_aw,std_err,bound,failures\n";
    for (const auto& row : r.rows) {
      out << row.lag << ',' << row.n << ',' << format_number(row.mean) << ','
          << format_number(row.std_err) << ',' << format_number(row.bound) << ',' << row.failures
          << '\n';
    }
    finish(out, file, files);
  }
  {
    const std::string file = join_path(dir, "runs.csv");
    auto out = open_output(file);
    out << "D,N,replication,aw\n";
    for (const auto& run : r.runs) {
      out << run.lag << ',' << run.n << ',' << run.replication << ','
          << (std::isnan(run.aw_value) ? std::string("nan") : format_number(run.aw_value))
          << '\n';
    }
    finish(out, file, files);
  }
  const std::string file = join_path(dir, "rate.svg");
  auto out = open_output(file);
  Frame f;
  double nmin = std::numeric_limits<double>::infinity();
  double nmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = 0.0;
  for (const auto& row : r.rows) {
    nmin = std::min(nmin, static_cast<double>(row.n));
    nmax = std::max(nmax, static_cast<double>(row.n));
    for (double v : {row.mean, row.bound}) {
      if (v > 0.0 && std::isfinite(v)) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  }
  if (!(ymax > 0.0)) {
    ymin = 0.1;
    ymax = 1.0;
  }
  f.x0 = std::log10(nmin) - 0.05;
  f.x1 = std::log10(nmax) + 0.05;
  if (f.x1 - f.x0 < 0.2) {
    f.x0 -= 0.1;
    f.x1 += 0.1;
  }
  f.y0 = std::log10(ymin) - 0.1;
  f.y1 = std::log10(ymax) + 0.1;
  svg_open(out, f, "Mean adapted Wasserstein error vs N (log-log)");
  std::vector<std::size_t> ns;
  for (const auto& row : r.rows) {
    if (std::find(ns.begin(), ns.end(), row.n) == ns.end()) ns.push_back(row.n);
  }
  for (std::size_t n : ns) svg_xtick(out, f, std::log10(static_cast<double>(n)), std::to_string(n));
  for (int e = static_cast<int>(std::floor(f.y0)); e <= static_cast<int>(std::ceil(f.y1)); ++e) {
    for (double mant : {1.0, 2.0, 5.0}) {
      const double v = std::log10(mant) + e;
      if (v >= f.y0 && v <= f.y1) svg_ytick(out, f, v, format_number(mant * std::pow(10.0, e), 3));
    }
  }
  svg_labels(out, f, "N", "E AW");
  std::size_t legend = 0;
  for (std::size_t k = 0; k < r.lags.size(); ++k) {
    const std::string color = kPalette[k % std::size(kPalette)];
    std::ostringstream mean_pts;
    std::ostringstream bound_pts;
    for (const auto& row : r.rows) {
      if (row.lag != r.lags[k]) continue;
      const double x = f.px(std::log10(static_cast<double>(row.n)));
      if (row.mean > 0.0) {
        const double y = f.py(std::log10(row.mean));
        mean_pts << svg_num(x) << ',' << svg_num(y) << ' ';
        out << "<circle cx=\"" << svg_num(x) << "\" cy=\"" << svg_num(y) << "\" r=\"3\" fill=\""
            << color << "\"/>\n";
      }
      if (row.bound > 0.0 && std::isfinite(row.bound)) {
        bound_pts << svg_num(x) << ',' << svg_num(f.py(std::log10(row.bound))) << ' ';
      }
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << mean_pts.str() << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1\" stroke-dasharray=\"5,3\" points=\"" << bound_pts.str()
        << "\"/>\n";
    svg_legend(out, f, legend++, color, "D=" + std::to_string(r.lags[k]), false);
    svg_legend(out, f, legend++, color, "bound D=" + std::to_string(r.lags[k]), true);
  }
  out << "</svg>\n";
  finish(out, file, files);
}

void emit_concentration(const std::string& dir, const ConcentrationResult& r,
                        std::vector<std::string>& files) {
  for (const auto& h : r.per_lag) {
    const std::string file = join_path(dir, "hist_D" + std::to_string(h.lag) + ".csv");
    auto out = open_output(file);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << format_number(h.edges[b]) << ',' << format_number(h.edges[b + 1]) << ','
          << h.counts[b] << '\n';
    }
    finish(out, file, files);
  }
  {
    const std::string file = join_path(dir, "tails.csv");
    auto out = open_output(file);
    out << "D,eps,tail_fit,tail_test,bound,slack,holds\n";
    for (const auto& h : r.per_lag) {
      for (const auto& tp : h.tails) {
        out << h.lag << ',' << format_number(tp.eps) << ',' << format_number(tp.tail_fit) << ','
            << format_number(tp.tail_test) << ',' << format_number(tp.bound) << ','
            << format_number(tp.slack) << ',' << (tp.holds ? 1 : 0) << '\n';
      }
    }
    finish(out, file, files);
  }
  const std::string file = join_path(dir, "hist.svg");
  auto out = open_output(file);
  Frame f;
  if (r.per_lag.empty() || r.per_lag.front().edges.empty()) {
    svg_open(out, f, "Empirical distribution of AW");
    out << "</svg>\n";
    finish(out, file, files);
    return;
  }
  const auto& edges = r.per_lag.front().edges;
  std::size_t cmax = 1;
  for (const auto& h : r.per_lag) {
    for (std::size_t c : h.counts) cmax = std::max(cmax, c);
  }
  f.x0 = edges.front();
  f.x1 = edges.back();
  f.y0 = 0.0;
  f.y1 = static_cast<double>(cmax) * 1.05;
  svg_open(out, f, "Empirical distribution of AW at N=" + std::to_string(r.per_lag.front().n));
  for (std::size_t k = 0; k <= 4; ++k) {
    const double v = f.x0 + (f.x1 - f.x0) * static_cast<double>(k) / 4.0;
    svg_xtick(out, f, v, format_number(v, 3));
  }
  for (std::size_t k = 0; k <= 4; ++k) {
    const double v = static_cast<double>(cmax) * static_cast<double>(k) / 4.0;
    svg_ytick(out, f, v, format_number(std::round(v), 6));
  }
  svg_labels(out, f, "AW", "count");
  for (std::size_t k = 0; k < r.per_lag.size(); ++k) {
    const auto& h = r.per_lag[k];
    const std::string color = kPalette[k % std::size(kPalette)];
    std::ostringstream pts;
    pts << svg_num(f.px(edges.front())) << ',' << svg_num(f.py(0.0)) << ' ';
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const double y = f.py(static_cast<double>(h.counts[b]));
      pts << svg_num(f.px(edges[b])) << ',' << svg_num(y) << ' ' << svg_num(f.px(edges[b + 1]))
          << ',' << svg_num(y) << ' ';
    }
    pts << svg_num(f.px(edges.back())) << ',' << svg_num(f.py(0.0));
    out << "<polyline fill=\"" << color << "\" fill-opacity=\"0.25\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    svg_legend(out, f, k, color, "D=" + std::to_string(h.lag), false);
  }
  out << "</svg>\n";
  finish(out, file, files);
}

ExperimentOutputs run_experiments(const ExperimentConfig& config) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + config.out_dir + "': " + ec.message());
  ExperimentOutputs out;
  auto wants = [&](const std::string& name) {
    return std::find(config.experiments.begin(), config.experiments.end(), name) !=
           config.experiments.end();
  };
  std::ostringstream summary;
  summary << "seed," << config.seed << '\n';
  summary << "replications," << config.replications << '\n';
  if (wants("rate")) {
    out.rate = run_rate_experiment(config);
    out.rate_ran = true;
    emit_rate(config.out_dir, out.rate, out.files);
    for (std::size_t k = 0; k < out.rate.lags.size(); ++k) {
      summary << "rate.D" << out.rate.lags[k] << ".C," << format_number(out.rate.calibrated_c[k])
              << '\n';
      summary << "rate.D" << out.rate.lags[k] << ".slope," << format_number(out.rate.slope[k])
              << '\n';
      summary << "rate.D" << out.rate.lags[k] << ".decreasing,"
              << (out.rate.decreasing[k] ? "yes" : "no") << '\n';
    }
  }
  if (wants("concentration")) {
    out.concentration = run_concentration_experiment(config);
    out.concentration_ran = true;
    emit_concentration(config.out_dir, out.concentration, out.files);
    summary << "concentration.N," << config.concentration_n << '\n';
    summary << "concentration.c," << format_number(out.concentration.calibrated_c) << '\n';
    for (const auto& h : out.concentration.per_lag) {
      const std::string key = "concentration.D" + std::to_string(h.lag);
      summary << key << ".mean," << format_number(h.mean) << '\n';
      summary << key << ".std_err," << format_number(h.std_err) << '\n';
      summary << key << ".skewness," << format_number(h.skewness) << '\n';
      summary << key << ".p95," << format_number(h.p95) << '\n';
      summary << key << ".eta_bar_sum," << format_number(h.eta_bar_sum) << '\n';
    }
    summary << "concentration.tails_hold," << (out.concentration.tails_hold ? "yes" : "no")
            << '\n';
  }
  if (wants("consistency")) {
    out.consistency = run_consistency_experiment(config);
    out.consistency_ran = true;
    const std::string file = join_path(config.out_dir, "consistency.csv");
    auto csv = open_output(file);
    csv << "N,sigma,mean_aw,std_err,mean_aw_smoothed,std_err_smoothed\n";
    for (const auto& row : out.consistency.rows) {
      csv << row.n << ',' << format_number(row.sigma) << ',' << format_number(row.mean_plain)
          << ',' << format_number(row.se_plain) << ',' << format_number(row.mean_smoothed) << ','
          << format_number(row.se_smoothed) << '\n';
    }
    finish(csv, file, out.files);
    summary << "consistency.halves," << (out.consistency.halves ? "yes" : "no") << '\n';
  }
  if (wants("bdd")) {
    out.bdd = run_bdd_check(config);
    out.bdd_ran = true;
    const std::string file = join_path(config.out_dir, "bdd.csv");
    auto csv = open_output(file);
    csv << "eps,tail,bound,slack,violation\n";
    for (const auto& p : out.bdd.points) {
      csv << format_number(p.eps) << ',' << format_number(p.tail) << ','
          << format_number(p.bound) << ',' << format_number(p.slack) << ','
          << format_number(p.violation) << '\n';
    }
    finish(csv, file, out.files);
    summary << "bdd.L," << format_number(out.bdd.lipschitz) << '\n';
    summary << "bdd.eta_bar_sum," << format_number(out.bdd.eta_bar_sum) << '\n';
    summary << "bdd.max_violation," << format_number(out.bdd.max_violation) << '\n';
    summary << "bdd.holds," << (out.bdd.holds ? "yes" : "no") << '\n';
  }
  const std::string file = join_path(config.out_dir, "summary.txt");
  auto s = open_output(file);
  s << summary.str();
  finish(s, file, out.files);
  return out;
}

}  // namespace awe

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

#include "awe/adapted_ot.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "awe/error.hpp"
#include "awe/rng.hpp"

namespace awe {

namespace {

double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// One-step problem between the children of node i (level t of mu) and node
// j (level t of nu), or between the roots when t is npos.
double solve_pair(const DiscretePathMeasure& mu, const DiscretePathMeasure& nu,
                  const NestedValueTable& table, std::size_t t, std::size_t i, std::size_t j) {
  constexpr std::size_t kRoot = DiscretePathMeasure::kNone;
  const std::size_t next = t == kRoot ? 0 : t + 1;
  const auto& mu_next = mu.level(next);
  const auto& nu_next = nu.level(next);
  std::vector<std::size_t> a_idx;
  std::vector<std::size_t> b_idx;
  std::vector<double> a;
  std::vector<double> b;
  if (t == kRoot) {
    for (std::size_t k = 0; k < mu_next.size(); ++k) {
      a_idx.push_back(k);
      a.push_back(mu_next[k].mass);
    }
    for (std::size_t k = 0; k < nu_next.size(); ++k) {
      b_idx.push_back(k);
      b.push_back(nu_next[k].mass);
    }
  } else {
    const auto& ni = mu.level(t)[i];
    const auto& nj = nu.level(t)[j];
    for (std::size_t c : ni.children) {
      a_idx.push_back(c);
      a.push_back(mu_next[c].mass / ni.mass);
    }
    for (std::size_t c : nj.children) {
      b_idx.push_back(c);
      b.push_back(nu_next[c].mass / nj.mass);
    }
  }
  auto normalise = [](std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
  };
  normalise(a);
  normalise(b);

  const bool last = next + 1 == mu.horizon();
  if (last && mu.dim() == 1) {
    std::vector<double> pa;
    std::vector<double> pb;
    for (std::size_t c : a_idx) pa.push_back(mu.node_point(next, c)[0]);
    for (std::size_t c : b_idx) pb.push_back(nu.node_point(next, c)[0]);
    return wasserstein1_1d(DiscreteMeasure(1, std::move(pa), std::move(a)),
                           DiscreteMeasure(1, std::move(pb), std::move(b)))
        .cost;
  }
  std::vector<double> cost(a_idx.size() * b_idx.size());
  for (std::size_t p = 0; p < a_idx.size(); ++p) {
    const auto x = mu.node_point(next, a_idx[p]);
    for (std::size_t q = 0; q < b_idx.size(); ++q) {
      double c = distance(x, nu.node_point(next, b_idx[q]));
      if (!last) c += table.at(next, a_idx[p], b_idx[q]);
      cost[p * b_idx.size() + q] = c;
    }
  }
  return solve_transport(a, b, cost).cost;
}

}  // namespace

AwResult aw_distance(const DiscretePathMeasure& mu, const DiscretePathMeasure& nu,
                     const AwOptions& options) {
  if (mu.horizon() != nu.horizon()) throw ShapeMismatch("aw_distance: horizon mismatch");
  if (mu.dim() != nu.dim()) throw ShapeMismatch("aw_distance: dimension mismatch");
  const std::size_t horizon = mu.horizon();
  AwResult out;
  auto& table = out.table;
  table.rows.resize(horizon);
  table.cols.resize(horizon);
  table.values.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    table.rows[t] = mu.level(t).size();
    table.cols[t] = nu.level(t).size();
    table.values[t].assign(table.rows[t] * table.cols[t], 0.0);
  }
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  for (std::size_t t = horizon - 1; t-- > 0;) {
    const std::size_t rows = table.rows[t];
    const std::size_t cols = table.cols[t];
    auto work = [&, t](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          table.values[t][i * cols + j] = solve_pair(mu, nu, table, t, i, j);
        }
      }
    };
    if (threads == 1 || rows < 2) {
      work(0, rows);
    } else {
      const std::size_t n = std::min(threads, rows);
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < n; ++w) {
        pool.emplace_back(work, rows * w / n, rows * (w + 1) / n);
      }
      for (auto& th : pool) th.join();
    }
  }
  out.cost = solve_pair(mu, nu, table, DiscretePathMeasure::kNone, 0, 0);
  if (out.cost < 0.0) out.cost = 0.0;
  return out;
}

LowerBoundCheck aw_lower_bound_check(const DiscretePathMeasure& mu, const DiscretePathMeasure& nu,
                                     double tolerance) {
  if (mu.horizon() != nu.horizon() || mu.dim() != nu.dim()) {
    throw ShapeMismatch("aw_lower_bound_check: shape mismatch");
  }
  LowerBoundCheck out;
  out.aw = aw_distance(mu, nu).cost;
  const std::size_t d = mu.dim();
  std::vector<double> cost(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      double c = 0.0;
      for (std::size_t t = 0; t < mu.horizon(); ++t) {
        c += distance(mu.path(i).subspan(t * d, d), nu.path(j).subspan(t * d, d));
      }
      cost[i * nu.size() + j] = c;
    }
  }
  out.w = solve_transport(mu.weights(), nu.weights(), cost).cost;
  out.holds = out.aw >= out.w - tolerance;
  return out;
}

double estimate_aw(const PathSample& sample, const DiscretePathMeasure& reference,
                   const AwOptions& options) {
  return aw_distance(reference, adapted_empirical_measure(sample), options).cost;
}

std::vector<double> kappa_r(std::span<const double> x, double radius) {
  require(std::isfinite(radius) && radius > 0.0, "kappa_r: radius must be > 0");
  std::vector<double> out(x.begin(), x.end());
  double r = 0.0;
  for (double v : x) r += v * v;
  r = std::sqrt(r);
  if (r <= radius) return out;
  const double g = 2.0 * radius - radius * std::exp(1.0 - r / radius);
  for (double& v : out) v *= g / r;
  return out;
}

DiscretePathMeasure push_forward_kappa(const DiscretePathMeasure& m, double radius) {
  std::vector<double> paths(m.flat_paths().size());
  const std::size_t d = m.dim();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t t = 0; t < m.horizon(); ++t) {
      const auto y = kappa_r(m.path(i).subspan(t * d, d), radius);
      std::copy(y.begin(), y.end(), paths.begin() + static_cast<std::ptrdiff_t>((i * m.horizon() + t) * d));
    }
  }
  return DiscretePathMeasure(m.horizon(), d, std::move(paths), m.weights());
}

double smoothing_sigma(std::size_t n_samples, std::size_t dim, std::size_t horizon) {
  const double delta = grid_resolution(n_samples, dim, horizon);
  return std::max(std::sqrt(delta), std::pow(static_cast<double>(n_samples), -0.125));
}

DiscretePathMeasure smoothed_adapted_estimator(const PathSample& sample,
                                               std::size_t noise_samples_per_atom,
                                               std::uint64_t seed, std::optional<double> sigma) {
  require(noise_samples_per_atom >= 1, "smoothed_adapted_estimator: need >= 1 noise sample");
  const double s =
      sigma ? *sigma : smoothing_sigma(sample.n_paths(), sample.dim(), sample.horizon());
  require(std::isfinite(s) && s >= 0.0, "smoothed_adapted_estimator: sigma must be >= 0");
  const DiscretePathMeasure base = adapted_empirical_measure(sample);
  const std::size_t k = noise_samples_per_atom;
  const std::size_t len = base.horizon() * base.dim();
  std::vector<double> paths;
  std::vector<double> weights;
  paths.reserve(base.size() * k * len);
  weights.reserve(base.size() * k);
  for (std::size_t a = 0; a < base.size(); ++a) {
    RngCursor rng(CounterRng(seed, 0x736d6f6f00000000ULL + a));
    const auto x = base.path(a);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t i = 0; i < len; ++i) paths.push_back(x[i] + s * rng.normal());
      weights.push_back(base.weight(a) / static_cast<double>(k));
    }
  }
  return DiscretePathMeasure(base.horizon(), base.dim(), std::move(paths), std::move(weights));
}

}  // namespace awe

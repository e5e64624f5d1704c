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

// Independent reference computations for tests. Nothing here calls into the
// solvers under test.

#ifndef AWE_TESTS_ORACLES_HPP_
#define AWE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "awe/path_measure.hpp"

namespace oracle {

// Tries the support `cells` (indices into the m x n grid) as a basis and, if
// it is a forest carrying a feasible flow, returns the flow via leaf peeling.
inline bool peel_basis(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<std::size_t>& cells, std::vector<double>& flow) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<double> rr = a;
  std::vector<double> cr = b;
  std::vector<bool> alive(cells.size(), true);
  flow.assign(cells.size(), 0.0);
  std::size_t remaining = cells.size();
  while (remaining > 0) {
    bool progress = false;
    for (std::size_t node = 0; node < m + n && !progress; ++node) {
      std::size_t deg = 0;
      std::size_t last = 0;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        if (!alive[k]) continue;
        const std::size_t i = cells[k] / n;
        const std::size_t j = cells[k] % n;
        if ((node < m && i == node) || (node >= m && j == node - m)) {
          ++deg;
          last = k;
        }
      }
      if (deg != 1) continue;
      const std::size_t i = cells[last] / n;
      const std::size_t j = cells[last] % n;
      const double f = node < m ? rr[i] : cr[j];
      flow[last] = f;
      rr[i] -= f;
      cr[j] -= f;
      alive[last] = false;
      --remaining;
      progress = true;
    }
    if (!progress) return false;
  }
  for (double f : flow) {
    if (f < -1e-12) return false;
  }
  for (double r : rr) {
    if (std::abs(r) > 1e-12) return false;
  }
  for (double c : cr) {
    if (std::abs(c) > 1e-12) return false;
  }
  return true;
}

// Exact transport LP value by enumerating every vertex of the transport
// polytope (all bases of size m + n - 1).
inline double transport_by_vertices(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& cost) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const std::size_t cells = m * n;
  const std::size_t k = m + n - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  std::vector<double> flow;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == k) {
      if (peel_basis(a, b, pick, flow)) {
        double v = 0.0;
        for (std::size_t q = 0; q < pick.size(); ++q) v += flow[q] * cost[pick[q]];
        best = std::min(best, v);
      }
      return;
    }
    for (std::size_t c = start; c + (k - pick.size()) <= cells; ++c) {
      pick.push_back(c);
      rec(c + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

// W1 on the real line as the integral of |F - G|.
inline double w1_cdf(const std::vector<double>& x, const std::vector<double>& wx,
                     const std::vector<double>& y, const std::vector<double>& wy) {
  std::vector<std::pair<double, double>> ev;
  for (std::size_t i = 0; i < x.size(); ++i) ev.emplace_back(x[i], wx[i]);
  for (std::size_t j = 0; j < y.size(); ++j) ev.emplace_back(y[j], -wy[j]);
  std::sort(ev.begin(), ev.end());
  double diff = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
    diff += ev[k].second;
    total += std::abs(diff) * (ev[k + 1].first - ev[k].first);
  }
  return total;
}

inline double euclid(const double* x, const double* y, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

// A path measure held as plain lists.
struct Paths {
  std::size_t horizon = 2;
  std::size_t dim = 1;
  std::vector<std::vector<double>> paths;  // each of size T*d
  std::vector<double> weights;
};

// Conditional law of x_{t+1} given the prefix (t*d values), built by
// scanning the atoms.
inline void conditional(const Paths& p, const std::vector<double>& prefix,
                        std::vector<std::vector<double>>& pts, std::vector<double>& w) {
  const std::size_t d = p.dim;
  const std::size_t t = prefix.size() / d;
  std::map<std::vector<double>, double> acc;
  double mass = 0.0;
  for (std::size_t i = 0; i < p.paths.size(); ++i) {
    if (!std::equal(prefix.begin(), prefix.end(), p.paths[i].begin())) continue;
    std::vector<double> x(p.paths[i].begin() + static_cast<long>(t * d),
                          p.paths[i].begin() + static_cast<long>((t + 1) * d));
    acc[x] += p.weights[i];
    mass += p.weights[i];
  }
  pts.clear();
  w.clear();
  for (const auto& [x, m] : acc) {
    pts.push_back(x);
    w.push_back(m / mass);
  }
}

// AW by plain recursion over prefixes. Inner problems at the last step use
// the CDF formula when d = 1; everything else uses vertex enumeration.
inline double aw_recursive(const Paths& mu, const Paths& nu, const std::vector<double>& px,
                           const std::vector<double>& py) {
  const std::size_t d = mu.dim;
  const std::size_t t = px.size() / d;
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
  std::vector<double> wx;
  std::vector<double> wy;
  conditional(mu, px, xs, wx);
  conditional(nu, py, ys, wy);
  if (t + 1 == mu.horizon && d == 1) {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& x : xs) a.push_back(x[0]);
    for (const auto& y : ys) b.push_back(y[0]);
    return w1_cdf(a, wx, b, wy);
  }
  std::vector<double> cost(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      double c = euclid(xs[i].data(), ys[j].data(), d);
      if (t + 1 < mu.horizon) {
        std::vector<double> nx = px;
        std::vector<double> ny = py;
        nx.insert(nx.end(), xs[i].begin(), xs[i].end());
        ny.insert(ny.end(), ys[j].begin(), ys[j].end());
        c += aw_recursive(mu, nu, nx, ny);
      }
      cost[i * ys.size() + j] = c;
    }
  }
  return transport_by_vertices(wx, wy, cost);
}

inline double aw_recursive(const Paths& mu, const Paths& nu) {
  return aw_recursive(mu, nu, {}, {});
}

inline awe::DiscretePathMeasure to_measure(const Paths& p) {
  std::vector<double> flat;
  for (const auto& path : p.paths) flat.insert(flat.end(), path.begin(), path.end());
  return awe::DiscretePathMeasure(p.horizon, p.dim, flat, p.weights);
}

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (double& x : w) {
    x = u(rng);
    s += x;
  }
  for (double& x : w) x /= s;
  return w;
}

// Distinct values from a coarse lattice so that ties in costs occur.
inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t k, std::size_t d) {
  std::uniform_int_distribution<int> u(-8, 8);
  std::vector<std::vector<double>> out;
  while (out.size() < k) {
    std::vector<double> x(d);
    for (double& v : x) v = u(rng) / 4.0;
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  std::vector<double> flat;
  for (const auto& x : out) flat.insert(flat.end(), x.begin(), x.end());
  return flat;
}

// Random tree-shaped measure with at most `branch` children per node.
inline Paths random_paths(std::mt19937_64& rng, std::size_t horizon, std::size_t dim,
                          std::size_t branch) {
  std::uniform_int_distribution<std::size_t> nb(1, branch);
  Paths p;
  p.horizon = horizon;
  p.dim = dim;
  std::function<void(std::vector<double>, double)> grow = [&](std::vector<double> prefix,
                                                              double mass) {
    if (prefix.size() == horizon * dim) {
      p.paths.push_back(prefix);
      p.weights.push_back(mass);
      return;
    }
    const std::size_t k = nb(rng);
    const auto vals = random_values(rng, k, dim);
    const auto w = random_weights(rng, k);
    for (std::size_t i = 0; i < k; ++i) {
      auto next = prefix;
      next.insert(next.end(), vals.begin() + static_cast<long>(i * dim),
                  vals.begin() + static_cast<long>((i + 1) * dim));
      grow(next, mass * w[i]);
    }
  };
  grow({}, 1.0);
  double s = 0.0;
  for (double w : p.weights) s += w;
  for (double& w : p.weights) w /= s;
  return p;
}

}  // namespace oracle

#endif  // AWE_TESTS_ORACLES_HPP_

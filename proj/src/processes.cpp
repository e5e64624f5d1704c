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

#include "awe/processes.hpp"

#include <algorithm>
#include <cmath>

#include "awe/error.hpp"
#include "awe/rng.hpp"

namespace awe {

namespace {

constexpr std::uint64_t kMemoryTag = 0x6d656d0000000000ULL;
constexpr std::uint64_t kSeasonalTag = 0x7365610000000000ULL;

double trinomial(double u) { return std::floor(3.0 * u) - 1.0; }

void check_memory(const MemoryChainParams& p) {
  require(p.rho >= 0.0 && p.rho < 1.0, "memory chain: rho must lie in [0, 1)");
  require(p.lag >= 1, "memory chain: lag D must be >= 1");
}

void check_seasonal(const SeasonalParams& p) {
  require(p.rho >= 0.0 && p.theta >= 0.0 && p.rho + p.theta < 1.0,
          "seasonal chain: need rho, theta >= 0 and rho + theta < 1");
  require(p.tau >= 1, "seasonal chain: tau must be >= 1");
}

}  // namespace

void FiniteMarkovChain::validate() const {
  require(states >= 1, "FiniteMarkovChain: no states");
  require(transition.size() == states * states, "FiniteMarkovChain: transition size");
  for (std::size_t i = 0; i < states; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < states; ++j) {
      require(k(i, j) >= 0.0, "FiniteMarkovChain: negative transition probability");
      s += k(i, j);
    }
    require(std::abs(s - 1.0) <= kMassTolerance, "FiniteMarkovChain: row does not sum to 1");
  }
  if (!initial.empty()) {
    require(initial.size() == states, "FiniteMarkovChain: initial size");
    double s = 0.0;
    for (double p : initial) s += p;
    require(std::abs(s - 1.0) <= kMassTolerance, "FiniteMarkovChain: initial does not sum to 1");
  }
}

std::vector<double> memory_chain_series(const MemoryChainParams& params, std::size_t length,
                                        std::uint64_t seed, std::uint64_t replication) {
  check_memory(params);
  const CounterRng rng(seed, kMemoryTag ^ replication);
  std::vector<double> x(length);
  if (length == 0) return x;
  // Block n carries (eps_n, B_n).
  auto u = rng.uniforms(0);
  x[0] = trinomial(u[0]);
  for (std::size_t n = 0; n + 1 < length; ++n) {
    u = rng.uniforms(n);
    const bool keep = u[1] < params.rho;
    x[n + 1] = keep ? x[n] : trinomial(u[0]);
  }
  return x;
}

PathSample simulate_memory_chain(const MemoryChainParams& params, std::size_t n_slices,
                                 std::uint64_t seed, std::uint64_t replication) {
  require(n_slices >= 1, "simulate_memory_chain: need at least one slice");
  const std::size_t horizon = 2;
  const std::size_t needed = params.lag * (n_slices - 1) + horizon;
  const auto x = memory_chain_series(params, needed + 1, seed, replication);
  return slice_series(std::span<const double>(x).subspan(1), 1, horizon, params.lag);
}

DiscretePathMeasure exact_law_memory_chain(double rho) {
  require(rho >= 0.0 && rho < 1.0, "exact_law_memory_chain: rho must lie in [0, 1)");
  std::vector<double> paths;
  std::vector<double> weights;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      paths.push_back(a);
      paths.push_back(b);
      weights.push_back(((a == b ? rho : 0.0) + (1.0 - rho) / 3.0) / 3.0);
    }
  }
  return DiscretePathMeasure(2, 1, std::move(paths), std::move(weights));
}

std::vector<double> seasonal_series(const SeasonalParams& params, std::size_t length,
                                    std::uint64_t seed, std::uint64_t replication) {
  check_seasonal(params);
  const CounterRng rng(seed, kSeasonalTag ^ replication);
  const std::size_t tau = params.tau;
  // eps_k, k >= -tau, comes from block k + tau; B_n from the same block as eps_n.
  auto eps = [&](std::size_t shifted) { return trinomial(rng.uniforms(shifted)[0]); };
  std::vector<double> x(length);
  if (length == 0) return x;
  x[0] = 0.0;
  for (std::size_t n = 0; n + 1 < length; ++n) {
    const double v = rng.uniforms(n + tau)[1];
    if (v < params.rho) {
      x[n + 1] = x[n];
    } else if (v < params.rho + params.theta) {
      x[n + 1] = eps(n);  // eps_{n - tau}
    } else {
      x[n + 1] = eps(n + tau);
    }
  }
  return x;
}

PathSample simulate_seasonal(const SeasonalParams& params, std::size_t n_slices,
                             std::uint64_t seed, std::uint64_t replication) {
  require(n_slices >= 1, "simulate_seasonal: need at least one slice");
  const std::size_t horizon = 2;
  const std::size_t needed = params.tau * (n_slices - 1) + horizon;
  const auto x = seasonal_series(params, needed + 1, seed, replication);
  return slice_series(std::span<const double>(x).subspan(1), 1, horizon, params.tau);
}

std::vector<double> stationary_distribution(const FiniteMarkovChain& chain) {
  chain.validate();
  const std::size_t n = chain.states;
  // A unique stationary law needs a state reachable from every state.
  std::vector<std::size_t> reached_by(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (chain.k(i, j) > 0.0 && !seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) reached_by[j] += seen[j];
  }
  require(std::find(reached_by.begin(), reached_by.end(), n) != reached_by.end(),
          "stationary_distribution: chain has more than one closed class");
  // Power iteration on the lazy chain (I + K)/2, which shares the fixed
  // point and is aperiodic.
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  auto step = [&](const std::vector<double>& p, std::vector<double>& q, bool lazy) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) q[j] += p[i] * chain.k(i, j);
    }
    if (lazy) {
      for (std::size_t j = 0; j < n; ++j) q[j] = 0.5 * (q[j] + p[j]);
    }
    double s = 0.0;
    for (double v : q) s += v;
    for (double& v : q) v /= s;
  };
  auto l1 = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
    return s;
  };
  for (std::size_t it = 0; it < 2000000; ++it) {
    step(pi, next, true);
    const double change = l1(pi, next);
    pi.swap(next);
    if (change <= 1e-15) break;
  }
  step(pi, next, false);
  require(l1(pi, next) <= 1e-10, "stationary_distribution: power iteration did not converge");
  return pi;
}

std::size_t slice_count(std::size_t length, std::size_t horizon, std::size_t stride) {
  if (length < horizon) return 0;
  return (length - horizon) / stride + 1;
}

PathSample slice_series(std::span<const double> series, std::size_t dim, std::size_t horizon,
                        std::size_t stride) {
  require(dim >= 1 && stride >= 1, "slice_series: dim and stride must be >= 1");
  require(series.size() % dim == 0, "slice_series: series length not a multiple of d");
  const std::size_t length = series.size() / dim;
  const std::size_t n = slice_count(length, horizon, stride);
  require(n >= 1, "slice_series: series shorter than the horizon");
  std::vector<double> values;
  values.reserve(n * horizon * dim);
  for (std::size_t p = 0; p < n; ++p) {
    const auto first = series.begin() + static_cast<std::ptrdiff_t>(p * stride * dim);
    values.insert(values.end(), first, first + static_cast<std::ptrdiff_t>(horizon * dim));
  }
  return PathSample(n, horizon, dim, std::move(values));
}

}  // namespace awe

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

// Example processes: the trinomial memory chain, the seasonal chain and
// finite-state Markov chains.

#ifndef AWE_PROCESSES_HPP_
#define AWE_PROCESSES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "awe/path_measure.hpp"

namespace awe {

// X_0 = eps_0, X_{n+1} = X_n B_n + eps_n (1 - B_n) with eps uniform on
// {-1, 0, 1} and B ~ Ber(rho). Slices X^n = X_{Dn+1 : Dn+2}, n = 0, 1, ...
//
// rho = 0 (independent refreshes) is accepted as a degenerate member.
struct MemoryChainParams {
  double rho = 0.99;
  std::size_t lag = 1;  // D
};

// X_0 = 0, X_{n+1} = 1{B=0} X_n + 1{B=1} eps_{n-tau} + 1{B=2} eps_n with
// B ~ rho d_0 + theta d_1 + (1 - rho - theta) d_2. Slices at stride tau.
struct SeasonalParams {
  double rho = 0.3;
  double theta = 0.3;
  std::size_t tau = 1;
};

struct FiniteMarkovChain {
  std::size_t states = 0;
  std::vector<double> transition;  // row-major states x states
  std::vector<double> initial;

  double k(std::size_t i, std::size_t j) const { return transition[i * states + j]; }
  void validate() const;
};

// The raw series X_0, ..., X_{length-1}.
std::vector<double> memory_chain_series(const MemoryChainParams& params, std::size_t length,
                                        std::uint64_t seed, std::uint64_t replication = 0);

PathSample simulate_memory_chain(const MemoryChainParams& params, std::size_t n_slices,
                                 std::uint64_t seed, std::uint64_t replication = 0);

// Stationary law of a slice: weight(x1, x2) = (rho 1{x2 = x1} + (1-rho)/3) / 3.
DiscretePathMeasure exact_law_memory_chain(double rho);

std::vector<double> seasonal_series(const SeasonalParams& params, std::size_t length,
                                    std::uint64_t seed, std::uint64_t replication = 0);

PathSample simulate_seasonal(const SeasonalParams& params, std::size_t n_slices,
                             std::uint64_t seed, std::uint64_t replication = 0);

// Left fixed point of K. Throws PreconditionError unless K has a single
// closed class.
std::vector<double> stationary_distribution(const FiniteMarkovChain& chain);

// Path n (n = 0..N-1) is series elements Dn+1, ..., Dn+T counted 1-based,
// where each element is a point in R^d (series holds d values per element).
PathSample slice_series(std::span<const double> series, std::size_t dim, std::size_t horizon,
                        std::size_t stride);

// Number of slices of the given shape that fit into `length` elements.
std::size_t slice_count(std::size_t length, std::size_t horizon, std::size_t stride);

}  // namespace awe

#endif  // AWE_PROCESSES_HPP_

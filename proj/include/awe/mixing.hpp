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

// Exact mixing coefficients of finite-alphabet sequences.
//
// A law on {0, ..., A-1}^N is stored densely; sequence z_{1:N} has index
// sum_i z_i A^{N-i} (z_1 most significant). Everything is templated on the
// scalar so the same code runs in double and in exact rationals.

#ifndef AWE_MIXING_HPP_
#define AWE_MIXING_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "awe/processes.hpp"

namespace awe {

// Dense-enumeration guard on A^N.
inline constexpr std::size_t kMaxStates = 10'000'000;
// Guard on the number of product events visited by one coefficient.
inline constexpr double kMaxEvents = 2e8;

template <typename Scalar>
class BasicSequenceLaw {
 public:
  BasicSequenceLaw(std::size_t alphabet, std::size_t length, std::vector<Scalar> prob);

  std::size_t alphabet() const { return alphabet_; }
  std::size_t length() const { return length_; }
  std::size_t states() const { return prob_.size(); }
  const Scalar& prob(std::size_t index) const { return prob_[index]; }
  const std::vector<Scalar>& probs() const { return prob_; }
  // Symbol at 1-based position i of sequence `index`.
  std::size_t symbol(std::size_t index, std::size_t i) const;

  // Joint law of the listed 1-based coordinates (in the given order), as a
  // dense array with the first listed coordinate most significant.
  std::vector<Scalar> marginal(const std::vector<std::size_t>& coords) const;

 private:
  std::size_t alphabet_;
  std::size_t length_;
  std::vector<Scalar> prob_;
  std::vector<std::size_t> place_;  // A^{N-i}
};

using FiniteSequenceLaw = BasicSequenceLaw<double>;
using RationalSequenceLaw = BasicSequenceLaw<mpq_class>;

FiniteSequenceLaw to_double(const RationalSequenceLaw& law);

// Law of (map[Z_n])_n on the alphabet {0, ..., image_size-1}.
template <typename Scalar>
BasicSequenceLaw<Scalar> map_law(const BasicSequenceLaw<Scalar>& law,
                                 const std::vector<std::size_t>& map, std::size_t image_size);

// Product of the given one-step laws.
FiniteSequenceLaw product_law(const std::vector<std::vector<double>>& marginals);

// Law of the first N states of the chain (initial law = chain.initial, or
// the stationary law when empty).
FiniteSequenceLaw markov_sequence_law(const FiniteMarkovChain& chain, std::size_t length);

// eta(s): sup over 1 <= n <= N-s and product events A_{1:n} of positive
// probability of TV(Law(Z_{n+s} | Z_{1:n} in A_{1:n}), Law(Z_{n+s} | Z_{1:n-1}
// in A_{1:n-1})). eta_bar(s) uses the tail Z_{n+s:N} instead.
template <typename Scalar>
Scalar eta_exact(const BasicSequenceLaw<Scalar>& law, std::size_t s);
template <typename Scalar>
Scalar eta_bar_exact(const BasicSequenceLaw<Scalar>& law, std::size_t s);

// The TV term of eta (tail = false) or eta_bar (tail = true) for one event.
// events[i] is the bit mask of A_{i+1}; n = events.size(). Returns 0 when the
// event has zero probability.
template <typename Scalar>
Scalar eta_event_tv(const BasicSequenceLaw<Scalar>& law, const std::vector<std::uint32_t>& events,
                    std::size_t s, bool tail = false);

// Pointwise coefficient comparing histories z_{1:n} and z_{1:n-1} z~_n;
// 0 when no admissible pair exists.
template <typename Scalar>
Scalar eta_hat_kr(const BasicSequenceLaw<Scalar>& law, std::size_t n, std::size_t s);
// max_n eta_hat_kr(law, n, s) over 1 <= n <= N - s.
template <typename Scalar>
Scalar eta_hat_sup(const BasicSequenceLaw<Scalar>& law, std::size_t s);

// phi(s) = sup_{n, A} TV(Law(Z_{n+s} | Z_{1:n} in A), Law(Z_{n+s})) over all
// positive-probability A in the product space. The conditional law given A is
// a mixture of the pointwise conditionals and TV is convex, so the supremum
// is attained on single histories.
template <typename Scalar>
Scalar phi_exact(const BasicSequenceLaw<Scalar>& law, std::size_t s);

struct MixingProfile {
  std::vector<double> eta;      // eta[s-1] = eta(s), s = 1..N-1
  std::vector<double> eta_bar;  // likewise
  double eta_sum = 1.0;         // 1 + 2 sum eta
  double eta_bar_sum = 1.0;     // 1 + sum eta_bar
};

MixingProfile mixing_profile(const FiniteSequenceLaw& law);

// eta_bar(s) for the first `length` states of a Markov chain, by forward
// filtering over product events. The continuation after Z_{n+s} is the same
// kernel on both sides, so the tail TV equals the TV of Z_{n+s}.
double eta_bar_markov(const FiniteMarkovChain& chain, std::size_t length, std::size_t s);

// min(1, 2 rho^{Ds-1}).
double eta_bound_memory_chain(double rho, std::size_t lag, std::size_t s);
// min(1, C rho^s).
double eta_bound_uniformly_ergodic(double c, double rho, std::size_t s);
// min(1, sum_{k=s}^{N-1} eta(k)); eta[k-1] = eta(k).
double phi_bound_from_eta(const std::vector<double>& eta, std::size_t s, std::size_t length);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Cov(f(Z_i), f(Z_j)) <= eta(i-j) |f|_inf E f(Z_j), for 1 <= j < i <= N and
// f >= 0 given on the alphabet.
BoundCheck covariance_bound_check(const FiniteSequenceLaw& law, const std::vector<double>& f,
                                  std::size_t i, std::size_t j);

// Var[(1/N) sum f(Z_n)] <= (1/N) |f|_inf E f(Z_1) (1 + 2 sum eta). Requires
// identical one-step marginals.
BoundCheck variance_bound_check(const FiniteSequenceLaw& law, const std::vector<double>& f);

// Exact decimal / fraction parsing ("0.756", "3/4", "1e-3").
mpq_class parse_rational(const std::string& text);

struct LoadedLaw {
  std::vector<std::string> labels;  // alphabet symbols, index order
  RationalSequenceLaw law;
};

// CSV with header z_1,...,z_N,prob. Symbols are arbitrary tokens (sorted
// numerically when all are numbers); omitted sequences have probability 0.
LoadedLaw read_sequence_law_csv(const std::string& file);

}  // namespace awe

#endif  // AWE_MIXING_HPP_

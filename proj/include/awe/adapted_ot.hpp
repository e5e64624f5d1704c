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

// Adapted (bicausal) Wasserstein distance between discrete path measures.

#ifndef AWE_ADAPTED_OT_HPP_
#define AWE_ADAPTED_OT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "awe/path_measure.hpp"

namespace awe {

// Value of the nested problem started from a pair of prefix nodes.
// values[t] is a dense rows[t] x cols[t] matrix over the level-t nodes of the
// two prefix trees; values[T-1] is identically zero.
struct NestedValueTable {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<std::vector<double>> values;

  double at(std::size_t t, std::size_t i, std::size_t j) const {
    return values[t][i * cols[t] + j];
  }
};

struct AwResult {
  double cost = 0.0;
  NestedValueTable table;
};

struct AwOptions {
  // Worker threads for the node pairs of one level (1 = serial).
  std::size_t threads = 1;
};

// Backward induction over the prefix trees: at level t every node pair
// solves a one-step transport with cost |x_{t+1} - y_{t+1}| + V_{t+1}; the
// root problem over the time-1 marginals returns AW.
AwResult aw_distance(const DiscretePathMeasure& mu, const DiscretePathMeasure& nu,
                     const AwOptions& options = {});

struct LowerBoundCheck {
  double aw = 0.0;
  double w = 0.0;  // W1 on path space with cost sum_t |x_t - y_t|
  bool holds = false;
};

LowerBoundCheck aw_lower_bound_check(const DiscretePathMeasure& mu, const DiscretePathMeasure& nu,
                                     double tolerance = 1e-9);

// AW(reference, adapted empirical measure of the sample).
double estimate_aw(const PathSample& sample, const DiscretePathMeasure& reference,
                   const AwOptions& options = {});

// Radial map onto B_{2R}(0): identity on B_R(0), norm g_R(|x|) beyond with
// g_R(r) = 2R - R exp(1 - r/R).
std::vector<double> kappa_r(std::span<const double> x, double radius);

// Push-forward of m under kappa_R applied to every time step.
DiscretePathMeasure push_forward_kappa(const DiscretePathMeasure& m, double radius);

// sigma_N = max(sqrt(Delta_N), N^{-1/8}).
double smoothing_sigma(std::size_t n_samples, std::size_t dim, std::size_t horizon);

// Sampled stand-in for the adapted empirical measure convolved with
// N(0, sigma_N^2 I): every atom is replicated `noise_samples_per_atom` times
// with independent Gaussian offsets and weight w / k.
DiscretePathMeasure smoothed_adapted_estimator(const PathSample& sample,
                                               std::size_t noise_samples_per_atom,
                                               std::uint64_t seed,
                                               std::optional<double> sigma = std::nullopt);

}  // namespace awe

#endif  // AWE_ADAPTED_OT_HPP_

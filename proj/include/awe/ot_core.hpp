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

// Finitely supported measures on R^k and exact transport / total-variation
// style distances between them.

#ifndef AWE_OT_CORE_HPP_
#define AWE_OT_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace awe {

// Tolerance on the total mass of a probability vector.
inline constexpr double kMassTolerance = 1e-12;

// A probability measure with finitely many distinct atoms in R^k.
//
// Construction merges bitwise-equal atoms (summing their weights) and drops
// atoms of zero weight; negative or non-finite weights, non-finite
// coordinates and a total mass differing from 1 by more than kMassTolerance
// are rejected. Atoms keep the order of their first occurrence.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::size_t dim, std::vector<double> points, std::vector<double> weights);

  static DiscreteMeasure dirac(std::vector<double> point);
  // Uniform weights over the given atoms (duplicates merged).
  static DiscreteMeasure uniform(std::size_t dim, std::vector<double> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& flat_points() const { return points_; }

  // Index of an atom bitwise equal to `x`, or size() if absent.
  std::size_t find(std::span<const double> x) const;

 private:
  std::size_t dim_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

struct TransportEntry {
  std::size_t row;
  std::size_t col;
  double mass;
};

// Sparse coupling between a source with `rows` atoms and a target with
// `cols` atoms.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<TransportEntry> entries;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

struct TransportResult {
  double cost = 0.0;
  TransportPlan plan;
};

// Exact discrete optimal transport: minimises sum_ij cost[i*n+j] * pi_ij
// over couplings of `source` (m weights) and `target` (n weights).
//
// Network simplex on the bipartite transportation graph. Costs are scaled to
// 64-bit integers (scale 2^32, reduced if needed to rule out overflow) so
// pivoting decisions are exact; Bland's rule takes over after a run of
// degenerate pivots. The returned cost is evaluated with the original
// floating-point costs.
TransportResult solve_transport(std::span<const double> source, std::span<const double> target,
                                std::span<const double> cost);

// W1 on the real line through the monotone (quantile) coupling.
TransportResult wasserstein1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// W1 with Euclidean ground cost in R^k, solved as a min-cost flow.
TransportResult wasserstein1(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Half the L1 distance between the weight vectors over the union support,
// so TV(Ber(p), Ber(q)) = |p - q|.
double total_variation(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// sum_x (|x| + 1/2) |mu(x) - nu(x)| over the union support.
double tv1_weighted(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

enum class SmoothingMethod { kAuto, kQuadrature, kMonteCarlo };

struct SmoothedTvResult {
  double value = 0.0;
  // Monte-Carlo standard error (0 for quadrature).
  double std_error = 0.0;
  // Quadrature discretisation estimate (0 for Monte-Carlo).
  double quadrature_error = 0.0;
  // Analytic bound on the integrand mass outside the integration box.
  double tail_bound = 0.0;
  SmoothingMethod method = SmoothingMethod::kAuto;
};

struct SmoothedTvOptions {
  SmoothingMethod method = SmoothingMethod::kAuto;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
};

// Weighted TV between mu * N(0, sigma^2 I) and nu * N(0, sigma^2 I):
//   int (|x| + 1/2) |q_mu(x) - q_nu(x)| dx.
// kAuto picks tensor-product Gauss-Legendre quadrature for dimension <= 3 and
// importance-sampled Monte-Carlo (proposal: equal mixture of both smoothed
// measures) otherwise.
SmoothedTvResult tv1_smoothed(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double sigma,
                              const SmoothedTvOptions& options = {});

}  // namespace awe

#endif  // AWE_OT_CORE_HPP_

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

// Sampled paths, grid quantization and discrete measures on path space with
// their prefix-tree disintegration.

#ifndef AWE_PATH_MEASURE_HPP_
#define AWE_PATH_MEASURE_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "awe/ot_core.hpp"

namespace awe {

// N paths of T points in R^d, stored path-major: value(n, t, i) lives at
// ((n * T) + t) * d + i. Time indices are 0-based in the API.
class PathSample {
 public:
  PathSample(std::size_t n_paths, std::size_t horizon, std::size_t dim,
             std::vector<double> values);

  std::size_t n_paths() const { return n_paths_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> path(std::size_t n) const {
    return {values_.data() + n * horizon_ * dim_, horizon_ * dim_};
  }
  std::span<const double> point(std::size_t n, std::size_t t) const {
    return {values_.data() + (n * horizon_ + t) * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t n_paths_;
  std::size_t horizon_;
  std::size_t dim_;
  std::vector<double> values_;
};

// Uniform grid of half-open cubes [a + k delta, a + (k+1) delta) per
// coordinate, a = anchor (0 unless given).
class GridQuantizer {
 public:
  explicit GridQuantizer(double delta, std::vector<double> anchor = {});

  double delta() const { return delta_; }
  double quantize(double x, std::size_t coord = 0) const;
  std::vector<double> quantize(std::span<const double> x) const;

 private:
  double delta_;
  std::vector<double> anchor_;
};

// N^{-r} with r = 1/(T+1) for d = 1 and r = 1/(dT) for d >= 2.
double grid_resolution(std::size_t n_samples, std::size_t dim, std::size_t horizon);

// Finitely supported probability measure on (R^d)^T.
//
// Atoms are merged exactly (bitwise on coordinates) and zero weights are
// dropped. The prefix tree has one level per time step; node k of level t is
// a distinct prefix x_{1:t+1}.
class DiscretePathMeasure {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Node {
    std::size_t parent = kNone;  // index into the previous level
    std::size_t atom = kNone;    // representative atom sharing this prefix
    double mass = 0.0;
    std::vector<std::size_t> children;  // indices into the next level
  };

  DiscretePathMeasure(std::size_t horizon, std::size_t dim, std::vector<double> paths,
                      std::vector<double> weights);

  static DiscretePathMeasure dirac(std::size_t horizon, std::size_t dim,
                                   std::vector<double> path);

  std::size_t horizon() const { return horizon_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> path(std::size_t i) const {
    return {paths_.data() + i * horizon_ * dim_, horizon_ * dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& flat_paths() const { return paths_; }

  // Prefix tree. level(0) holds the distinct time-1 values.
  const std::vector<Node>& level(std::size_t t) const { return levels_[t]; }
  // Coordinates of x_{t+1} for node k of level t.
  std::span<const double> node_point(std::size_t t, std::size_t k) const {
    return {paths_.data() + (levels_[t][k].atom * horizon_ + t) * dim_, dim_};
  }
  // Law of x_{t+2} given the prefix of node k at level t.
  DiscreteMeasure node_conditional(std::size_t t, std::size_t k) const;
  // Law of x_1.
  DiscreteMeasure first_marginal() const;

  // Conditional law of x_{t+1} given the prefix x_{1:t} (t = prefix.size()/d,
  // 0 <= t < T). Throws UnsupportedPrefix on a zero-mass prefix.
  DiscreteMeasure disintegrate(std::span<const double> prefix) const;

  // The same measure as a DiscreteMeasure on R^{dT}.
  DiscreteMeasure flatten() const;

 private:
  void build_tree();

  std::size_t horizon_;
  std::size_t dim_;
  std::vector<double> paths_;
  std::vector<double> weights_;
  std::vector<std::vector<Node>> levels_;
};

PathSample quantize_sample(const PathSample& sample, const GridQuantizer& q);

// (1/N) sum_n delta_{X^n}, duplicates merged.
DiscretePathMeasure empirical_measure(const PathSample& sample);

// Empirical measure of the sample quantized with delta = grid_resolution.
DiscretePathMeasure adapted_empirical_measure(const PathSample& sample);

// CSV with header path_id,t,x_1,...,x_d; t is 1-based, rows sorted by
// (path_id, t).
PathSample read_path_sample_csv(const std::string& file);
void write_path_sample_csv(const std::string& file, const PathSample& sample);

// Measure CSV: the path schema with a trailing `weight` column repeated on
// every row of a path. Without a weight column the file is read as a sample
// and its empirical measure is returned.
DiscretePathMeasure read_path_measure_csv(const std::string& file);
void write_path_measure_csv(const std::string& file, const DiscretePathMeasure& m);

}  // namespace awe

#endif  // AWE_PATH_MEASURE_HPP_

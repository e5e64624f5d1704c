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

#include "awe/path_measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "awe/csv.hpp"
#include "awe/error.hpp"
#include "awe/format.hpp"

namespace awe {

namespace {

struct LexLess {
  bool operator()(std::span<const double> a, std::span<const double> b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

bool same(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

PathSample::PathSample(std::size_t n_paths, std::size_t horizon, std::size_t dim,
                       std::vector<double> values)
    : n_paths_(n_paths), horizon_(horizon), dim_(dim), values_(std::move(values)) {
  require(n_paths >= 1, "PathSample: need at least one path");
  require(horizon >= 2, "PathSample: horizon must be >= 2");
  require(dim >= 1, "PathSample: dimension must be >= 1");
  if (values_.size() != n_paths * horizon * dim) {
    throw ShapeMismatch("PathSample: expected " + std::to_string(n_paths * horizon * dim) +
                        " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) require(std::isfinite(v), "PathSample: non-finite coordinate");
}

GridQuantizer::GridQuantizer(double delta, std::vector<double> anchor)
    : delta_(delta), anchor_(std::move(anchor)) {
  require(std::isfinite(delta) && delta > 0.0, "GridQuantizer: delta must be > 0");
  for (double a : anchor_) require(std::isfinite(a), "GridQuantizer: non-finite anchor");
}

double GridQuantizer::quantize(double x, std::size_t coord) const {
  require(std::isfinite(x), "quantize: non-finite input");
  const double a = anchor_.empty() ? 0.0 : anchor_[coord % anchor_.size()];
  const double k = std::floor((x - a) / delta_);
  return a + (k + 0.5) * delta_;
}

std::vector<double> GridQuantizer::quantize(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = quantize(x[i], i);
  return out;
}

double grid_resolution(std::size_t n_samples, std::size_t dim, std::size_t horizon) {
  require(n_samples >= 1, "grid_resolution: N must be >= 1");
  require(dim >= 1, "grid_resolution: d must be >= 1");
  require(horizon >= 2, "grid_resolution: T must be >= 2");
  const double t = static_cast<double>(horizon);
  const double r = dim == 1 ? 1.0 / (t + 1.0) : 1.0 / (static_cast<double>(dim) * t);
  return std::pow(static_cast<double>(n_samples), -r);
}

DiscretePathMeasure::DiscretePathMeasure(std::size_t horizon, std::size_t dim,
                                         std::vector<double> paths, std::vector<double> weights)
    : horizon_(horizon), dim_(dim) {
  require(horizon >= 1 && dim >= 1, "DiscretePathMeasure: horizon and dimension must be >= 1");
  const std::size_t stride = horizon * dim;
  if (paths.size() != stride * weights.size()) {
    throw ShapeMismatch("DiscretePathMeasure: paths/weights size mismatch");
  }
  require(!weights.empty(), "DiscretePathMeasure: no atoms");
  std::map<std::span<const double>, std::size_t, LexLess> index;
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    require(std::isfinite(w) && w >= 0.0, "DiscretePathMeasure: weights must be finite and >= 0");
    std::span<const double> x(paths.data() + i * stride, stride);
    for (double v : x) require(std::isfinite(v), "DiscretePathMeasure: non-finite coordinate");
    total += w;
    if (w == 0.0) continue;
    auto it = index.find(x);
    if (it != index.end()) {
      weights_[it->second] += w;
    } else {
      index.emplace(x, weights_.size());
      paths_.insert(paths_.end(), x.begin(), x.end());
      weights_.push_back(w);
    }
  }
  require(std::abs(total - 1.0) <= kMassTolerance,
          "DiscretePathMeasure: weights sum to " + format_number(total, 17) + ", expected 1");
  build_tree();
}

DiscretePathMeasure DiscretePathMeasure::dirac(std::size_t horizon, std::size_t dim,
                                               std::vector<double> path) {
  return DiscretePathMeasure(horizon, dim, std::move(path), {1.0});
}

void DiscretePathMeasure::build_tree() {
  levels_.assign(horizon_, {});
  std::vector<std::size_t> parent_of_atom(size(), kNone);
  for (std::size_t t = 0; t < horizon_; ++t) {
    std::map<std::span<const double>, std::size_t, LexLess> nodes;
    auto& level = levels_[t];
    for (std::size_t i = 0; i < size(); ++i) {
      std::span<const double> prefix(paths_.data() + i * horizon_ * dim_, (t + 1) * dim_);
      auto it = nodes.find(prefix);
      std::size_t k;
      if (it == nodes.end()) {
        k = level.size();
        nodes.emplace(prefix, k);
        Node node;
        node.parent = parent_of_atom[i];
        node.atom = i;
        level.push_back(node);
        if (t > 0) levels_[t - 1][node.parent].children.push_back(k);
      } else {
        k = it->second;
      }
      level[k].mass += weights_[i];
      parent_of_atom[i] = k;
    }
  }
}

DiscreteMeasure DiscretePathMeasure::node_conditional(std::size_t t, std::size_t k) const {
  require(t + 1 < horizon_, "node_conditional: no next time step");
  const Node& node = levels_[t][k];
  std::vector<double> pts;
  std::vector<double> w;
  pts.reserve(node.children.size() * dim_);
  w.reserve(node.children.size());
  double acc = 0.0;
  for (std::size_t c : node.children) {
    const auto p = node_point(t + 1, c);
    pts.insert(pts.end(), p.begin(), p.end());
    w.push_back(levels_[t + 1][c].mass / node.mass);
    acc += w.back();
  }
  // Renormalise away the rounding of the division.
  for (double& x : w) x /= acc;
  return DiscreteMeasure(dim_, std::move(pts), std::move(w));
}

DiscreteMeasure DiscretePathMeasure::first_marginal() const {
  std::vector<double> pts;
  std::vector<double> w;
  double acc = 0.0;
  for (std::size_t k = 0; k < levels_[0].size(); ++k) {
    const auto p = node_point(0, k);
    pts.insert(pts.end(), p.begin(), p.end());
    w.push_back(levels_[0][k].mass);
    acc += w.back();
  }
  for (double& x : w) x /= acc;
  return DiscreteMeasure(dim_, std::move(pts), std::move(w));
}

DiscreteMeasure DiscretePathMeasure::disintegrate(std::span<const double> prefix) const {
  if (prefix.size() % dim_ != 0) throw ShapeMismatch("disintegrate: prefix length not a multiple of d");
  const std::size_t t = prefix.size() / dim_;
  require(t < horizon_, "disintegrate: prefix must be shorter than the horizon");
  if (t == 0) return first_marginal();
  std::size_t node = kNone;
  for (std::size_t s = 0; s < t; ++s) {
    std::span<const double> x = prefix.subspan(s * dim_, dim_);
    std::size_t found = kNone;
    if (s == 0) {
      for (std::size_t k = 0; k < levels_[0].size() && found == kNone; ++k) {
        if (same(node_point(0, k), x)) found = k;
      }
    } else {
      for (std::size_t c : levels_[s - 1][node].children) {
        if (same(node_point(s, c), x)) {
          found = c;
          break;
        }
      }
    }
    if (found == kNone) throw UnsupportedPrefix("disintegrate: prefix has zero mass");
    node = found;
  }
  return node_conditional(t - 1, node);
}

DiscreteMeasure DiscretePathMeasure::flatten() const {
  return DiscreteMeasure(horizon_ * dim_, paths_, weights_);
}

PathSample quantize_sample(const PathSample& sample, const GridQuantizer& q) {
  std::vector<double> v(sample.values().size());
  const std::size_t d = sample.dim();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = q.quantize(sample.values()[k], k % d);
  return PathSample(sample.n_paths(), sample.horizon(), d, std::move(v));
}

DiscretePathMeasure empirical_measure(const PathSample& sample) {
  std::map<std::span<const double>, std::size_t, LexLess> index;
  std::vector<double> paths;
  std::vector<std::size_t> counts;
  for (std::size_t n = 0; n < sample.n_paths(); ++n) {
    const auto x = sample.path(n);
    auto it = index.find(x);
    if (it != index.end()) {
      ++counts[it->second];
    } else {
      index.emplace(x, counts.size());
      paths.insert(paths.end(), x.begin(), x.end());
      counts.push_back(1);
    }
  }
  const double n = static_cast<double>(sample.n_paths());
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) w[i] = static_cast<double>(counts[i]) / n;
  return DiscretePathMeasure(sample.horizon(), sample.dim(), std::move(paths), std::move(w));
}

DiscretePathMeasure adapted_empirical_measure(const PathSample& sample) {
  const GridQuantizer q(grid_resolution(sample.n_paths(), sample.dim(), sample.horizon()));
  return empirical_measure(quantize_sample(sample, q));
}

// ---------------------------------------------------------------------------
// CSV.

namespace {

struct ParsedPaths {
  std::size_t horizon = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<double> weights;  // one per path when a weight column exists
  bool weighted = false;
};

ParsedPaths parse_path_csv(const std::string& file) {
  const CsvTable table = read_csv(file);
  const auto& h = table.header;
  if (h.size() < 3 || h[0] != "path_id" || h[1] != "t") {
    throw IoError(file + ": header must start with path_id,t,x_1");
  }
  ParsedPaths out;
  out.weighted = h.back() == "weight";
  out.dim = h.size() - 2 - (out.weighted ? 1 : 0);
  if (out.dim == 0) throw IoError(file + ": no coordinate columns");
  for (std::size_t i = 0; i < out.dim; ++i) {
    if (h[2 + i] != "x_" + std::to_string(i + 1)) {
      throw IoError(file + ": expected column x_" + std::to_string(i + 1));
    }
  }
  if (table.rows.empty()) throw IoError(file + ": no data rows");
  std::string current;
  std::size_t t_expected = 1;
  std::size_t horizon = 0;
  double weight = 0.0;
  auto close_path = [&](std::size_t line) {
    const std::size_t len = t_expected - 1;
    if (horizon == 0) horizon = len;
    if (len != horizon) {
      throw IoError(file + ":" + std::to_string(line) + ": path '" + current + "' has " +
                    std::to_string(len) + " steps, expected " + std::to_string(horizon));
    }
    if (out.weighted) out.weights.push_back(weight);
  };
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.lines[r];
    if (r == 0 || row[0] != current) {
      if (r > 0) close_path(line);
      current = row[0];
      t_expected = 1;
    }
    const double t = parse_number(row[1]);
    if (t != static_cast<double>(t_expected)) {
      throw IoError(file + ":" + std::to_string(line) + ": expected t=" +
                    std::to_string(t_expected) + " (rows must be sorted by path_id, t)");
    }
    for (std::size_t i = 0; i < out.dim; ++i) out.values.push_back(parse_number(row[2 + i]));
    if (out.weighted) {
      const double w = parse_number(row.back());
      if (t_expected == 1) {
        weight = w;
      } else if (w != weight) {
        throw IoError(file + ":" + std::to_string(line) + ": weight differs within a path");
      }
    }
    ++t_expected;
  }
  close_path(table.lines.back());
  out.horizon = horizon;
  return out;
}

void write_rows(std::ostream& out, std::size_t n, std::size_t horizon, std::size_t dim,
                const std::vector<double>& values, const std::vector<double>* weights) {
  out << "path_id,t";
  for (std::size_t i = 0; i < dim; ++i) out << ",x_" << (i + 1);
  if (weights) out << ",weight";
  out << '\n';
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t t = 0; t < horizon; ++t) {
      out << p << ',' << (t + 1);
      for (std::size_t i = 0; i < dim; ++i) {
        out << ',' << format_number(values[(p * horizon + t) * dim + i], 17);
      }
      if (weights) out << ',' << format_number((*weights)[p], 17);
      out << '\n';
    }
  }
}

}  // namespace

PathSample read_path_sample_csv(const std::string& file) {
  ParsedPaths p = parse_path_csv(file);
  const std::size_t n = p.values.size() / (p.horizon * p.dim);
  return PathSample(n, p.horizon, p.dim, std::move(p.values));
}

void write_path_sample_csv(const std::string& file, const PathSample& sample) {
  auto out = open_output(file);
  write_rows(out, sample.n_paths(), sample.horizon(), sample.dim(), sample.values(), nullptr);
  if (!out) throw IoError("write failed for '" + file + "'");
}

DiscretePathMeasure read_path_measure_csv(const std::string& file) {
  ParsedPaths p = parse_path_csv(file);
  if (!p.weighted) {
    const std::size_t n = p.values.size() / (p.horizon * p.dim);
    return empirical_measure(PathSample(n, p.horizon, p.dim, std::move(p.values)));
  }
  return DiscretePathMeasure(p.horizon, p.dim, std::move(p.values), std::move(p.weights));
}

void write_path_measure_csv(const std::string& file, const DiscretePathMeasure& m) {
  auto out = open_output(file);
  write_rows(out, m.size(), m.horizon(), m.dim(), m.flat_paths(), &m.weights());
  if (!out) throw IoError("write failed for '" + file + "'");
}

}  // namespace awe

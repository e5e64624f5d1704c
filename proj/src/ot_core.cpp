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

#include "awe/ot_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "awe/error.hpp"
#include "awe/rng.hpp"

namespace awe {

namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

struct LexLess {
  bool operator()(std::span<const double> a, std::span<const double> b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<double> points,
                                 std::vector<double> weights)
    : dim_(dim) {
  require(dim >= 1, "DiscreteMeasure: dimension must be >= 1");
  require(points.size() == dim * weights.size(),
          "DiscreteMeasure: points/weights size mismatch");
  require(!weights.empty(), "DiscreteMeasure: no atoms");
  std::map<std::span<const double>, std::size_t, LexLess> index;
  points_.reserve(points.size());
  weights_.reserve(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    require(std::isfinite(w) && w >= 0.0, "DiscreteMeasure: weights must be finite and >= 0");
    std::span<const double> x(points.data() + i * dim, dim);
    for (double v : x) require(std::isfinite(v), "DiscreteMeasure: non-finite coordinate");
    total += w;
    if (w == 0.0) continue;
    auto it = index.find(x);
    if (it != index.end()) {
      weights_[it->second] += w;
    } else {
      index.emplace(x, weights_.size());
      points_.insert(points_.end(), x.begin(), x.end());
      weights_.push_back(w);
    }
  }
  require(std::abs(total - 1.0) <= kMassTolerance,
          "DiscreteMeasure: weights sum to " + std::to_string(total) + ", expected 1");
  // `index` holds spans into `points`, which stays alive until here.
}

DiscreteMeasure DiscreteMeasure::dirac(std::vector<double> point) {
  const std::size_t dim = point.size();
  return DiscreteMeasure(dim, std::move(point), {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t dim, std::vector<double> points) {
  require(dim >= 1 && points.size() % dim == 0 && !points.empty(),
          "DiscreteMeasure::uniform: bad point array");
  const std::size_t n = points.size() / dim;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return DiscreteMeasure(dim, std::move(points), std::move(w));
}

std::size_t DiscreteMeasure::find(std::span<const double> x) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::equal(x.begin(), x.end(), point(i).begin(), point(i).end())) return i;
  }
  return size();
}

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> s(rows, 0.0);
  for (const auto& e : entries) s[e.row] += e.mass;
  return s;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> s(cols, 0.0);
  for (const auto& e : entries) s[e.col] += e.mass;
  return s;
}

// ---------------------------------------------------------------------------
// Transportation network simplex.

namespace {

class TransportSimplex {
 public:
  TransportSimplex(std::span<const double> a, std::span<const double> b,
                   std::span<const double> cost)
      : m_(a.size()), n_(b.size()), cost_(cost), icost_(cost.size()) {
    double max_cost = 0.0;
    for (double c : cost) {
      require(std::isfinite(c), "solve_transport: non-finite cost");
      max_cost = std::max(max_cost, std::abs(c));
    }
    // Potentials are sums of at most m+n costs; keep them below 2^62.
    double scale = 0x1.0p32;
    const double limit = 0x1.0p62 / (static_cast<double>(m_ + n_ + 1) * (max_cost + 1.0));
    if (scale > limit) scale = std::exp2(std::floor(std::log2(limit)));
    for (std::size_t k = 0; k < cost.size(); ++k) {
      icost_[k] = static_cast<std::int64_t>(std::llround(cost[k] * scale));
    }
    north_west_corner(a, b);
  }

  void run() {
    std::size_t degenerate_run = 0;
    const std::size_t bland_after = 2 * (m_ + n_) + 50;
    for (;;) {
      compute_potentials();
      const bool bland = degenerate_run >= bland_after;
      std::size_t enter_r = 0;
      std::size_t enter_c = 0;
      std::int64_t best = 0;
      bool found = false;
      for (std::size_t i = 0; i < m_ && !(found && bland); ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          const std::int64_t rc = icost_[i * n_ + j] - u_[i] - v_[j];
          if (rc < best) {
            best = rc;
            enter_r = i;
            enter_c = j;
            found = true;
            if (bland) break;
          }
        }
      }
      if (!found) return;
      const bool degenerate = pivot(enter_r, enter_c);
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
    }
  }

  TransportResult result() const {
    TransportResult out;
    out.plan.rows = m_;
    out.plan.cols = n_;
    for (const auto& cell : cells_) {
      if (cell.flow <= 0.0) continue;
      out.plan.entries.push_back({cell.r, cell.c, cell.flow});
      out.cost += cell.flow * cost_[cell.r * n_ + cell.c];
    }
    std::sort(out.plan.entries.begin(), out.plan.entries.end(),
              [](const TransportEntry& x, const TransportEntry& y) {
                return x.row != y.row ? x.row < y.row : x.col < y.col;
              });
    return out;
  }

 private:
  struct Cell {
    std::size_t r;
    std::size_t c;
    double flow;
  };

  // Nodes 0..m-1 are sources, m..m+n-1 targets.
  void north_west_corner(std::span<const double> a, std::span<const double> b) {
    std::vector<double> ra(a.begin(), a.end());
    std::vector<double> rb(b.begin(), b.end());
    std::size_t i = 0;
    std::size_t j = 0;
    for (;;) {
      const bool row_first = ra[i] <= rb[j];
      const double x = row_first ? ra[i] : rb[j];
      cells_.push_back({i, j, std::max(x, 0.0)});
      ra[i] -= x;
      rb[j] -= x;
      if (i + 1 == m_ && j + 1 == n_) break;
      if (i + 1 == m_) {
        ++j;
      } else if (j + 1 == n_) {
        ++i;
      } else if (row_first) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void build_adjacency() {
    adj_.assign(m_ + n_, {});
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      adj_[cells_[k].r].push_back(k);
      adj_[m_ + cells_[k].c].push_back(k);
    }
  }

  std::size_t other_end(std::size_t cell, std::size_t node) const {
    const auto& c = cells_[cell];
    return node < m_ ? m_ + c.c : c.r;
  }

  void compute_potentials() {
    build_adjacency();
    u_.assign(m_, 0);
    v_.assign(n_, 0);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t k : adj_[node]) {
        const std::size_t next = other_end(k, node);
        if (seen[next]) continue;
        seen[next] = 1;
        const std::int64_t c = icost_[cells_[k].r * n_ + cells_[k].c];
        if (next < m_) {
          u_[next] = c - v_[node - m_];
        } else {
          v_[next - m_] = c - u_[node];
        }
        stack.push_back(next);
      }
    }
  }

  // Returns true for a degenerate (zero step) pivot.
  bool pivot(std::size_t r, std::size_t c) {
    // Tree path from source node r to target node m_+c.
    const std::size_t start = r;
    const std::size_t goal = m_ + c;
    std::vector<std::size_t> parent_cell(m_ + n_, kNone);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty() && !seen[goal]) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t k : adj_[node]) {
        const std::size_t next = other_end(k, node);
        if (seen[next]) continue;
        seen[next] = 1;
        parent_cell[next] = k;
        stack.push_back(next);
      }
    }
    // Walk back from the goal: the first edge loses flow, then alternate.
    std::vector<std::size_t> path;
    for (std::size_t node = goal; node != start;) {
      const std::size_t k = parent_cell[node];
      path.push_back(k);
      node = other_end(k, node);
    }
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = kNone;
    for (std::size_t idx = 0; idx < path.size(); idx += 2) {
      const std::size_t k = path[idx];
      const double f = cells_[k].flow;
      const bool better = f < theta ||
                          (f == theta && leave != kNone && cell_key(k) < cell_key(leave));
      if (better) {
        theta = f;
        leave = k;
      }
    }
    theta = std::max(theta, 0.0);
    for (std::size_t idx = 0; idx < path.size(); ++idx) {
      auto& cell = cells_[path[idx]];
      cell.flow += (idx % 2 == 0) ? -theta : theta;
      if (cell.flow < 0.0) cell.flow = 0.0;
    }
    cells_[leave] = {r, c, theta};
    return theta == 0.0;
  }

  std::size_t cell_key(std::size_t k) const { return cells_[k].r * n_ + cells_[k].c; }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t m_;
  std::size_t n_;
  std::span<const double> cost_;
  std::vector<std::int64_t> icost_;
  std::vector<Cell> cells_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::int64_t> u_;
  std::vector<std::int64_t> v_;
};

void check_probability(std::span<const double> w, const char* what) {
  require(!w.empty(), std::string(what) + ": empty weight vector");
  double s = 0.0;
  for (double x : w) {
    require(std::isfinite(x) && x >= 0.0, std::string(what) + ": negative or non-finite weight");
    s += x;
  }
  require(std::abs(s - 1.0) <= 1e-9, std::string(what) + ": weights do not sum to 1");
}

}  // namespace

TransportResult solve_transport(std::span<const double> source, std::span<const double> target,
                                std::span<const double> cost) {
  check_probability(source, "solve_transport source");
  check_probability(target, "solve_transport target");
  require(cost.size() == source.size() * target.size(), "solve_transport: cost matrix size");
  const std::size_t m = source.size();
  const std::size_t n = target.size();
  if (m == 1 || n == 1) {
    TransportResult out;
    out.plan.rows = m;
    out.plan.cols = n;
    if (m == 1) {
      for (std::size_t j = 0; j < n; ++j) {
        if (target[j] <= 0.0) continue;
        out.plan.entries.push_back({0, j, target[j]});
        out.cost += target[j] * cost[j];
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        if (source[i] <= 0.0) continue;
        out.plan.entries.push_back({i, 0, source[i]});
        out.cost += source[i] * cost[i];
      }
    }
    return out;
  }
  TransportSimplex simplex(source, target, cost);
  simplex.run();
  return simplex.result();
}

TransportResult wasserstein1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw ShapeMismatch("wasserstein1_1d: measures must live on R");
  auto order = [](const DiscreteMeasure& m) {
    std::vector<std::size_t> idx(m.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return m.point(a)[0] < m.point(b)[0];
    });
    return idx;
  };
  const auto oa = order(mu);
  const auto ob = order(nu);
  TransportResult out;
  out.plan.rows = mu.size();
  out.plan.cols = nu.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double ra = mu.weight(oa[0]);
  double rb = nu.weight(ob[0]);
  while (i < oa.size() && j < ob.size()) {
    const double x = std::min(ra, rb);
    if (x > 0.0) {
      out.plan.entries.push_back({oa[i], ob[j], x});
      out.cost += x * std::abs(mu.point(oa[i])[0] - nu.point(ob[j])[0]);
    }
    ra -= x;
    rb -= x;
    // Advance whichever side is exhausted; on a tie advance both.
    const bool adv_a = ra <= rb;
    const bool adv_b = rb <= ra;
    if (adv_a && ++i < oa.size()) ra += mu.weight(oa[i]);
    if (adv_b && ++j < ob.size()) rb += nu.weight(ob[j]);
  }
  return out;
}

TransportResult wasserstein1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw ShapeMismatch("wasserstein1: dimension mismatch");
  std::vector<double> cost(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      cost[i * nu.size() + j] = distance(mu.point(i), nu.point(j));
    }
  }
  return solve_transport(mu.weights(), nu.weights(), cost);
}

namespace {

// Calls f(point, mu_weight, nu_weight) once per atom of the union support.
template <typename F>
void for_union_support(const DiscreteMeasure& mu, const DiscreteMeasure& nu, F&& f) {
  if (mu.dim() != nu.dim()) throw ShapeMismatch("union support: dimension mismatch");
  std::map<std::span<const double>, std::size_t, LexLess> in_nu;
  for (std::size_t j = 0; j < nu.size(); ++j) in_nu.emplace(nu.point(j), j);
  std::vector<char> matched(nu.size(), 0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto it = in_nu.find(mu.point(i));
    double wn = 0.0;
    if (it != in_nu.end()) {
      wn = nu.weight(it->second);
      matched[it->second] = 1;
    }
    f(mu.point(i), mu.weight(i), wn);
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (!matched[j]) f(nu.point(j), 0.0, nu.weight(j));
  }
}

}  // namespace

double total_variation(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  double s = 0.0;
  for_union_support(mu, nu, [&](std::span<const double>, double a, double b) {
    s += std::abs(a - b);
  });
  return std::min(1.0, 0.5 * s);
}

double tv1_weighted(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  double s = 0.0;
  for_union_support(mu, nu, [&](std::span<const double> x, double a, double b) {
    s += (norm(x) + 0.5) * std::abs(a - b);
  });
  return s;
}

// ---------------------------------------------------------------------------
// Smoothed weighted TV.

namespace {

constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};

// Truncation half-width in units of sigma.
constexpr double kTailSigmas = 8.0;

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Bound on int_{outside box} (|x| + 1/2)(q_mu + q_nu) dx where the box
// extends kTailSigmas*sigma beyond every atom in every coordinate.
double smoothed_tail_bound(std::size_t k, double max_norm, double sigma) {
  const double z = kTailSigmas;
  const double p_coord = std::erfc(z / std::sqrt(2.0));  // P(|Z| > z)
  const double kd = static_cast<double>(k);
  const double p_out = std::min(1.0, kd * p_coord);
  // E[|Z| 1{exists j: |Z_j| > z}] <= k (2 phi(z) + (k - 1) sqrt(2/pi) P(|Z|>z)).
  const double first_moment =
      kd * (2.0 * phi(z) + (kd - 1.0) * std::sqrt(2.0 / std::numbers::pi) * p_coord);
  return 2.0 * ((max_norm + 0.5) * p_out + sigma * first_moment);
}

class SmoothedIntegrand {
 public:
  SmoothedIntegrand(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double sigma)
      : mu_(mu), nu_(nu), k_(mu.dim()), inv_two_var_(0.5 / (sigma * sigma)) {
    norm_const_ = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * static_cast<double>(k_));
  }

  // (|x| + 1/2) |q_mu(x) - q_nu(x)| with normalised Gaussian densities.
  double weighted_abs_diff(std::span<const double> x) const {
    return (norm(x) + 0.5) * std::abs(mixture(mu_, x, 0.0) - mixture(nu_, x, 0.0)) * norm_const_;
  }

  // (|x| + 1/2) |q_mu - q_nu| / (0.5 (q_mu + q_nu)), computed in a shifted
  // exponent frame so far-out points do not underflow.
  double importance_ratio(std::span<const double> x) const {
    const double shift = min_exponent(x);
    const double a = mixture(mu_, x, shift);
    const double b = mixture(nu_, x, shift);
    const double denom = 0.5 * (a + b);
    if (denom <= 0.0) return 0.0;
    return (norm(x) + 0.5) * std::abs(a - b) / denom;
  }

 private:
  double exponent(std::span<const double> x, std::span<const double> atom) const {
    double s = 0.0;
    for (std::size_t i = 0; i < k_; ++i) {
      const double d = x[i] - atom[i];
      s += d * d;
    }
    return s * inv_two_var_;
  }

  double min_exponent(std::span<const double> x) const {
    double e = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mu_.size(); ++i) e = std::min(e, exponent(x, mu_.point(i)));
    for (std::size_t i = 0; i < nu_.size(); ++i) e = std::min(e, exponent(x, nu_.point(i)));
    return e;
  }

  double mixture(const DiscreteMeasure& m, std::span<const double> x, double shift) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      s += m.weight(i) * std::exp(shift - exponent(x, m.point(i)));
    }
    return s;
  }

  const DiscreteMeasure& mu_;
  const DiscreteMeasure& nu_;
  std::size_t k_;
  double inv_two_var_;
  double norm_const_ = 1.0;
};

double max_atom_norm(const DiscreteMeasure& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) r = std::max(r, norm(m.point(i)));
  return r;
}

// Composite Gauss-Legendre over the box [lo, hi] with `panels` panels per
// axis.
double box_quadrature(const SmoothedIntegrand& f, const std::vector<double>& lo,
                      const std::vector<double>& hi, std::size_t panels) {
  const std::size_t k = lo.size();
  const std::size_t per_axis = panels * kGaussNodes.size();
  std::vector<std::vector<double>> nodes(k), weights(k);
  for (std::size_t a = 0; a < k; ++a) {
    const double h = (hi[a] - lo[a]) / static_cast<double>(panels);
    nodes[a].reserve(per_axis);
    weights[a].reserve(per_axis);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = lo[a] + (static_cast<double>(p) + 0.5) * h;
      for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
        nodes[a].push_back(mid + 0.5 * h * kGaussNodes[g]);
        weights[a].push_back(0.5 * h * kGaussWeights[g]);
      }
    }
  }
  std::vector<std::size_t> idx(k, 0);
  std::vector<double> x(k);
  double total = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t a = 0; a < k; ++a) {
      x[a] = nodes[a][idx[a]];
      w *= weights[a][idx[a]];
    }
    total += w * f.weighted_abs_diff(x);
    std::size_t a = 0;
    while (a < k && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == k) break;
  }
  return total;
}

}  // namespace

SmoothedTvResult tv1_smoothed(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double sigma,
                              const SmoothedTvOptions& options) {
  require(std::isfinite(sigma) && sigma > 0.0, "tv1_smoothed: sigma must be > 0");
  if (mu.dim() != nu.dim()) throw ShapeMismatch("tv1_smoothed: dimension mismatch");
  const std::size_t k = mu.dim();
  SmoothingMethod method = options.method;
  if (method == SmoothingMethod::kAuto) {
    method = k <= 3 ? SmoothingMethod::kQuadrature : SmoothingMethod::kMonteCarlo;
  }
  SmoothedIntegrand f(mu, nu, sigma);
  SmoothedTvResult out;
  out.method = method;

  if (method == SmoothingMethod::kQuadrature) {
    require(k <= 3, "tv1_smoothed: quadrature supports dimension <= 3");
    std::vector<double> lo(k, std::numeric_limits<double>::infinity());
    std::vector<double> hi(k, -std::numeric_limits<double>::infinity());
    for (const DiscreteMeasure* m : {&mu, &nu}) {
      for (std::size_t i = 0; i < m->size(); ++i) {
        for (std::size_t a = 0; a < k; ++a) {
          lo[a] = std::min(lo[a], m->point(i)[a]);
          hi[a] = std::max(hi[a], m->point(i)[a]);
        }
      }
    }
    double widest = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      lo[a] -= kTailSigmas * sigma;
      hi[a] += kTailSigmas * sigma;
      widest = std::max(widest, hi[a] - lo[a]);
    }
    // Panel width a fraction of sigma, capped so the tensor grid stays small.
    const double target_width = k == 1 ? sigma / 8.0 : (k == 2 ? sigma / 3.0 : sigma / 2.0);
    const std::size_t cap = k == 1 ? 20000 : (k == 2 ? 300 : 60);
    std::size_t panels = static_cast<std::size_t>(std::ceil(widest / target_width));
    panels = std::clamp<std::size_t>(panels, 8, cap);
    panels += panels % 2;
    out.value = box_quadrature(f, lo, hi, panels);
    out.quadrature_error = std::abs(out.value - box_quadrature(f, lo, hi, panels / 2));
    out.tail_bound = smoothed_tail_bound(k, std::max(max_atom_norm(mu), max_atom_norm(nu)), sigma);
    return out;
  }

  require(options.mc_samples >= 2, "tv1_smoothed: need at least two Monte-Carlo samples");
  RngCursor rng(CounterRng(options.seed, 0x7476315f736d6f6fULL));
  auto pick = [&](const DiscreteMeasure& m, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      acc += m.weight(i);
      if (u < acc) return i;
    }
    return m.size() - 1;
  };
  std::vector<double> x(k);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < options.mc_samples; ++s) {
    const DiscreteMeasure& src = rng.uniform() < 0.5 ? mu : nu;
    const auto atom = src.point(pick(src, rng.uniform()));
    for (std::size_t a = 0; a < k; ++a) x[a] = atom[a] + sigma * rng.normal();
    const double h = f.importance_ratio(x);
    const double delta = h - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (h - mean);
  }
  const double n = static_cast<double>(options.mc_samples);
  out.value = mean;
  out.std_error = std::sqrt(m2 / (n - 1.0) / n);
  return out;
}

}  // namespace awe

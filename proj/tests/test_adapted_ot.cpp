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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "awe/adapted_ot.hpp"
#include "awe/error.hpp"
#include "awe/path_measure.hpp"
#include "awe/processes.hpp"
#include "oracles.hpp"

using awe::DiscretePathMeasure;

namespace {

DiscretePathMeasure eps_pair(double eps) {
  return DiscretePathMeasure(2, 1, {eps, 1.0, -eps, -1.0}, {0.5, 0.5});
}

const DiscretePathMeasure kCentred(2, 1, {0.0, 1.0, 0.0, -1.0}, {0.5, 0.5});

}  // namespace

TEST_CASE("aw of identical measures is zero") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const auto m = oracle::to_measure(oracle::random_paths(rng, 3, 1 + rep % 2, 3));
    CHECK(awe::aw_distance(m, m).cost == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("aw on the perturbed two-point example") {
  for (double eps : {0.1, 0.25, 1.0}) {
    const auto r = awe::aw_distance(eps_pair(eps), kCentred);
    CHECK(r.cost == doctest::Approx(eps + 1.0).epsilon(1e-12));
    const auto lb = awe::aw_lower_bound_check(eps_pair(eps), kCentred);
    CHECK(lb.holds);
    CHECK(lb.w == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("aw with constant kernels") {
  const DiscretePathMeasure mu(2, 1, {0.0, 0.0, 1.0, 0.0}, {0.5, 0.5});
  const DiscretePathMeasure nu(2, 1, {0.0, 1.0, 1.0, 1.0}, {0.5, 0.5});
  const oracle::Paths pm{2, 1, {{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.5}};
  const oracle::Paths pn{2, 1, {{0.0, 1.0}, {1.0, 1.0}}, {0.5, 0.5}};
  CHECK(oracle::aw_recursive(pm, pn) == doctest::Approx(1.0));
  CHECK(awe::aw_distance(mu, nu).cost == doctest::Approx(1.0));
}

TEST_CASE("aw matches recursive vertex enumeration") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t horizon = 2 + rep % 2;
    const std::size_t dim = 1 + (rep / 2) % 2;
    const auto a = oracle::random_paths(rng, horizon, dim, horizon == 2 ? 4 : 2);
    const auto b = oracle::random_paths(rng, horizon, dim, horizon == 2 ? 4 : 2);
    const double ref = oracle::aw_recursive(a, b);
    const double got = awe::aw_distance(oracle::to_measure(a), oracle::to_measure(b)).cost;
    CHECK(std::abs(got - ref) <= 1e-8);
  }
}

TEST_CASE("aw value table is nonnegative and threads agree") {
  std::mt19937_64 rng(77);
  const auto a = oracle::to_measure(oracle::random_paths(rng, 4, 1, 4));
  const auto b = oracle::to_measure(oracle::random_paths(rng, 4, 1, 4));
  const auto serial = awe::aw_distance(a, b);
  awe::AwOptions opts;
  opts.threads = 4;
  const auto parallel = awe::aw_distance(a, b, opts);
  CHECK(serial.cost == parallel.cost);
  for (const auto& level : serial.table.values) {
    for (double v : level) CHECK(v >= 0.0);
  }
}

TEST_CASE("aw rejects mismatched shapes") {
  const auto a = DiscretePathMeasure::dirac(2, 1, {0.0, 0.0});
  const auto b = DiscretePathMeasure::dirac(3, 1, {0.0, 0.0, 0.0});
  const auto c = DiscretePathMeasure::dirac(2, 2, {0.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(awe::aw_distance(a, b), awe::ShapeMismatch);
  CHECK_THROWS_AS(awe::aw_distance(a, c), awe::ShapeMismatch);
}

TEST_CASE("aw dominates w and satisfies the triangle inequality") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t horizon = 2 + rep % 2;
    const auto a = oracle::to_measure(oracle::random_paths(rng, horizon, 1, 3));
    const auto b = oracle::to_measure(oracle::random_paths(rng, horizon, 1, 3));
    const auto c = oracle::to_measure(oracle::random_paths(rng, horizon, 1, 3));
    const auto lb = awe::aw_lower_bound_check(a, b);
    CHECK(lb.holds);
    CHECK(lb.aw >= lb.w - 1e-9);
    const double ab = awe::aw_distance(a, b).cost;
    CHECK(std::abs(ab - awe::aw_distance(b, a).cost) <= 1e-12);
    CHECK(ab <= awe::aw_distance(a, c).cost + awe::aw_distance(c, b).cost + 1e-8);
  }
}

TEST_CASE("estimate_aw") {
  const double delta = awe::grid_resolution(3, 1, 2);
  const std::vector<double> centre = {0.5 * delta, 1.5 * delta};
  const auto ref = DiscretePathMeasure::dirac(2, 1, centre);
  const awe::PathSample s(3, 2, 1, {centre[0], centre[1], centre[0], centre[1], centre[0], centre[1]});
  CHECK(awe::estimate_aw(s, ref) == 0.0);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(200);
  for (double& x : v) x = g(rng);
  const awe::PathSample big(100, 2, 1, v);
  CHECK(awe::estimate_aw(big, awe::adapted_empirical_measure(big)) == 0.0);
}

TEST_CASE("kappa_R") {
  const double r = 2.0;
  const std::vector<double> on_sphere = {1.2, 1.6};
  CHECK(awe::kappa_r(on_sphere, r) == on_sphere);
  const std::vector<double> far = {0.0, 4.0};
  const auto k = awe::kappa_r(far, r);
  CHECK(k[0] == 0.0);
  CHECK(k[1] == doctest::Approx(r * (2.0 - std::exp(-1.0))));
  double prev = 0.0;
  for (double len = r; len < 200.0; len *= 1.1) {
    const auto y = awe::kappa_r(std::vector<double>{len}, r);
    CHECK(y[0] >= prev * (1.0 - 1e-15));
    // Strict below 2R until the gap falls under one ulp.
    if (len < 30.0) CHECK(y[0] < 2.0 * r);
    CHECK(y[0] <= 2.0 * r);
    prev = y[0];
  }
  CHECK_THROWS_AS(awe::kappa_r(far, 0.0), awe::PreconditionError);
}

TEST_CASE("truncation cost bound") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const auto p = oracle::random_paths(rng, 2, 1, 3);
    const auto nu = oracle::to_measure(p);
    const double r = 0.5 + 0.1 * rep;
    const auto pushed = awe::push_forward_kappa(nu, r);
    double rhs = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      double n2 = 0.0;
      for (double x : nu.path(i)) n2 += x * x;
      if (std::sqrt(n2) >= r) rhs += std::sqrt(n2) * nu.weight(i);
    }
    rhs *= std::sqrt(2.0);
    CHECK(awe::aw_distance(nu, pushed).cost <= rhs + 1e-12);
  }
}

TEST_CASE("smoothing schedule and smoothed estimator") {
  CHECK(awe::smoothing_sigma(256, 1, 2) == doctest::Approx(0.5).epsilon(1e-14));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(60);
  for (double& x : v) x = u(rng);
  const awe::PathSample s(30, 2, 1, v);
  const auto sm = awe::smoothed_adapted_estimator(s, 8, 3);
  double total = 0.0;
  for (double w : sm.weights()) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const auto base = awe::adapted_empirical_measure(s);
  CHECK(sm.size() == base.size() * 8);
  // sigma = 0 with one replica recovers the adapted empirical measure.
  const auto same = awe::smoothed_adapted_estimator(s, 1, 3, 0.0);
  CHECK(awe::aw_distance(same, base).cost == doctest::Approx(0.0).scale(1.0));
  // Deterministic given the seed.
  const auto again = awe::smoothed_adapted_estimator(s, 8, 3);
  CHECK(again.flat_paths() == sm.flat_paths());
}

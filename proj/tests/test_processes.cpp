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

#include <array>
#include <cmath>
#include <vector>

#include "awe/error.hpp"
#include "awe/processes.hpp"

namespace {

std::size_t sym(double x) { return static_cast<std::size_t>(x + 1.0); }

}  // namespace

TEST_CASE("exact memory chain law") {
  const auto mu = awe::exact_law_memory_chain(0.4);
  CHECK(mu.size() == 9);
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double x1 = mu.path(i)[0];
    const double x2 = mu.path(i)[1];
    const double expected = x1 == x2 ? (0.4 + 0.6 / 3.0) / 3.0 : 0.6 / 9.0;
    CHECK(mu.weight(i) == doctest::Approx(expected).epsilon(1e-14));
    total += mu.weight(i);
    if (x1 == 0.0 && x2 == 0.0) CHECK(mu.weight(i) == doctest::Approx(0.2));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(awe::exact_law_memory_chain(1.0), awe::PreconditionError);
}

TEST_CASE("memory chain series follows the recursion") {
  const auto x = awe::memory_chain_series({0.5, 1}, 5000, 3);
  for (double v : x) CHECK((v == -1.0 || v == 0.0 || v == 1.0));
  CHECK(x[1] == x[0]);
  const auto y = awe::memory_chain_series({0.5, 1}, 5000, 3);
  CHECK(x == y);
  CHECK(awe::memory_chain_series({0.5, 1}, 5000, 3, 1) != x);
}

TEST_CASE("memory chain slices share endpoints for D = 1") {
  const auto s = awe::simulate_memory_chain({0.6, 1}, 500, 8);
  CHECK(s.n_paths() == 500);
  for (std::size_t n = 0; n + 1 < s.n_paths(); ++n) CHECK(s.point(n, 1)[0] == s.point(n + 1, 0)[0]);
  const auto series = awe::memory_chain_series({0.6, 3}, 3 * 99 + 3, 8);
  const auto d3 = awe::simulate_memory_chain({0.6, 3}, 100, 8);
  for (std::size_t n = 0; n < 100; ++n) {
    CHECK(d3.point(n, 0)[0] == series[3 * n + 1]);
    CHECK(d3.point(n, 1)[0] == series[3 * n + 2]);
  }
}

TEST_CASE("memory chain without memory has uniform marginals") {
  const auto s = awe::simulate_memory_chain({0.0, 2}, 10000, 5);
  std::array<double, 3> count{};
  for (std::size_t n = 0; n < s.n_paths(); ++n) count[sym(s.point(n, 1)[0])] += 1.0;
  const double se = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / 10000.0);
  for (double c : count) CHECK(std::abs(c / 10000.0 - 1.0 / 3.0) <= 3.0 * se);
}

TEST_CASE("memory chain close to full memory is nearly constant") {
  const auto x = awe::memory_chain_series({0.999999, 1}, 200, 1);
  std::size_t changes = 0;
  for (std::size_t i = 1; i < x.size(); ++i) changes += x[i] != x[i - 1] ? 1 : 0;
  CHECK(changes == 0);
}

TEST_CASE("memory chain pair frequencies match the exact law") {
  // Batch means give standard errors that account for serial dependence.
  for (double rho : {0.3, 0.7, 0.99}) {
    const std::size_t n = 100000;
    const std::size_t batches = 50;
    const std::size_t per = n / batches;
    const auto s = awe::simulate_memory_chain({rho, 1}, n, 42);
    const auto mu = awe::exact_law_memory_chain(rho);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double a = mu.path(i)[0];
      const double b = mu.path(i)[1];
      std::vector<double> freq(batches, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        if (s.point(k, 0)[0] == a && s.point(k, 1)[0] == b) freq[k / per] += 1.0 / per;
      }
      double mean = 0.0;
      for (double f : freq) mean += f;
      mean /= batches;
      double var = 0.0;
      for (double f : freq) var += (f - mean) * (f - mean);
      var /= (batches - 1);
      const double se = std::sqrt(var / batches);
      CHECK(std::abs(mean - mu.weight(i)) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("seasonal chain") {
  const awe::SeasonalParams p{0.3, 0.2, 3};
  const auto a = awe::simulate_seasonal(p, 300, 9);
  const auto b = awe::simulate_seasonal(p, 300, 9);
  CHECK(a.values() == b.values());
  const auto series = awe::seasonal_series(p, 3 * 299 + 3, 9);
  for (std::size_t n = 0; n < 300; ++n) {
    CHECK(a.point(n, 0)[0] == series[3 * n + 1]);
    CHECK(a.point(n, 1)[0] == series[3 * n + 2]);
  }
  for (double v : series) CHECK((v == -1.0 || v == 0.0 || v == 1.0));
  // No memory and no seasonal echo: every step is a fresh uniform draw.
  const auto iid = awe::seasonal_series({0.0, 0.0, 2}, 30000, 4);
  std::array<double, 3> count{};
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < iid.size(); ++i) {
    count[sym(iid[i])] += 1.0;
    repeats += iid[i] == iid[i - 1] ? 1 : 0;
  }
  const double m = static_cast<double>(iid.size() - 1);
  for (double c : count) CHECK(std::abs(c / m - 1.0 / 3.0) <= 4.0 * std::sqrt(2.0 / 9.0 / m));
  CHECK(std::abs(repeats / m - 1.0 / 3.0) <= 4.0 * std::sqrt(2.0 / 9.0 / m));
  CHECK_THROWS_AS(awe::simulate_seasonal({0.6, 0.5, 1}, 10, 0), awe::PreconditionError);
}

TEST_CASE("stationary distribution") {
  awe::FiniteMarkovChain ds{3, {0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2}, {}};
  const auto u = awe::stationary_distribution(ds);
  for (double x : u) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  awe::FiniteMarkovChain two{2, {0.7, 0.3, 0.6, 0.4}, {}};
  const auto pi = awe::stationary_distribution(two);
  CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  awe::FiniteMarkovChain id{2, {1.0, 0.0, 0.0, 1.0}, {}};
  CHECK_THROWS_AS(awe::stationary_distribution(id), awe::PreconditionError);
  // Periodic but irreducible chains still have a fixed point.
  awe::FiniteMarkovChain flip{2, {0.0, 1.0, 1.0, 0.0}, {}};
  const auto half = awe::stationary_distribution(flip);
  CHECK(half[0] == doctest::Approx(0.5));
  awe::FiniteMarkovChain five{5, {}, {}};
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) five.transition.push_back((i * 7 + j * 3) % 5 + 1.0);
    double s = 0.0;
    for (std::size_t j = 0; j < 5; ++j) s += five.transition[i * 5 + j];
    for (std::size_t j = 0; j < 5; ++j) five.transition[i * 5 + j] /= s;
  }
  const auto p5 = awe::stationary_distribution(five);
  double l1 = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    double next = 0.0;
    for (std::size_t i = 0; i < 5; ++i) next += p5[i] * five.k(i, j);
    l1 += std::abs(next - p5[j]);
  }
  CHECK(l1 <= 1e-10);
}

TEST_CASE("slice_series") {
  std::vector<double> s;
  for (int i = 1; i <= 10; ++i) s.push_back(i);
  // Element 1 of the series is s[0]; slice n covers elements 2n+1 and 2n+2.
  const auto p = awe::slice_series(s, 1, 2, 2);
  REQUIRE(p.n_paths() == 5);
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(p.point(n, 0)[0] == static_cast<double>(2 * n + 1));
    CHECK(p.point(n, 1)[0] == static_cast<double>(2 * n + 2));
  }
  const auto blocks = awe::slice_series(s, 1, 5, 5);
  CHECK(blocks.n_paths() == 2);
  CHECK(blocks.point(1, 0)[0] == 6.0);
  CHECK(awe::slice_count(10, 2, 2) == 5);
  CHECK_THROWS_AS(awe::slice_series(std::vector<double>{1.0}, 1, 2, 1), awe::PreconditionError);
  const auto two_d = awe::slice_series(s, 2, 2, 1);
  CHECK(two_d.n_paths() == 4);
  CHECK(two_d.point(0, 1)[1] == 4.0);
}

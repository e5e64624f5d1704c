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
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <vector>

#include "awe/error.hpp"
#include "awe/path_measure.hpp"
#include "awe/processes.hpp"
#include "oracles.hpp"

using awe::DiscretePathMeasure;
using awe::PathSample;

namespace {

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("awe_pm_" + name)).string();
}

}  // namespace

TEST_CASE("grid resolution") {
  CHECK(awe::grid_resolution(1, 1, 2) == 1.0);
  CHECK(awe::grid_resolution(1000, 1, 2) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(awe::grid_resolution(64, 2, 3) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(awe::grid_resolution(10, 1, 1), awe::PreconditionError);
  CHECK_THROWS_AS(awe::grid_resolution(10, 0, 2), awe::PreconditionError);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> n(1, 100000);
  std::uniform_int_distribution<std::size_t> d(1, 4);
  std::uniform_int_distribution<std::size_t> t(2, 5);
  for (int i = 0; i < 10; ++i) {
    const std::size_t nn = n(rng);
    const std::size_t dd = d(rng);
    const std::size_t tt = t(rng);
    const double r = dd == 1 ? 1.0 / (tt + 1.0) : 1.0 / static_cast<double>(dd * tt);
    CHECK(awe::grid_resolution(nn, dd, tt) ==
          doctest::Approx(std::exp(-r * std::log(static_cast<double>(nn)))).epsilon(1e-12));
  }
  for (std::size_t nn = 1; nn < 200; ++nn) {
    CHECK(awe::grid_resolution(nn + 1, 1, 2) < awe::grid_resolution(nn, 1, 2));
  }
}

TEST_CASE("quantizer cube centres") {
  CHECK(awe::GridQuantizer(1.0).quantize(0.3) == 0.5);
  CHECK(awe::GridQuantizer(0.5).quantize(-0.2) == -0.25);
  CHECK(awe::GridQuantizer(1.0).quantize(0.5) == 0.5);
  CHECK(awe::GridQuantizer(1.0).quantize(1.0) == 1.5);
  CHECK(awe::GridQuantizer(1.0, {0.25}).quantize(0.3) == 0.75);
  CHECK_THROWS_AS(awe::GridQuantizer(0.0), awe::PreconditionError);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (double delta : {0.1, 0.3, 1.0 / 3.0, 0.7937005259840998}) {
    const awe::GridQuantizer q(delta);
    for (int i = 0; i < 2000; ++i) {
      const double x = u(rng);
      const double c = q.quantize(x);
      CHECK(std::abs(x - c) <= delta / 2 * (1 + 1e-12));
      CHECK(q.quantize(c) == c);
    }
  }
}

TEST_CASE("empirical measure merges duplicates") {
  const PathSample two_same(2, 2, 1, {0.0, 1.0, 0.0, 1.0});
  const auto m = awe::empirical_measure(two_same);
  CHECK(m.size() == 1);
  CHECK(m.weight(0) == 1.0);
  const auto pair = awe::empirical_measure(PathSample(2, 2, 1, {0.0, 0.0, 1.0, 1.0}));
  CHECK(pair.size() == 2);
  CHECK(pair.weight(0) == 0.5);
  const auto three = awe::empirical_measure(PathSample(3, 2, 1, {0.0, 1.0, 2.0, 3.0, 0.0, 1.0}));
  CHECK(three.size() == 2);
  CHECK(three.weight(0) == doctest::Approx(2.0 / 3.0));
  CHECK(three.weight(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("adapted empirical measure equals empirical measure of the quantized sample") {
  const auto one = awe::adapted_empirical_measure(PathSample(1, 2, 1, {0.3, -0.7}));
  CHECK(one.size() == 1);
  CHECK(one.path(0)[0] == 0.5);
  CHECK(one.path(0)[1] == -0.5);
  // N = 2, T = 2: Delta = 2^{-1/3}, 0.1 / 0.2 and 0.9 / 0.8 share cubes.
  const auto merged = awe::adapted_empirical_measure(PathSample(2, 2, 1, {0.1, 0.9, 0.2, 0.8}));
  CHECK(merged.size() == 1);
  CHECK(merged.weight(0) == 1.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n : {5u, 50u, 400u}) {
    for (std::size_t d : {1u, 2u}) {
      std::vector<double> v(n * 3 * d);
      for (double& x : v) x = g(rng);
      const PathSample s(n, 3, d, v);
      const auto a = awe::adapted_empirical_measure(s);
      const auto b = awe::empirical_measure(
          awe::quantize_sample(s, awe::GridQuantizer(awe::grid_resolution(n, d, 3))));
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.weight(i) == b.weight(i));
        for (std::size_t k = 0; k < a.path(i).size(); ++k) CHECK(a.path(i)[k] == b.path(i)[k]);
      }
    }
  }
  // Already on centres: adapted empirical equals empirical.
  const double delta = awe::grid_resolution(4, 1, 2);
  const PathSample on(4, 2, 1, {0.5 * delta, 1.5 * delta, -0.5 * delta, 0.5 * delta,
                                0.5 * delta, 1.5 * delta, 2.5 * delta, 0.5 * delta});
  const auto x = awe::adapted_empirical_measure(on);
  const auto y = awe::empirical_measure(on);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x.weight(i) == y.weight(i));
}

TEST_CASE("disintegration") {
  const auto constant = DiscretePathMeasure(2, 1, {-1.0, 0.0, 1.0, 0.0}, {0.5, 0.5});
  for (double x1 : {-1.0, 1.0}) {
    const auto c = constant.disintegrate(std::vector<double>{x1});
    CHECK(c.size() == 1);
    CHECK(c.point(0)[0] == 0.0);
  }
  const auto mu = awe::exact_law_memory_chain(0.4);
  const auto k = mu.disintegrate(std::vector<double>{1.0});
  std::map<double, double> w;
  for (std::size_t i = 0; i < k.size(); ++i) w[k.point(i)[0]] = k.weight(i);
  CHECK(w[-1.0] == doctest::Approx(0.2));
  CHECK(w[0.0] == doctest::Approx(0.2));
  CHECK(w[1.0] == doctest::Approx(0.6));
  CHECK_THROWS_AS(mu.disintegrate(std::vector<double>{0.5}), awe::UnsupportedPrefix);
  const auto emp = awe::empirical_measure(PathSample(2, 3, 1, {0.0, 1.0, 2.0, 5.0, 6.0, 7.0}));
  const auto cont = emp.disintegrate(std::vector<double>{5.0, 6.0});
  CHECK(cont.size() == 1);
  CHECK(cont.point(0)[0] == 7.0);
}

TEST_CASE("prefix tree recomposes the flat weights") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = oracle::random_paths(rng, 3, 1 + rep % 2, 3);
    const auto m = oracle::to_measure(p);
    for (std::size_t i = 0; i < m.size(); ++i) {
      double w = 1.0;
      std::vector<double> prefix;
      for (std::size_t t = 0; t < m.horizon(); ++t) {
        const auto c = m.disintegrate(prefix);
        const auto x = m.path(i).subspan(t * m.dim(), m.dim());
        const std::size_t at = c.find(x);
        REQUIRE(at < c.size());
        w *= c.weight(at);
        prefix.insert(prefix.end(), x.begin(), x.end());
      }
      CHECK(std::abs(w - m.weight(i)) <= 1e-12);
    }
    for (std::size_t t = 0; t + 1 < m.horizon(); ++t) {
      for (std::size_t k = 0; k < m.level(t).size(); ++k) {
        const auto& node = m.level(t)[k];
        double s = 0.0;
        for (std::size_t ch : node.children) s += m.level(t + 1)[ch].mass;
        CHECK(std::abs(s - node.mass) <= 1e-12);
        double cw = 0.0;
        const auto cond = m.node_conditional(t, k);
        for (double x : cond.weights()) cw += x;
        CHECK(std::abs(cw - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("path sample validation") {
  CHECK_THROWS_AS(PathSample(1, 1, 1, {0.0}), awe::PreconditionError);
  CHECK_THROWS_AS(PathSample(1, 2, 1, {0.0, NAN}), awe::PreconditionError);
  CHECK_THROWS_AS(PathSample(2, 2, 1, {0.0, 1.0}), awe::Error);
}

TEST_CASE("csv round trips") {
  const PathSample s(2, 2, 2, {0.1, 0.2, 0.3, 0.4, -1.0 / 3.0, 5.0, 6.0, 7.0});
  const std::string f = temp_file("sample.csv");
  awe::write_path_sample_csv(f, s);
  const auto r = awe::read_path_sample_csv(f);
  CHECK(r.values() == s.values());
  CHECK(r.n_paths() == 2);
  CHECK(r.dim() == 2);
  const auto m = awe::exact_law_memory_chain(0.3);
  const std::string g = temp_file("measure.csv");
  awe::write_path_measure_csv(g, m);
  const auto back = awe::read_path_measure_csv(g);
  REQUIRE(back.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(back.weight(i) == doctest::Approx(m.weight(i)).epsilon(1e-15));
  {
    std::ofstream bad(f);
    bad << "path_id,t,x_1\n0,1,0.5\n0,3,0.5\n";
  }
  CHECK_THROWS_AS(awe::read_path_sample_csv(f), awe::IoError);
  CHECK_THROWS_AS(awe::read_path_sample_csv(temp_file("missing.csv")), awe::IoError);
  std::filesystem::remove(f);
  std::filesystem::remove(g);
}

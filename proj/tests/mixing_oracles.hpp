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

// Brute-force references for mixing coefficients, written straight from the
// definitions.

#ifndef AWE_TESTS_MIXING_ORACLES_HPP_
#define AWE_TESTS_MIXING_ORACLES_HPP_

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "awe/mixing.hpp"

namespace mixing_oracle {

// Z_1 ~ Ber(q); given Z_1 = 0: Z_2 = 0, Z_3 ~ Ber(1 - q); given Z_1 = 1:
// Z_2 ~ Ber(q), Z_3 ~ Ber(q) if Z_2 = 1 and Ber(1/2) otherwise.
inline awe::RationalSequenceLaw example_law(const mpq_class& q) {
  std::vector<mpq_class> p(8, 0);
  auto at = [&](int a, int b, int c) -> mpq_class& { return p[a * 4 + b * 2 + c]; };
  const mpq_class half(1, 2);
  at(0, 0, 0) = (1 - q) * q;
  at(0, 0, 1) = (1 - q) * (1 - q);
  at(1, 1, 0) = q * q * (1 - q);
  at(1, 1, 1) = q * q * q;
  at(1, 0, 0) = q * (1 - q) * half;
  at(1, 0, 1) = q * (1 - q) * half;
  return awe::RationalSequenceLaw(2, 3, p);
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (double& x : w) {
    x = u(rng) < 0.15 ? 0.0 : u(rng);
    s += x;
  }
  if (s == 0.0) {
    w[0] = 1.0;
    s = 1.0;
  }
  for (double& x : w) x /= s;
  return w;
}

inline awe::FiniteSequenceLaw random_law(std::mt19937_64& rng, std::size_t a, std::size_t n) {
  std::size_t states = 1;
  for (std::size_t i = 0; i < n; ++i) states *= a;
  auto w = random_simplex(rng, states);
  double s = 0.0;
  for (double x : w) s += x;
  for (double& x : w) x /= s;
  return awe::FiniteSequenceLaw(a, n, w);
}

inline awe::RationalSequenceLaw rational_product(const std::vector<std::vector<mpq_class>>& m) {
  const std::size_t a = m.front().size();
  std::size_t states = 1;
  for (std::size_t i = 0; i < m.size(); ++i) states *= a;
  std::vector<mpq_class> p(states, 1);
  for (std::size_t idx = 0; idx < states; ++idx) {
    std::size_t r = idx;
    for (std::size_t i = m.size(); i-- > 0;) {
      p[idx] *= m[i][r % a];
      r /= a;
    }
  }
  return awe::RationalSequenceLaw(a, m.size(), p);
}

// Decodes sequence `idx` with the first coordinate most significant.
inline std::vector<std::size_t> decode(std::size_t idx, std::size_t a, std::size_t n) {
  std::vector<std::size_t> z(n);
  for (std::size_t i = n; i-- > 0;) {
    z[i] = idx % a;
    idx /= a;
  }
  return z;
}

// Target code for Z_{from} (single) or Z_{from:N} (tail), 0-based from.
inline std::size_t target_code(const std::vector<std::size_t>& z, std::size_t from, bool tail,
                               std::size_t a) {
  if (!tail) return z[from];
  std::size_t c = 0;
  for (std::size_t i = from; i < z.size(); ++i) c = c * a + z[i];
  return c;
}

inline double eta_brute(const awe::FiniteSequenceLaw& law, std::size_t s, bool tail) {
  const std::size_t a = law.alphabet();
  const std::size_t n_len = law.length();
  const std::size_t full = (std::size_t{1} << a) - 1;
  std::vector<std::vector<std::size_t>> seqs;
  for (std::size_t idx = 0; idx < law.states(); ++idx) seqs.push_back(decode(idx, a, n_len));
  double best = 0.0;
  for (std::size_t n = n_len - s; n >= 1; --n) {
    const std::size_t from = n - 1 + s;
    std::size_t codes = 1;
    for (std::size_t i = from; i < (tail ? n_len : from + 1); ++i) codes *= a;
    std::vector<std::size_t> masks(n, 1);
    for (;;) {
      std::vector<double> p1(codes, 0.0);
      std::vector<double> p0(codes, 0.0);
      for (std::size_t idx = 0; idx < seqs.size(); ++idx) {
        const auto& z = seqs[idx];
        bool in0 = true;
        for (std::size_t i = 0; i + 1 < n; ++i) in0 = in0 && ((masks[i] >> z[i]) & 1u);
        if (!in0) continue;
        const std::size_t c = target_code(z, from, tail, a);
        p0[c] += law.prob(idx);
        if ((masks[n - 1] >> z[n - 1]) & 1u) p1[c] += law.prob(idx);
      }
      double m1 = 0.0;
      double m0 = 0.0;
      for (std::size_t c = 0; c < codes; ++c) {
        m1 += p1[c];
        m0 += p0[c];
      }
      if (m1 > 0.0) {
        double tv = 0.0;
        for (std::size_t c = 0; c < codes; ++c) tv += std::abs(p1[c] / m1 - p0[c] / m0);
        best = std::max(best, 0.5 * tv);
      }
      std::size_t k = 0;
      while (k < n && masks[k] == full) masks[k++] = 1;
      if (k == n) break;
      ++masks[k];
    }
  }
  return best;
}

// sup over n and arbitrary (not only product) events of Z_{1:n}.
inline double phi_brute(const awe::FiniteSequenceLaw& law, std::size_t s) {
  const std::size_t a = law.alphabet();
  const std::size_t n_len = law.length();
  double best = 0.0;
  for (std::size_t n = 1; n + s <= n_len; ++n) {
    std::size_t hist = 1;
    for (std::size_t i = 0; i < n; ++i) hist *= a;
    // joint[h][z]: P(Z_{1:n} = h, Z_{n+s} = z).
    std::vector<std::vector<double>> joint(hist, std::vector<double>(a, 0.0));
    for (std::size_t idx = 0; idx < law.states(); ++idx) {
      const auto z = decode(idx, a, n_len);
      std::size_t h = 0;
      for (std::size_t i = 0; i < n; ++i) h = h * a + z[i];
      joint[h][z[n + s - 1]] += law.prob(idx);
    }
    std::vector<double> marg(a, 0.0);
    for (const auto& row : joint) {
      for (std::size_t z = 0; z < a; ++z) marg[z] += row[z];
    }
    for (std::size_t ev = 1; ev < (std::size_t{1} << hist); ++ev) {
      std::vector<double> c(a, 0.0);
      double m = 0.0;
      for (std::size_t h = 0; h < hist; ++h) {
        if (!((ev >> h) & 1u)) continue;
        for (std::size_t z = 0; z < a; ++z) {
          c[z] += joint[h][z];
          m += joint[h][z];
        }
      }
      if (m <= 0.0) continue;
      double tv = 0.0;
      for (std::size_t z = 0; z < a; ++z) tv += std::abs(c[z] / m - marg[z]);
      best = std::max(best, 0.5 * tv);
    }
  }
  return best;
}

inline double covariance(const awe::FiniteSequenceLaw& law, const std::vector<double>& f,
                         std::size_t i, std::size_t j) {
  double ei = 0.0;
  double ej = 0.0;
  double eij = 0.0;
  for (std::size_t idx = 0; idx < law.states(); ++idx) {
    const auto z = decode(idx, law.alphabet(), law.length());
    const double p = law.prob(idx);
    ei += p * f[z[i - 1]];
    ej += p * f[z[j - 1]];
    eij += p * f[z[i - 1]] * f[z[j - 1]];
  }
  return eij - ei * ej;
}

}  // namespace mixing_oracle

#endif  // AWE_TESTS_MIXING_ORACLES_HPP_

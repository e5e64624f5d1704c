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

#ifndef AWE_RNG_HPP_
#define AWE_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace awe {

// Philox4x32-10 (Salmon et al., SC'11). A keyed bijection on 128-bit
// counters; every output block is a pure function of (key, counter).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

// Counter-based stream keyed by (seed, stream). Draw `index` of a stream
// never depends on which other draws were made, so replications can be
// evaluated in any order or in parallel with identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::array<std::uint32_t, 4> block(std::uint64_t index) const {
    return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                       static_cast<std::uint32_t>(stream_),
                       static_cast<std::uint32_t>(stream_ >> 32)},
                      key_);
  }

  // Two independent uniforms on [0, 1) with 53-bit resolution.
  std::array<double, 2> uniforms(std::uint64_t index) const {
    const auto w = block(index);
    return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
  }

  // Two independent standard normals (Box-Muller on one block).
  std::array<double, 2> normals(std::uint64_t index) const {
    const auto u = uniforms(index);
    const double radius = std::sqrt(-2.0 * std::log1p(-u[0]));
    const double angle = 2.0 * std::numbers::pi * u[1];
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  std::uint64_t stream() const { return stream_; }

 private:
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
};

// Sequential cursor over a CounterRng for code that just needs "the next"
// normal or uniform.
class RngCursor {
 public:
  explicit RngCursor(CounterRng rng, std::uint64_t start = 0) : rng_(rng), next_(start) {}

  double uniform() {
    if (spare_uniform_) {
      spare_uniform_ = false;
      return uniform_buf_;
    }
    const auto u = rng_.uniforms(next_++);
    uniform_buf_ = u[1];
    spare_uniform_ = true;
    return u[0];
  }

  double normal() {
    if (spare_normal_) {
      spare_normal_ = false;
      return normal_buf_;
    }
    const auto z = rng_.normals(next_++);
    normal_buf_ = z[1];
    spare_normal_ = true;
    return z[0];
  }

 private:
  CounterRng rng_;
  std::uint64_t next_;
  double uniform_buf_ = 0.0;
  double normal_buf_ = 0.0;
  bool spare_uniform_ = false;
  bool spare_normal_ = false;
};

}  // namespace awe

#endif  // AWE_RNG_HPP_

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

// Closed-form rate and concentration bounds. The constants C, c are supplied
// by the caller (usually calibrated by an experiment). Probability bounds are
// clamped to [0, 1].

#ifndef AWE_BOUNDS_HPP_
#define AWE_BOUNDS_HPP_

#include <cstddef>
#include <limits>

namespace awe {

inline constexpr double kInfiniteMoment = std::numeric_limits<double>::infinity();

struct RateSpec {
  std::size_t d = 1;
  std::size_t horizon = 2;
  double p = kInfiniteMoment;
  double eta_sum = 1.0;      // 1 + 2 sum eta(s)
  double eta_bar_sum = 1.0;  // 1 + sum eta_bar(s)
  double c_moment = 1.0;     // C
  double c_conc = 1.0;       // c
};

// N^{-1/(T+1)} (d = 1), N^{-1/(2T)} log(N+1) (d = 2), N^{-1/(dT)} (d >= 3).
double rate_inf(double n, std::size_t d, std::size_t horizon);

// N^{-(p-1)/(pT)} + N^{-1/((d+1)T)} (d <= 2) or N^{-1/(dT)} (d >= 3);
// p = kInfiniteMoment gives exponent -1/T in the first term.
double rate_p(double n, std::size_t d, std::size_t horizon, double p);

// C sqrt(eta_sum) rate_inf(N).
double moment_bound_compact(double n, const RateSpec& spec);

// min(1, 2 exp(-c N eps^2 / (diam^2 eta_bar_sum^2))).
double concentration_bound_compact(double n, double eps, double diam, double eta_bar_sum,
                                   double c);

// Two-term bound for eps >= Delta_N (checked; PreconditionError otherwise):
// 2 exp(-c / eta_bar_sum^2 N^{a/(a+2)} eps^{2a/(a+2)})
//   + E N exp(-c N^{a/(a+2)} eps^{2a/(a+2)}).
double concentration_bound_general(std::size_t n, double eps, double alpha, double eta_bar_sum,
                                   double e_mu, double c, std::size_t d, std::size_t horizon);

// min(1, 2 exp(-eps^2 / (2 N L^2 eta_bar_sum^2))).
double bdd_bound(double n, double lipschitz, double eps, double eta_bar_sum);

}  // namespace awe

#endif  // AWE_BOUNDS_HPP_

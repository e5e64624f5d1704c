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

#include "awe/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "awe/error.hpp"
#include "awe/format.hpp"
#include "awe/path_measure.hpp"

namespace awe {

namespace {

void check_shape(double n, std::size_t d, std::size_t horizon) {
  require(std::isfinite(n) && n >= 1.0, "bounds: N must be >= 1");
  require(d >= 1, "bounds: d must be >= 1");
  require(horizon >= 2, "bounds: T must be >= 2");
}

double clamp_probability(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double rate_inf(double n, std::size_t d, std::size_t horizon) {
  check_shape(n, d, horizon);
  const double t = static_cast<double>(horizon);
  if (d == 1) return std::pow(n, -1.0 / (t + 1.0));
  if (d == 2) return std::pow(n, -1.0 / (2.0 * t)) * std::log(n + 1.0);
  return std::pow(n, -1.0 / (static_cast<double>(d) * t));
}

double rate_p(double n, std::size_t d, std::size_t horizon, double p) {
  check_shape(n, d, horizon);
  require(p >= 1.0, "rate_p: p must be >= 1");
  const double t = static_cast<double>(horizon);
  const double first_exp = std::isinf(p) ? 1.0 / t : (p - 1.0) / (p * t);
  const double grid_exp =
      d <= 2 ? 1.0 / ((static_cast<double>(d) + 1.0) * t) : 1.0 / (static_cast<double>(d) * t);
  return std::pow(n, -first_exp) + std::pow(n, -grid_exp);
}

double moment_bound_compact(double n, const RateSpec& spec) {
  require(spec.eta_sum >= 1.0, "moment_bound_compact: eta_sum must be >= 1");
  require(spec.c_moment >= 0.0, "moment_bound_compact: C must be >= 0");
  return spec.c_moment * std::sqrt(spec.eta_sum) * rate_inf(n, spec.d, spec.horizon);
}

double concentration_bound_compact(double n, double eps, double diam, double eta_bar_sum,
                                   double c) {
  require(eps > 0.0, "concentration_bound_compact: eps must be > 0");
  require(diam > 0.0, "concentration_bound_compact: diameter must be > 0");
  require(eta_bar_sum >= 1.0, "concentration_bound_compact: eta_bar_sum must be >= 1");
  require(c >= 0.0 && n >= 1.0, "concentration_bound_compact: need c >= 0, N >= 1");
  const double expo = c * n * eps * eps / (diam * diam * eta_bar_sum * eta_bar_sum);
  return clamp_probability(2.0 * std::exp(-expo));
}

double concentration_bound_general(std::size_t n, double eps, double alpha, double eta_bar_sum,
                                   double e_mu, double c, std::size_t d, std::size_t horizon) {
  const double delta = grid_resolution(n, d, horizon);
  if (!(eps >= delta)) {
    throw PreconditionError("concentration_bound_general: eps = " + format_number(eps) +
                            " is below Delta_N = " + format_number(delta));
  }
  require(alpha > 0.0, "concentration_bound_general: alpha must be > 0");
  require(eta_bar_sum >= 1.0, "concentration_bound_general: eta_bar_sum must be >= 1");
  require(e_mu >= 0.0 && c >= 0.0, "concentration_bound_general: E and c must be >= 0");
  const double nn = static_cast<double>(n);
  const double k = std::pow(nn, alpha / (alpha + 2.0)) * std::pow(eps, 2.0 * alpha / (alpha + 2.0));
  const double first = 2.0 * std::exp(-c / (eta_bar_sum * eta_bar_sum) * k);
  const double second = e_mu * nn * std::exp(-c * k);
  return clamp_probability(first + second);
}

double bdd_bound(double n, double lipschitz, double eps, double eta_bar_sum) {
  require(lipschitz > 0.0, "bdd_bound: L must be > 0");
  require(eps >= 0.0, "bdd_bound: eps must be >= 0");
  require(eta_bar_sum >= 1.0 && n >= 1.0, "bdd_bound: need eta_bar_sum >= 1, N >= 1");
  const double expo = eps * eps / (2.0 * n * lipschitz * lipschitz * eta_bar_sum * eta_bar_sum);
  return clamp_probability(2.0 * std::exp(-expo));
}

}  // namespace awe

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

#include "awe/mixing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "awe/csv.hpp"
#include "awe/error.hpp"
#include "awe/format.hpp"

namespace awe {

namespace {


double absval(double x) { return std::abs(x); }
mpq_class absval(const mpq_class& x) { return x < 0 ? mpq_class(-x) : x; }

bool mass_ok(double total) { return std::abs(total - 1.0) <= 1e-12; }
bool mass_ok(const mpq_class& total) { return total == 1; }

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kMaxStates / base) {
      throw StateSpaceTooLarge("state space " + std::to_string(base) + "^" + std::to_string(exp) +
                               " exceeds the dense enumeration guard of 1e7");
    }
    r *= base;
  }
  return r;
}

void check_events(std::size_t alphabet, std::size_t n) {
  const double per = std::exp2(static_cast<double>(alphabet)) - 1.0;
  if (std::pow(per, static_cast<double>(n)) > kMaxEvents) {
    throw StateSpaceTooLarge("product-event enumeration over " + std::to_string(n) +
                             " coordinates exceeds the event guard");
  }
}

template <typename Scalar>
bool all_zero(const std::vector<Scalar>& v) {
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

// TV between the normalised versions of two nonnegative vectors with the
// given (positive) totals.
template <typename Scalar>
Scalar normalised_tv(const Scalar* p, const Scalar& tp, const Scalar* q, const Scalar& tq,
                     std::size_t w) {
  Scalar acc = 0;
  for (std::size_t k = 0; k < w; ++k) {
    Scalar diff = p[k] * tq - q[k] * tp;
    acc += absval(diff);
  }
  Scalar out = acc / (tp * tq);
  out /= 2;
  return out;
}

template <typename Scalar>
std::vector<std::size_t> target_coords(std::size_t n, std::size_t s, std::size_t length,
                                       bool tail) {
  std::vector<std::size_t> c;
  for (std::size_t i = 1; i <= n; ++i) c.push_back(i);
  if (tail) {
    for (std::size_t i = n + s; i <= length; ++i) c.push_back(i);
  } else {
    c.push_back(n + s);
  }
  return c;
}

// Visits every product event A_{1:n-1} of positive probability and calls
// `leaf(G)` with G(z_n, w) = P(Z_{1:n-1} in A_{1:n-1}, Z_n = z_n, target = w).
template <typename Scalar>
void descend(const std::vector<Scalar>& arr, std::size_t alphabet, std::size_t remaining,
             const std::function<void(const std::vector<Scalar>&)>& leaf) {
  if (remaining == 0) {
    leaf(arr);
    return;
  }
  const std::size_t stride = arr.size() / alphabet;
  std::vector<Scalar> next(stride);
  const std::uint32_t masks = (1u << alphabet) - 1u;
  for (std::uint32_t mask = 1; mask <= masks; ++mask) {
    for (std::size_t r = 0; r < stride; ++r) next[r] = 0;
    for (std::size_t a = 0; a < alphabet; ++a) {
      if (!(mask >> a & 1u)) continue;
      for (std::size_t r = 0; r < stride; ++r) next[r] += arr[a * stride + r];
    }
    if (all_zero(next)) continue;
    descend(next, alphabet, remaining - 1, leaf);
  }
}

template <typename Scalar>
Scalar eta_core(const BasicSequenceLaw<Scalar>& law, std::size_t s, bool tail) {
  const std::size_t length = law.length();
  require(s >= 1 && s < length, "eta: need 1 <= s < N");
  const std::size_t alphabet = law.alphabet();
  Scalar best = 0;
  for (std::size_t n = 1; n + s <= length; ++n) {
    check_events(alphabet, n);
    const auto coords = target_coords<Scalar>(n, s, length, tail);
    const std::vector<Scalar> joint = law.marginal(coords);
    const std::size_t w = joint.size() / checked_power(alphabet, n);
    std::vector<Scalar> p0(w);
    std::vector<Scalar> p1(w);
    descend<Scalar>(joint, alphabet, n - 1, [&](const std::vector<Scalar>& g) {
      Scalar t0 = 0;
      for (std::size_t k = 0; k < w; ++k) {
        p0[k] = 0;
        for (std::size_t a = 0; a < alphabet; ++a) p0[k] += g[a * w + k];
        t0 += p0[k];
      }
      if (t0 == 0) return;
      const std::uint32_t masks = (1u << alphabet) - 1u;
      for (std::uint32_t mask = 1; mask <= masks; ++mask) {
        Scalar t1 = 0;
        for (std::size_t k = 0; k < w; ++k) {
          p1[k] = 0;
          for (std::size_t a = 0; a < alphabet; ++a) {
            if (mask >> a & 1u) p1[k] += g[a * w + k];
          }
          t1 += p1[k];
        }
        if (t1 == 0) continue;
        Scalar tv = normalised_tv(p1.data(), t1, p0.data(), t0, w);
        if (tv > best) best = tv;
      }
    });
  }
  return best;
}

}  // namespace

template <typename Scalar>
BasicSequenceLaw<Scalar>::BasicSequenceLaw(std::size_t alphabet, std::size_t length,
                                           std::vector<Scalar> prob)
    : alphabet_(alphabet), length_(length), prob_(std::move(prob)) {
  require(alphabet >= 1 && alphabet <= 16, "FiniteSequenceLaw: alphabet size must be in [1, 16]");
  require(length >= 1, "FiniteSequenceLaw: length must be >= 1");
  const std::size_t states = checked_power(alphabet, length);
  if (prob_.size() != states) throw ShapeMismatch("FiniteSequenceLaw: expected A^N probabilities");
  Scalar total = 0;
  for (const auto& p : prob_) {
    require(p >= 0, "FiniteSequenceLaw: negative probability");
    total += p;
  }
  require(mass_ok(total), "FiniteSequenceLaw: probabilities do not sum to 1");
  place_.assign(length, 1);
  for (std::size_t i = length - 1; i-- > 0;) place_[i] = place_[i + 1] * alphabet;
}

template <typename Scalar>
std::size_t BasicSequenceLaw<Scalar>::symbol(std::size_t index, std::size_t i) const {
  return (index / place_[i - 1]) % alphabet_;
}

template <typename Scalar>
std::vector<Scalar> BasicSequenceLaw<Scalar>::marginal(const std::vector<std::size_t>& coords) const {
  for (std::size_t c : coords) require(c >= 1 && c <= length_, "marginal: coordinate out of range");
  const std::size_t size = checked_power(alphabet_, coords.size());
  std::vector<Scalar> out(size);
  for (std::size_t idx = 0; idx < prob_.size(); ++idx) {
    if (prob_[idx] == 0) continue;
    std::size_t k = 0;
    for (std::size_t c : coords) k = k * alphabet_ + symbol(idx, c);
    out[k] += prob_[idx];
  }
  return out;
}

template class BasicSequenceLaw<double>;
template class BasicSequenceLaw<mpq_class>;

FiniteSequenceLaw to_double(const RationalSequenceLaw& law) {
  std::vector<double> p(law.states());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = law.prob(i).get_d();
    total += p[i];
  }
  for (double& x : p) x /= total;
  return FiniteSequenceLaw(law.alphabet(), law.length(), std::move(p));
}

template <typename Scalar>
BasicSequenceLaw<Scalar> map_law(const BasicSequenceLaw<Scalar>& law,
                                 const std::vector<std::size_t>& map, std::size_t image_size) {
  require(map.size() == law.alphabet(), "map_law: map must cover the alphabet");
  for (std::size_t v : map) require(v < image_size, "map_law: image index out of range");
  const std::size_t states = checked_power(image_size, law.length());
  std::vector<Scalar> p(states);
  for (std::size_t idx = 0; idx < law.states(); ++idx) {
    if (law.prob(idx) == 0) continue;
    std::size_t k = 0;
    for (std::size_t i = 1; i <= law.length(); ++i) k = k * image_size + map[law.symbol(idx, i)];
    p[k] += law.prob(idx);
  }
  return BasicSequenceLaw<Scalar>(image_size, law.length(), std::move(p));
}

template FiniteSequenceLaw map_law(const FiniteSequenceLaw&, const std::vector<std::size_t>&,
                                   std::size_t);
template RationalSequenceLaw map_law(const RationalSequenceLaw&, const std::vector<std::size_t>&,
                                     std::size_t);

FiniteSequenceLaw product_law(const std::vector<std::vector<double>>& marginals) {
  require(!marginals.empty(), "product_law: no marginals");
  const std::size_t a = marginals[0].size();
  for (const auto& m : marginals) require(m.size() == a, "product_law: alphabet mismatch");
  const std::size_t n = marginals.size();
  std::vector<double> p(checked_power(a, n), 1.0);
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = n; i-- > 0;) {
      p[idx] *= marginals[i][rest % a];
      rest /= a;
    }
  }
  double total = 0.0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return FiniteSequenceLaw(a, n, std::move(p));
}

FiniteSequenceLaw markov_sequence_law(const FiniteMarkovChain& chain, std::size_t length) {
  chain.validate();
  const std::vector<double> init = chain.initial.empty() ? stationary_distribution(chain) : chain.initial;
  const std::size_t a = chain.states;
  std::vector<double> p(checked_power(a, length));
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    std::vector<std::size_t> z(length);
    std::size_t rest = idx;
    for (std::size_t i = length; i-- > 0;) {
      z[i] = rest % a;
      rest /= a;
    }
    double v = init[z[0]];
    for (std::size_t i = 0; i + 1 < length; ++i) v *= chain.k(z[i], z[i + 1]);
    p[idx] = v;
  }
  double total = 0.0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return FiniteSequenceLaw(a, length, std::move(p));
}

template <typename Scalar>
Scalar eta_exact(const BasicSequenceLaw<Scalar>& law, std::size_t s) {
  return eta_core(law, s, false);
}

template <typename Scalar>
Scalar eta_bar_exact(const BasicSequenceLaw<Scalar>& law, std::size_t s) {
  return eta_core(law, s, true);
}

template double eta_exact(const FiniteSequenceLaw&, std::size_t);
template mpq_class eta_exact(const RationalSequenceLaw&, std::size_t);
template double eta_bar_exact(const FiniteSequenceLaw&, std::size_t);
template mpq_class eta_bar_exact(const RationalSequenceLaw&, std::size_t);

template <typename Scalar>
Scalar eta_event_tv(const BasicSequenceLaw<Scalar>& law, const std::vector<std::uint32_t>& events,
                    std::size_t s, bool tail) {
  const std::size_t n = events.size();
  const std::size_t a = law.alphabet();
  require(n >= 1 && s >= 1 && n + s <= law.length(), "eta_event_tv: need n >= 1, n + s <= N");
  const auto coords = target_coords<Scalar>(n, s, law.length(), tail);
  std::vector<Scalar> arr = law.marginal(coords);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t stride = arr.size() / a;
    std::vector<Scalar> next(stride);
    for (std::size_t x = 0; x < a; ++x) {
      if (!(events[i] >> x & 1u)) continue;
      for (std::size_t r = 0; r < stride; ++r) next[r] += arr[x * stride + r];
    }
    arr.swap(next);
  }
  const std::size_t w = arr.size() / a;
  std::vector<Scalar> p0(w);
  std::vector<Scalar> p1(w);
  Scalar t0 = 0;
  Scalar t1 = 0;
  for (std::size_t k = 0; k < w; ++k) {
    for (std::size_t x = 0; x < a; ++x) {
      p0[k] += arr[x * w + k];
      if (events[n - 1] >> x & 1u) p1[k] += arr[x * w + k];
    }
    t0 += p0[k];
    t1 += p1[k];
  }
  if (t1 == 0) return Scalar(0);
  return normalised_tv(p1.data(), t1, p0.data(), t0, w);
}

template double eta_event_tv(const FiniteSequenceLaw&, const std::vector<std::uint32_t>&,
                             std::size_t, bool);
template mpq_class eta_event_tv(const RationalSequenceLaw&, const std::vector<std::uint32_t>&,
                                std::size_t, bool);

template <typename Scalar>
Scalar eta_hat_kr(const BasicSequenceLaw<Scalar>& law, std::size_t n, std::size_t s) {
  const std::size_t length = law.length();
  require(n >= 1 && s >= 1 && n + s <= length, "eta_hat_kr: need n, s >= 1 and n + s <= N");
  const std::size_t a = law.alphabet();
  const auto joint = law.marginal(target_coords<Scalar>(n, s, length, true));
  const std::size_t w = joint.size() / checked_power(a, n);
  const std::size_t prefixes = checked_power(a, n - 1);
  std::vector<Scalar> totals(a);
  Scalar best = 0;
  for (std::size_t q = 0; q < prefixes; ++q) {
    const Scalar* base = joint.data() + q * a * w;
    for (std::size_t x = 0; x < a; ++x) {
      totals[x] = 0;
      for (std::size_t k = 0; k < w; ++k) totals[x] += base[x * w + k];
    }
    for (std::size_t x = 0; x < a; ++x) {
      if (totals[x] == 0) continue;
      for (std::size_t y = x + 1; y < a; ++y) {
        if (totals[y] == 0) continue;
        Scalar tv = normalised_tv(base + x * w, totals[x], base + y * w, totals[y], w);
        if (tv > best) best = tv;
      }
    }
  }
  return best;
}

template <typename Scalar>
Scalar eta_hat_sup(const BasicSequenceLaw<Scalar>& law, std::size_t s) {
  require(s >= 1 && s < law.length(), "eta_hat_sup: need 1 <= s < N");
  Scalar best = 0;
  for (std::size_t n = 1; n + s <= law.length(); ++n) {
    Scalar v = eta_hat_kr(law, n, s);
    if (v > best) best = v;
  }
  return best;
}

template double eta_hat_kr(const FiniteSequenceLaw&, std::size_t, std::size_t);
template mpq_class eta_hat_kr(const RationalSequenceLaw&, std::size_t, std::size_t);
template double eta_hat_sup(const FiniteSequenceLaw&, std::size_t);
template mpq_class eta_hat_sup(const RationalSequenceLaw&, std::size_t);

template <typename Scalar>
Scalar phi_exact(const BasicSequenceLaw<Scalar>& law, std::size_t s) {
  const std::size_t length = law.length();
  require(s >= 1 && s < length, "phi_exact: need 1 <= s < N");
  const std::size_t a = law.alphabet();
  Scalar best = 0;
  for (std::size_t n = 1; n + s <= length; ++n) {
    const auto joint = law.marginal(target_coords<Scalar>(n, s, length, false));
    const std::size_t prefixes = joint.size() / a;
    std::vector<Scalar> marg(a);
    for (std::size_t q = 0; q < prefixes; ++q) {
      for (std::size_t b = 0; b < a; ++b) marg[b] += joint[q * a + b];
    }
    const Scalar one = 1;
    for (std::size_t q = 0; q < prefixes; ++q) {
      Scalar total = 0;
      for (std::size_t b = 0; b < a; ++b) total += joint[q * a + b];
      if (total == 0) continue;
      Scalar tv = normalised_tv(joint.data() + q * a, total, marg.data(), one, a);
      if (tv > best) best = tv;
    }
  }
  return best;
}

template double phi_exact(const FiniteSequenceLaw&, std::size_t);
template mpq_class phi_exact(const RationalSequenceLaw&, std::size_t);

MixingProfile mixing_profile(const FiniteSequenceLaw& law) {
  MixingProfile p;
  for (std::size_t s = 1; s < law.length(); ++s) {
    p.eta.push_back(eta_exact(law, s));
    p.eta_bar.push_back(eta_bar_exact(law, s));
    p.eta_sum += 2.0 * p.eta.back();
    p.eta_bar_sum += p.eta_bar.back();
  }
  return p;
}

double eta_bar_markov(const FiniteMarkovChain& chain, std::size_t length, std::size_t s) {
  chain.validate();
  require(s >= 1 && s < length, "eta_bar_markov: need 1 <= s < N");
  const std::size_t a = chain.states;
  require(a <= 16, "eta_bar_markov: at most 16 states");
  const std::vector<double> init = chain.initial.empty() ? stationary_distribution(chain) : chain.initial;
  auto step = [&](const std::vector<double>& v) {
    std::vector<double> out(a, 0.0);
    for (std::size_t i = 0; i < a; ++i) {
      if (v[i] == 0.0) continue;
      for (std::size_t j = 0; j < a; ++j) out[j] += v[i] * chain.k(i, j);
    }
    return out;
  };
  auto steps = [&](std::vector<double> v, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) v = step(v);
    return v;
  };
  auto restrict_to = [&](const std::vector<double>& v, std::uint32_t mask) {
    std::vector<double> out(a, 0.0);
    for (std::size_t i = 0; i < a; ++i) {
      if (mask >> i & 1u) out[i] = v[i];
    }
    return out;
  };
  auto tv = [&](const std::vector<double>& p, const std::vector<double>& q) {
    double tp = 0.0;
    double tq = 0.0;
    for (std::size_t i = 0; i < a; ++i) {
      tp += p[i];
      tq += q[i];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a; ++i) acc += std::abs(p[i] / tp - q[i] / tq);
    return 0.5 * acc;
  };
  const std::uint32_t masks = (1u << a) - 1u;
  double best = 0.0;
  // beta = P(Z_n = ., Z_{1:n-1} in A_{1:n-1}).
  std::function<void(const std::vector<double>&, std::size_t, std::size_t)> walk =
      [&](const std::vector<double>& beta, std::size_t depth, std::size_t n) {
        if (depth == n) {
          const auto base = steps(beta, s);
          for (std::uint32_t mask = 1; mask <= masks; ++mask) {
            const auto alpha = restrict_to(beta, mask);
            double mass = 0.0;
            for (double x : alpha) mass += x;
            if (mass <= 0.0) continue;
            best = std::max(best, tv(steps(alpha, s), base));
          }
          return;
        }
        for (std::uint32_t mask = 1; mask <= masks; ++mask) {
          const auto alpha = restrict_to(beta, mask);
          double mass = 0.0;
          for (double x : alpha) mass += x;
          if (mass <= 0.0) continue;
          walk(step(alpha), depth + 1, n);
        }
      };
  for (std::size_t n = 1; n + s <= length; ++n) {
    check_events(a, n);
    walk(init, 1, n);
  }
  return best;
}

double eta_bound_memory_chain(double rho, std::size_t lag, std::size_t s) {
  require(rho >= 0.0 && rho < 1.0, "eta_bound_memory_chain: rho must lie in [0, 1)");
  require(lag >= 1 && s >= 1, "eta_bound_memory_chain: D and s must be >= 1");
  const double e = static_cast<double>(lag * s) - 1.0;
  return std::min(1.0, 2.0 * std::pow(rho, e));
}

double eta_bound_uniformly_ergodic(double c, double rho, std::size_t s) {
  require(c >= 0.0, "eta_bound_uniformly_ergodic: C must be >= 0");
  require(rho >= 0.0 && rho < 1.0, "eta_bound_uniformly_ergodic: rho must lie in [0, 1)");
  return std::min(1.0, c * std::pow(rho, static_cast<double>(s)));
}

double phi_bound_from_eta(const std::vector<double>& eta, std::size_t s, std::size_t length) {
  require(s >= 1 && s < length, "phi_bound_from_eta: need 1 <= s < N");
  require(eta.size() + 1 >= length, "phi_bound_from_eta: eta profile too short");
  double acc = 0.0;
  for (std::size_t k = s; k < length; ++k) acc += eta[k - 1];
  return std::clamp(acc, 0.0, 1.0);
}

BoundCheck covariance_bound_check(const FiniteSequenceLaw& law, const std::vector<double>& f,
                                  std::size_t i, std::size_t j) {
  const std::size_t a = law.alphabet();
  require(f.size() == a, "covariance_bound_check: f must be given on the alphabet");
  require(j >= 1 && j < i && i <= law.length(), "covariance_bound_check: need 1 <= j < i <= N");
  double fmax = 0.0;
  for (double v : f) {
    require(v >= 0.0 && std::isfinite(v), "covariance_bound_check: f must be finite and >= 0");
    fmax = std::max(fmax, v);
  }
  const auto pair = law.marginal({j, i});
  double efj = 0.0;
  double efi = 0.0;
  double eff = 0.0;
  for (std::size_t x = 0; x < a; ++x) {
    for (std::size_t y = 0; y < a; ++y) {
      const double p = pair[x * a + y];
      efj += p * f[x];
      efi += p * f[y];
      eff += p * f[x] * f[y];
    }
  }
  BoundCheck out;
  out.lhs = eff - efi * efj;
  out.rhs = eta_exact(law, i - j) * fmax * efj;
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

BoundCheck variance_bound_check(const FiniteSequenceLaw& law, const std::vector<double>& f) {
  const std::size_t a = law.alphabet();
  const std::size_t n = law.length();
  require(f.size() == a, "variance_bound_check: f must be given on the alphabet");
  double fmax = 0.0;
  for (double v : f) {
    require(v >= 0.0 && std::isfinite(v), "variance_bound_check: f must be finite and >= 0");
    fmax = std::max(fmax, v);
  }
  const auto first = law.marginal({1});
  for (std::size_t i = 2; i <= n; ++i) {
    const auto m = law.marginal({i});
    for (std::size_t x = 0; x < a; ++x) {
      require(std::abs(m[x] - first[x]) <= 1e-12,
              "variance_bound_check: marginals are not identically distributed");
    }
  }
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t idx = 0; idx < law.states(); ++idx) {
    const double p = law.prob(idx);
    if (p == 0.0) continue;
    double avg = 0.0;
    for (std::size_t i = 1; i <= n; ++i) avg += f[law.symbol(idx, i)];
    avg /= static_cast<double>(n);
    mean += p * avg;
    second += p * avg * avg;
  }
  double ef1 = 0.0;
  for (std::size_t x = 0; x < a; ++x) ef1 += first[x] * f[x];
  double eta_sum = 1.0;
  for (std::size_t s = 1; s < n; ++s) eta_sum += 2.0 * eta_exact(law, s);
  BoundCheck out;
  out.lhs = std::max(0.0, second - mean * mean);
  out.rhs = fmax * ef1 * eta_sum / static_cast<double>(n);
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

mpq_class parse_rational(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  auto bad = [&]() { return IoError("cannot parse probability '" + text + "'"); };
  if (t.empty()) throw bad();
  const auto slash = t.find('/');
  auto integer = [&](const std::string& s) {
    std::size_t k = (s.size() > 0 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (k == s.size()) throw bad();
    for (std::size_t i = k; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw bad();
    }
    return mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
  };
  if (slash != std::string::npos) {
    const mpz_class num = integer(t.substr(0, slash));
    const mpz_class den = integer(t.substr(slash + 1));
    if (den == 0) throw bad();
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (t[pos] == '+' || t[pos] == '-') negative = t[pos++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < t.size(); ++pos) {
    const char c = t[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw bad();
  long exponent = 0;
  if (pos < t.size()) {
    if (t[pos] != 'e' && t[pos] != 'E') throw bad();
    const std::string e = t.substr(pos + 1);
    const mpz_class ez = integer(e);
    if (!ez.fits_slong_p() || abs(ez) > 10000) throw bad();
    exponent = ez.get_si();
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class q = shift < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
  q.canonicalize();
  return q;
}

LoadedLaw read_sequence_law_csv(const std::string& file) {
  const CsvTable table = read_csv(file);
  const auto& h = table.header;
  if (h.size() < 2 || h.back() != "prob") throw IoError(file + ": header must be z_1,...,z_N,prob");
  const std::size_t n = h.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] != "z_" + std::to_string(i + 1)) {
      throw IoError(file + ": expected column z_" + std::to_string(i + 1));
    }
  }
  std::set<std::string> symbols;
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < n; ++i) symbols.insert(row[i]);
  }
  std::vector<std::string> labels(symbols.begin(), symbols.end());
  bool numeric = true;
  for (const auto& l : labels) {
    try {
      parse_number(l);
    } catch (const IoError&) {
      numeric = false;
    }
  }
  if (numeric) {
    std::stable_sort(labels.begin(), labels.end(), [](const std::string& x, const std::string& y) {
      return parse_number(x) < parse_number(y);
    });
  }
  if (labels.empty()) throw IoError(file + ": no data rows");
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < labels.size(); ++k) index[labels[k]] = k;
  const std::size_t a = labels.size();
  std::vector<mpq_class> prob(checked_power(a, n));
  std::vector<char> seen(prob.size(), 0);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) k = k * a + index[row[i]];
    if (seen[k]) {
      throw IoError(file + ":" + std::to_string(table.lines[r]) + ": duplicate sequence");
    }
    seen[k] = 1;
    prob[k] = parse_rational(row[n]);
  }
  mpq_class total = 0;
  for (const auto& p : prob) total += p;
  if (total != 1) {
    // Decimal inputs that are off by rounding are renormalised; anything
    // further away is an error.
    if (abs(total - 1) > mpq_class(1, 1000000000)) {
      throw IoError(file + ": probabilities sum to " + format_number(total.get_d()) +
                    ", expected 1");
    }
    for (auto& p : prob) p /= total;
  }
  return LoadedLaw{std::move(labels), RationalSequenceLaw(a, n, std::move(prob))};
}

}  // namespace awe

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

// awe: command-line front end.
//
//   awe aw a.csv b.csv
//   awe simulate --config exp.ini --lag 5 --n 1000 --out sample.csv
//   awe estimate --sample sample.csv [--reference ref.csv] [--out measure.csv]
//   awe mixing --law law.csv [--s 1] [--exact]
//   awe bounds rate-inf --n 1000 --d 1 --t 2
//   awe experiment --config exp.ini --out out/ [--threads 8]

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "awe/adapted_ot.hpp"
#include "awe/bounds.hpp"
#include "awe/error.hpp"
#include "awe/experiments.hpp"
#include "awe/format.hpp"
#include "awe/mixing.hpp"
#include "awe/path_measure.hpp"
#include "awe/processes.hpp"

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t threads = 1;
  std::string out;
};

void print(double v) { std::cout << awe::format_number(v, 12) << '\n'; }

std::string rational_string(const mpq_class& q) { return q.get_str(); }

void run_mixing(const std::string& file, std::optional<std::size_t> s_only, bool exact) {
  const awe::LoadedLaw loaded = awe::read_sequence_law_csv(file);
  const auto& law = loaded.law;
  const std::size_t n = law.length();
  awe::require(n >= 2, "mixing: the law needs at least two coordinates");
  std::vector<std::size_t> lags;
  if (s_only) {
    awe::require(*s_only >= 1 && *s_only < n, "mixing: --s must lie in [1, N-1]");
    lags.push_back(*s_only);
  } else {
    for (std::size_t s = 1; s < n; ++s) lags.push_back(s);
  }
  std::cout << (exact ? "coefficient,s,value,exact\n" : "coefficient,s,value\n");
  if (exact) {
    auto line = [](const char* name, std::size_t s, const mpq_class& v) {
      std::cout << name << ',' << s << ',' << awe::format_number(v.get_d(), 12) << ','
                << rational_string(v) << '\n';
    };
    for (std::size_t s : lags) {
      line("eta", s, awe::eta_exact(law, s));
      line("eta_bar", s, awe::eta_bar_exact(law, s));
      line("eta_hat", s, awe::eta_hat_sup(law, s));
      line("phi", s, awe::phi_exact(law, s));
    }
    return;
  }
  const awe::FiniteSequenceLaw dl = awe::to_double(law);
  for (std::size_t s : lags) {
    auto line = [s](const char* name, double v) {
      std::cout << name << ',' << s << ',' << awe::format_number(v, 12) << '\n';
    };
    line("eta", awe::eta_exact(dl, s));
    line("eta_bar", awe::eta_bar_exact(dl, s));
    line("eta_hat", awe::eta_hat_sup(dl, s));
    line("phi", awe::phi_exact(dl, s));
  }
  if (!s_only) {
    const awe::MixingProfile p = awe::mixing_profile(dl);
    std::cout << "eta_sum,," << awe::format_number(p.eta_sum, 12) << '\n';
    std::cout << "eta_bar_sum,," << awe::format_number(p.eta_bar_sum, 12) << '\n';
  }
}

void add_bounds(CLI::App& app) {
  auto* bounds = app.add_subcommand("bounds", "Evaluate closed-form rate and concentration bounds");
  bounds->require_subcommand(1);

  struct Args {
    double n = 1000;
    std::size_t d = 1;
    std::size_t t = 2;
    double p = awe::kInfiniteMoment;
    double eps = 0.1;
    double diam = 1.0;
    double ebs = 1.0;
    double es = 1.0;
    double c = 1.0;
    double alpha = 1.0;
    double e_mu = 1.0;
    double lipschitz = 1.0;
    double rho = 0.99;
    std::size_t lag = 1;
    std::size_t s = 1;
    std::vector<double> eta;
  };
  static Args a;

  auto* ri = bounds->add_subcommand("rate-inf", "N^{-1/(T+1)} style rate for compact support");
  ri->add_option("--n", a.n, "Sample size N")->required();
  ri->add_option("--d", a.d, "State dimension d")->capture_default_str();
  ri->add_option("--t", a.t, "Horizon T")->capture_default_str();
  ri->callback([] { print(awe::rate_inf(a.n, a.d, a.t)); });

  auto* rp = bounds->add_subcommand("rate-p", "Rate under a p-th moment condition");
  rp->add_option("--n", a.n, "Sample size N")->required();
  rp->add_option("--d", a.d, "State dimension d")->capture_default_str();
  rp->add_option("--t", a.t, "Horizon T")->capture_default_str();
  rp->add_option("--p", a.p, "Moment order p (inf allowed)")->capture_default_str();
  rp->callback([] { print(awe::rate_p(a.n, a.d, a.t, a.p)); });

  auto* mc = bounds->add_subcommand("moment-compact", "C sqrt(eta_sum) rate_inf(N)");
  mc->add_option("--n", a.n, "Sample size N")->required();
  mc->add_option("--d", a.d, "State dimension d")->capture_default_str();
  mc->add_option("--t", a.t, "Horizon T")->capture_default_str();
  mc->add_option("--eta-sum", a.es, "1 + 2 sum eta(s)")->capture_default_str();
  mc->add_option("--c", a.c, "Constant C")->capture_default_str();
  mc->callback([] {
    awe::RateSpec spec;
    spec.d = a.d;
    spec.horizon = a.t;
    spec.eta_sum = a.es;
    spec.c_moment = a.c;
    print(awe::moment_bound_compact(a.n, spec));
  });

  auto* cc = bounds->add_subcommand("concentration-compact", "Compact-support deviation bound");
  cc->add_option("--n", a.n, "Sample size N")->required();
  cc->add_option("--eps", a.eps, "Deviation eps")->required();
  cc->add_option("--diam", a.diam, "Support diameter")->capture_default_str();
  cc->add_option("--eta-bar-sum", a.ebs, "1 + sum eta_bar(s)")->capture_default_str();
  cc->add_option("--c", a.c, "Constant c")->capture_default_str();
  cc->callback([] { print(awe::concentration_bound_compact(a.n, a.eps, a.diam, a.ebs, a.c)); });

  auto* cg = bounds->add_subcommand("concentration-general", "Light-tail deviation bound (eps >= Delta_N)");
  cg->add_option("--n", a.n, "Sample size N")->required();
  cg->add_option("--eps", a.eps, "Deviation eps")->required();
  cg->add_option("--alpha", a.alpha, "Tail exponent alpha")->capture_default_str();
  cg->add_option("--eta-bar-sum", a.ebs, "1 + sum eta_bar(s)")->capture_default_str();
  cg->add_option("--e-mu", a.e_mu, "Exponential moment E")->capture_default_str();
  cg->add_option("--c", a.c, "Constant c")->capture_default_str();
  cg->add_option("--d", a.d, "State dimension d")->capture_default_str();
  cg->add_option("--t", a.t, "Horizon T")->capture_default_str();
  cg->callback([] {
    awe::require(a.n >= 1.0, "concentration-general: N must be >= 1");
    print(awe::concentration_bound_general(static_cast<std::size_t>(a.n), a.eps, a.alpha, a.ebs,
                                           a.e_mu, a.c, a.d, a.t));
  });

  auto* bd = bounds->add_subcommand("bdd", "Bounded-differences deviation bound");
  bd->add_option("--n", a.n, "Sample size N")->required();
  bd->add_option("--eps", a.eps, "Deviation eps")->required();
  bd->add_option("--lipschitz", a.lipschitz, "Per-coordinate Lipschitz constant L")
      ->capture_default_str();
  bd->add_option("--eta-bar-sum", a.ebs, "1 + sum eta_bar(s)")->capture_default_str();
  bd->callback([] { print(awe::bdd_bound(a.n, a.lipschitz, a.eps, a.ebs)); });

  auto* em = bounds->add_subcommand("eta-memory", "min(1, 2 rho^{Ds-1}) for the memory chain");
  em->add_option("--rho", a.rho, "Memory rho")->capture_default_str();
  em->add_option("--lag", a.lag, "Slice stride D")->capture_default_str();
  em->add_option("--s", a.s, "Gap s")->capture_default_str();
  em->callback([] { print(awe::eta_bound_memory_chain(a.rho, a.lag, a.s)); });

  auto* eu = bounds->add_subcommand("eta-ergodic", "min(1, C rho^s) for uniformly ergodic chains");
  eu->add_option("--c", a.c, "Constant C")->capture_default_str();
  eu->add_option("--rho", a.rho, "Contraction rho")->capture_default_str();
  eu->add_option("--s", a.s, "Gap s")->capture_default_str();
  eu->callback([] { print(awe::eta_bound_uniformly_ergodic(a.c, a.rho, a.s)); });

  auto* pe = bounds->add_subcommand("phi-from-eta", "min(1, sum_{k>=s} eta(k))");
  pe->add_option("--eta", a.eta, "eta(1), ..., eta(N-1)")->required()->delimiter(',');
  pe->add_option("--s", a.s, "Gap s")->capture_default_str();
  pe->callback([] { print(awe::phi_bound_from_eta(a.eta, a.s, a.eta.size() + 1)); });
}

int run(int argc, char** argv) {
  CLI::App app{"Adapted Wasserstein estimation for dependent data"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed (default 0)")->each([&](const std::string&) {
    g.seed_given = true;
  });
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file or directory");

  std::string file_a;
  std::string file_b;
  auto* aw = app.add_subcommand("aw", "Adapted Wasserstein distance between two measure CSVs");
  aw->fallthrough();
  aw->add_option("a", file_a, "First measure CSV")->required()->check(CLI::ExistingFile);
  aw->add_option("b", file_b, "Second measure CSV")->required()->check(CLI::ExistingFile);
  aw->callback([&] {
    const auto mu = awe::read_path_measure_csv(file_a);
    const auto nu = awe::read_path_measure_csv(file_b);
    awe::AwOptions opts;
    opts.threads = g.threads;
    print(awe::aw_distance(mu, nu, opts).cost);
  });

  std::string config_file;
  std::size_t lag = 1;
  std::size_t n_slices = 1000;
  std::uint64_t replication = 0;
  auto* sim = app.add_subcommand("simulate", "Simulate sliced paths from the configured process");
  sim->fallthrough();
  sim->add_option("--config", config_file, "Experiment config (INI)")->required()->check(CLI::ExistingFile);
  sim->add_option("--lag", lag, "Slice stride D")->capture_default_str();
  sim->add_option("--n", n_slices, "Number of slices N")->capture_default_str();
  sim->add_option("--replication", replication, "Replication index")->capture_default_str();
  sim->callback([&] {
    auto config = awe::load_experiment_config(config_file);
    if (g.seed_given) config.seed = g.seed;
    awe::require(!g.out.empty(), "simulate: --out is required");
    awe::require(n_slices >= 1, "simulate: --n must be >= 1");
    awe::write_path_sample_csv(g.out, awe::simulate_slices(config, lag, n_slices, replication));
  });

  std::string sample_file;
  std::string reference_file;
  std::size_t smooth = 0;
  auto* est = app.add_subcommand("estimate", "Adapted empirical measure of a path sample");
  est->fallthrough();
  est->add_option("--sample", sample_file, "Path sample CSV")->required()->check(CLI::ExistingFile);
  est->add_option("--reference", reference_file, "Reference measure CSV; prints AW to it")
      ->check(CLI::ExistingFile);
  est->add_option("--smooth", smooth, "Noise samples per atom for the smoothed estimator (0 = off)")
      ->capture_default_str();
  est->callback([&] {
    const auto sample = awe::read_path_sample_csv(sample_file);
    const auto measure = smooth > 0 ? awe::smoothed_adapted_estimator(sample, smooth, g.seed)
                                    : awe::adapted_empirical_measure(sample);
    if (!g.out.empty()) awe::write_path_measure_csv(g.out, measure);
    if (!reference_file.empty()) {
      awe::AwOptions opts;
      opts.threads = g.threads;
      print(awe::aw_distance(awe::read_path_measure_csv(reference_file), measure, opts).cost);
    } else if (g.out.empty()) {
      std::cout << "atoms," << measure.size() << '\n';
    }
  });

  std::string law_file;
  std::size_t s_only = 0;
  bool exact = false;
  auto* mix = app.add_subcommand("mixing", "Exact mixing coefficients of a finite sequence law");
  mix->fallthrough();
  mix->add_option("--law", law_file, "Law CSV (z_1,...,z_N,prob)")->required()->check(CLI::ExistingFile);
  auto* s_opt = mix->add_option("--s", s_only, "Only this gap s");
  mix->add_flag("--exact", exact, "Rational arithmetic; adds an exact column");
  mix->callback([&] {
    run_mixing(law_file, s_opt->count() ? std::optional<std::size_t>(s_only) : std::nullopt, exact);
  });

  add_bounds(app);

  auto* exp = app.add_subcommand("experiment", "Run the Monte-Carlo experiments of a config");
  exp->fallthrough();
  std::string exp_config;
  exp->add_option("--config", exp_config, "Experiment config (INI)")->required()->check(CLI::ExistingFile);
  exp->callback([&] {
    auto config = awe::load_experiment_config(exp_config);
    if (g.seed_given) config.seed = g.seed;
    if (!g.out.empty()) config.out_dir = g.out;
    config.threads = g.threads;
    const auto outputs = awe::run_experiments(config);
    for (const auto& f : outputs.files) std::cout << f << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const awe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

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

// Monte-Carlo harness: convergence rate, concentration, consistency and
// bounded-differences checks, with CSV and SVG output.

#ifndef AWE_EXPERIMENTS_HPP_
#define AWE_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "awe/path_measure.hpp"
#include "awe/processes.hpp"

namespace awe {

enum class ProcessKind { kMemory, kSeasonal, kMarkov, kBernoulli };

struct ExperimentConfig {
  // [process]
  ProcessKind kind = ProcessKind::kMemory;
  double rho = 0.99;
  std::vector<std::size_t> lags = {2, 5, 10};
  double theta = 0.0;
  std::size_t tau = 1;
  std::vector<double> states;       // markov: state values
  std::vector<double> transition;   // markov: row-major kernel
  double p = 0.5;                   // bernoulli
  // [grid]
  std::vector<std::size_t> n_grid = {250, 500, 1000, 2000};
  std::size_t replications = 200;
  std::uint64_t seed = 0;
  std::size_t concentration_n = 1000;
  std::size_t concentration_replications = 500;
  std::size_t bins = 30;
  std::size_t noise_samples = 16;
  std::size_t bdd_n = 100;
  std::size_t bdd_replications = 2000;
  // [output]
  std::string out_dir = "out";
  bool calibrate = true;
  std::vector<std::string> experiments = {"rate", "concentration"};
  // Not part of the file; set by the caller.
  std::size_t threads = 1;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& file);

struct RunRecord {
  std::size_t lag = 0;
  std::size_t n = 0;
  std::size_t replication = 0;
  double aw_value = 0.0;  // NaN when the replication failed
  double wall_seconds = 0.0;
  std::string error;
};

struct RateRow {
  std::size_t lag = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double std_err = 0.0;
  double bound = 0.0;  // calibrated C sqrt(eta_sum) rate_inf(N)
  std::size_t failures = 0;
};

struct RateResult {
  std::vector<RateRow> rows;
  std::vector<RunRecord> runs;
  std::vector<std::size_t> lags;
  std::vector<double> calibrated_c;  // per lag
  std::vector<double> slope;         // log-log regression slope per lag
  std::vector<bool> decreasing;      // strictly decreasing means per lag
};

struct TailPoint {
  double eps = 0.0;
  double tail_fit = 0.0;   // calibration half
  double tail_test = 0.0;  // held-out half
  double bound = 0.0;
  double slack = 0.0;      // 3 binomial standard errors at the bound
  bool holds = true;
};

struct HistogramTable {
  std::size_t lag = 0;
  std::size_t n = 0;
  std::vector<double> edges;  // bins + 1 edges, shared across lags
  std::vector<std::size_t> counts;
  std::vector<double> values;  // AW per replication
  double mean = 0.0;
  double std_err = 0.0;
  double skewness = 0.0;
  double p95 = 0.0;
  double eta_bar_sum = 1.0;
  std::vector<TailPoint> tails;
  std::size_t failures = 0;
};

struct ConcentrationResult {
  std::vector<HistogramTable> per_lag;
  double diameter = 0.0;
  double calibrated_c = 0.0;
  bool tails_hold = true;
};

struct ConsistencyRow {
  std::size_t n = 0;
  double sigma = 0.0;
  double mean_plain = 0.0;
  double se_plain = 0.0;
  double mean_smoothed = 0.0;
  double se_smoothed = 0.0;
};

struct ConsistencyResult {
  std::size_t lag = 0;
  std::vector<ConsistencyRow> rows;
  bool halves = false;  // final mean <= initial mean / 2 (unsmoothed)
};

struct BddPoint {
  double eps = 0.0;
  double tail = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  double violation = 0.0;  // tail - bound - slack
};

struct BddReport {
  std::size_t n = 0;
  double lipschitz = 0.0;
  double eta_bar_sum = 1.0;
  std::vector<BddPoint> points;
  double max_violation = 0.0;
  bool holds = true;
};

// Reference slice law and simulator for the configured process.
DiscretePathMeasure reference_law(const ExperimentConfig& config, std::size_t lag);
PathSample simulate_slices(const ExperimentConfig& config, std::size_t lag, std::size_t n,
                           std::uint64_t replication);
// 1 + 2 sum_s eta(s) and 1 + sum_s eta_bar(s) from the closed-form bounds.
double eta_sum_bound(const ExperimentConfig& config, std::size_t lag, std::size_t n);
double eta_bar_sum_bound(const ExperimentConfig& config, std::size_t lag, std::size_t n);

// Runs f(0..count-1) on `threads` workers; results must be written by index.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& f);

RateResult run_rate_experiment(const ExperimentConfig& config);
ConcentrationResult run_concentration_experiment(const ExperimentConfig& config);
ConsistencyResult run_consistency_experiment(const ExperimentConfig& config);
BddReport run_bdd_check(const ExperimentConfig& config);

// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ExperimentOutputs {
  std::vector<std::string> files;
  bool rate_ran = false;
  RateResult rate;
  bool concentration_ran = false;
  ConcentrationResult concentration;
  bool consistency_ran = false;
  ConsistencyResult consistency;
  bool bdd_ran = false;
  BddReport bdd;
};

// Runs the configured experiments and writes rate.csv, runs.csv,
// hist_D<k>.csv, rate.svg, hist.svg, consistency.csv, bdd.csv and
// summary.txt (those that apply) into config.out_dir.
ExperimentOutputs run_experiments(const ExperimentConfig& config);

void emit_rate(const std::string& dir, const RateResult& r, std::vector<std::string>& files);
void emit_concentration(const std::string& dir, const ConcentrationResult& r,
                        std::vector<std::string>& files);

}  // namespace awe

#endif  // AWE_EXPERIMENTS_HPP_

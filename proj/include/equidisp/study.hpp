#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "equidisp/estimation.hpp"
#include "equidisp/types.hpp"

namespace equidisp {

struct EmptyAggregateError : NumericError {
  using NumericError::NumericError;
};

// One Monte-Carlo study cell: replicated sampling from a known truth
// followed by estimation.
struct StudyConfig {
  EquiDispParams truth{1.0, 4.0, 5.0};
  std::size_t sample_size = 100;
  std::size_t replicates = 100;
  std::uint64_t base_seed = 1;
  bool run_mle = true;
  bool run_pmle = true;
  // 1 runs the serial reference loop; 0 uses all available threads. The
  // summary is bit-identical for every value: replicate r always draws from
  // RandomStream(base_seed, r) and aggregation runs in replicate order.
  int parallelism = 0;
  QuadConfig quad;
  OptimConfig optim;

  void validate() const;
};

struct ParamStats {
  double mean = 0.0;
  double sd = 0.0;
  double ci_lo = 0.0;  // empirical 2.5% quantile of converged estimates
  double ci_hi = 0.0;  // empirical 97.5% quantile
};

struct EstimatorSummary {
  std::string estimator;  // "MLE" or "PMLE"
  std::size_t n_attempted = 0;
  std::size_t n_converged = 0;
  // alpha, beta, gamma in that order.
  std::array<ParamStats, 3> params{};
};

struct StudySummary {
  std::size_t sample_size = 0;
  std::size_t replicates = 0;
  std::vector<EstimatorSummary> estimators;
  double wall_time_seconds = 0.0;
};

// Runs the study. Non-converged or failed replicates are counted and
// excluded from the aggregates; if every replicate of an estimator fails,
// EmptyAggregateError is thrown.
StudySummary run_study(const StudyConfig& cfg);

enum class TableFormat { Csv, Json };

// One row per (n, estimator, parameter):
// n,estimator,param,mean,sd,ci_lo,ci_hi,attempted,converged.
std::string summary_table(const std::vector<StudySummary>& summaries,
                          TableFormat format);

// Linear-interpolation empirical quantile of a sorted vector (exposed for
// tests).
double sorted_quantile(const std::vector<double>& sorted_values, double p);

}  // namespace equidisp

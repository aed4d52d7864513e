#include "equidisp/study.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "equidisp/model.hpp"
#include "equidisp/random.hpp"

namespace equidisp {

void StudyConfig::validate() const {
  if (replicates < 2)
    throw std::invalid_argument("StudyConfig: replicates must be >= 2");
  if (sample_size < 5)
    throw std::invalid_argument("StudyConfig: sample_size must be >= 5");
  if (!run_mle && !run_pmle)
    throw std::invalid_argument("StudyConfig: no estimator requested");
  quad.validate();
  optim.validate();
}

double sorted_quantile(const std::vector<double>& v, double p) {
  if (v.empty())
    throw std::invalid_argument("sorted_quantile: empty input");
  if (v.size() == 1) return v.front();
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double w = h - std::floor(h);
  return v[lo] + w * (v[hi] - v[lo]);
}

namespace {

struct ReplicateOutcome {
  bool attempted = false;
  bool converged = false;
  std::array<double, 3> estimate{};  // alpha, beta, gamma
};

struct ReplicateRecord {
  ReplicateOutcome mle;
  ReplicateOutcome pmle;
};

EstimatorSummary aggregate(const std::string& name,
                           const std::vector<ReplicateRecord>& records,
                           bool use_mle) {
  EstimatorSummary out;
  out.estimator = name;

  std::array<std::vector<double>, 3> values;
  for (const ReplicateRecord& rec : records) {
    const ReplicateOutcome& o = use_mle ? rec.mle : rec.pmle;
    if (!o.attempted) continue;
    ++out.n_attempted;
    if (!o.converged) continue;
    ++out.n_converged;
    for (std::size_t k = 0; k < 3; ++k) values[k].push_back(o.estimate[k]);
  }
  if (out.n_converged == 0)
    throw EmptyAggregateError("run_study: every " + name +
                              " replicate failed to converge");

  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double>& v = values[k];
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    ParamStats& st = out.params[k];
    st.mean = mean;
    st.sd = (v.size() > 1) ? std::sqrt(ss / (n - 1.0)) : 0.0;
    st.ci_lo = sorted_quantile(v, 0.025);
    st.ci_hi = sorted_quantile(v, 0.975);
  }
  return out;
}

}  // namespace

StudySummary run_study(const StudyConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const NormalizedModel truth_model(cfg.truth, cfg.quad);
  std::vector<ReplicateRecord> records(cfg.replicates);

  auto run_replicate = [&](std::size_t r) {
    ReplicateRecord& rec = records[r];
    RandomStream rng(cfg.base_seed, r + 1);
    Sample2D sample_r;
    try {
      sample_r = sample(truth_model, cfg.sample_size, rng);
    } catch (const std::exception&) {
      return;  // replicate lost for both estimators, counted as attempted=no
    }

    FitReport pmle_report;
    bool have_pmle = false;
    if (cfg.run_pmle || cfg.run_mle) {
      rec.pmle.attempted = cfg.run_pmle;
      try {
        pmle_report = fit_pmle(sample_r);
        have_pmle = true;
        if (cfg.run_pmle) {
          rec.pmle.converged = pmle_report.converged;
          rec.pmle.estimate = {pmle_report.estimate("alpha"),
                               pmle_report.estimate("beta"),
                               pmle_report.estimate("gamma")};
        }
      } catch (const std::exception&) {
        have_pmle = false;
      }
    }

    if (cfg.run_mle) {
      rec.mle.attempted = true;
      try {
        std::optional<EquiDispParams> init;
        if (have_pmle)
          init = EquiDispParams(std::max(pmle_report.estimate("alpha"), 1e-6),
                                std::max(pmle_report.estimate("beta"), 1e-6),
                                std::max(pmle_report.estimate("gamma"), 0.0));
        const FitReport mle_report =
            fit_mle(sample_r, init, cfg.quad, cfg.optim);
        rec.mle.converged = mle_report.converged;
        rec.mle.estimate = {mle_report.estimate("alpha"),
                            mle_report.estimate("beta"),
                            mle_report.estimate("gamma")};
      } catch (const std::exception&) {
        rec.mle.converged = false;
      }
    }
  };

  if (cfg.parallelism == 1) {
    // Serial reference path.
    for (std::size_t r = 0; r < cfg.replicates; ++r) run_replicate(r);
  } else {
    const int nthreads =
        cfg.parallelism > 0 ? cfg.parallelism : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::size_t r = 0; r < cfg.replicates; ++r) run_replicate(r);
  }

  StudySummary out;
  out.sample_size = cfg.sample_size;
  out.replicates = cfg.replicates;
  if (cfg.run_mle) out.estimators.push_back(aggregate("MLE", records, true));
  if (cfg.run_pmle)
    out.estimators.push_back(aggregate("PMLE", records, false));

  out.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

std::string summary_table(const std::vector<StudySummary>& summaries,
                          TableFormat format) {
  if (summaries.empty())
    throw std::invalid_argument("summary_table: no summaries");

  static constexpr const char* kParamNames[3] = {"alpha", "beta", "gamma"};

  if (format == TableFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const StudySummary& s : summaries) {
      for (const EstimatorSummary& e : s.estimators) {
        for (std::size_t k = 0; k < 3; ++k) {
          rows.push_back({{"n", s.sample_size},
                          {"estimator", e.estimator},
                          {"param", kParamNames[k]},
                          {"mean", e.params[k].mean},
                          {"sd", e.params[k].sd},
                          {"ci_lo", e.params[k].ci_lo},
                          {"ci_hi", e.params[k].ci_hi},
                          {"attempted", e.n_attempted},
                          {"converged", e.n_converged}});
        }
      }
    }
    return rows.dump(2);
  }

  std::ostringstream out;
  out << "n,estimator,param,mean,sd,ci_lo,ci_hi,attempted,converged\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  for (const StudySummary& s : summaries) {
    for (const EstimatorSummary& e : s.estimators) {
      for (std::size_t k = 0; k < 3; ++k) {
        out << s.sample_size << ',' << e.estimator << ',' << kParamNames[k]
            << ',' << fmt(e.params[k].mean) << ',' << fmt(e.params[k].sd)
            << ',' << fmt(e.params[k].ci_lo) << ',' << fmt(e.params[k].ci_hi)
            << ',' << e.n_attempted << ',' << e.n_converged << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace equidisp

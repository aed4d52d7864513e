// Timing harness comparing the serial reference paths against the
// OpenMP-parallel kernels (density grids and study replicates).

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "equidisp/model.hpp"
#include "equidisp/study.hpp"

using namespace equidisp;

namespace {

template <typename F>
double time_seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads available: %d\n\n", threads);

  {
    const NormalizedModel m(EquiDispParams(1.0, 4.0, 5.0), QuadConfig{});
    const GridSpec spec{-10.0, 15.0, -10.0, 15.0, 1200, 1200};
    std::vector<GridCell> serial_cells, parallel_cells;
    const double t_serial =
        time_seconds([&] { serial_cells = density_grid(m, spec, 1); });
    const double t_parallel =
        time_seconds([&] { parallel_cells = density_grid(m, spec, 0); });
    bool identical = serial_cells.size() == parallel_cells.size();
    for (std::size_t i = 0; identical && i < serial_cells.size(); ++i)
      identical = serial_cells[i].density == parallel_cells[i].density;
    std::printf("density_grid 1200x1200: serial %.3fs, parallel %.3fs "
                "(speedup %.2fx, outputs %s)\n",
                t_serial, t_parallel, t_serial / t_parallel,
                identical ? "bit-identical" : "DIFFER");
  }

  {
    StudyConfig cfg;
    cfg.truth = EquiDispParams(1.0, 4.0, 5.0);
    cfg.sample_size = 100;
    cfg.replicates = 24;
    cfg.base_seed = 99;
    StudySummary serial_summary, parallel_summary;
    cfg.parallelism = 1;
    const double t_serial =
        time_seconds([&] { serial_summary = run_study(cfg); });
    cfg.parallelism = 0;
    const double t_parallel =
        time_seconds([&] { parallel_summary = run_study(cfg); });
    bool identical = true;
    for (std::size_t e = 0; e < serial_summary.estimators.size(); ++e)
      for (std::size_t k = 0; k < 3; ++k)
        identical = identical &&
                    serial_summary.estimators[e].params[k].mean ==
                        parallel_summary.estimators[e].params[k].mean &&
                    serial_summary.estimators[e].params[k].sd ==
                        parallel_summary.estimators[e].params[k].sd;
    std::printf("run_study n=100 x24 replicates: serial %.3fs, parallel "
                "%.3fs (speedup %.2fx, summaries %s)\n",
                t_serial, t_parallel, t_serial / t_parallel,
                identical ? "bit-identical" : "DIFFER");
  }

  return 0;
}

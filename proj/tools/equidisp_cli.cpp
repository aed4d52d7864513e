// Command-line front end: fit, compare, simulate, lrt, grid, study.
//
// Exit codes: 0 success, 1 input/usage error, 2 non-converged fit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "equidisp/csv.hpp"
#include "equidisp/estimation.hpp"
#include "equidisp/model.hpp"
#include "equidisp/pseudo.hpp"
#include "equidisp/study.hpp"
#include "equidisp/univariate.hpp"

using nlohmann::json;
using namespace equidisp;

namespace {

json report_to_json(const FitReport& r) {
  json estimates = json::object();
  for (const auto& [name, value] : r.estimates) estimates[name] = value;
  return json{{"model", r.model_name},
              {"estimates", estimates},
              {"loglik", r.log_likelihood},
              {"aic", r.aic},
              {"n_params", r.n_params},
              {"converged", r.converged},
              {"iterations", r.iterations},
              {"notes", r.notes}};
}

int run_fit(const std::string& input, const std::string& x_col,
            const std::string& y_col, const std::string& model) {
  const Sample2D s = load_xy_csv(input, x_col, y_col);
  FitReport report;
  if (model == "equidisp-mle")
    report = fit_mle(s);
  else if (model == "equidisp-pmle")
    report = fit_pmle(s);
  else if (model == "equidisp-indep")
    report = fit_independent_equidisp(s);
  else if (model == "bvn")
    report = fit_bivariate_normal(s, false);
  else if (model == "bvn-indep")
    report = fit_bivariate_normal(s, true);
  else if (model == "pseudo")
    report = pseudo_fit(s);
  else
    throw std::invalid_argument("unknown model: " + model);

  std::cout << report_to_json(report).dump(2) << "\n";
  return report.converged ? 0 : 2;
}

int run_compare(const std::string& input, const std::string& x_col,
                const std::string& y_col) {
  const Sample2D s = load_xy_csv(input, x_col, y_col);
  const ModelComparison cmp = compare_models(s, QuadConfig{}, OptimConfig{});
  json ranked = json::array();
  for (const FitReport& r : cmp.ranked) ranked.push_back(report_to_json(r));
  std::cout << json{{"ranked", ranked}, {"failures", cmp.failures}}.dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bivariate equi-dispersed normal conditionals toolkit"};
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "Fit one model to a two-column CSV");
  std::string fit_input, fit_x_col, fit_y_col, fit_model;
  fit->add_option("--input", fit_input, "CSV file with a header row")
      ->required();
  fit->add_option("--x-col", fit_x_col, "column name for x (default: first)");
  fit->add_option("--y-col", fit_y_col, "column name for y (default: second)");
  fit->add_option("--model", fit_model, "model to fit")
      ->required()
      ->check(CLI::IsMember({"equidisp-mle", "equidisp-pmle", "equidisp-indep",
                             "bvn", "bvn-indep", "pseudo"}));

  // compare ------------------------------------------------------------
  auto* compare =
      app.add_subcommand("compare", "Fit the four competing models, rank by AIC");
  std::string cmp_input, cmp_x_col, cmp_y_col;
  compare->add_option("--input", cmp_input, "CSV file")->required();
  compare->add_option("--x-col", cmp_x_col, "column name for x");
  compare->add_option("--y-col", cmp_y_col, "column name for y");

  // simulate -----------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Draw a sample, write x,y CSV");
  double sim_alpha = 1.0, sim_beta = 4.0, sim_gamma = 5.0;
  double sim_tau1 = 1.0, sim_tau2 = 2.0, sim_tau3 = 0.5;
  bool sim_pseudo = false;
  std::size_t sim_n = 0;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  simulate->add_option("--alpha", sim_alpha, "alpha > 0");
  simulate->add_option("--beta", sim_beta, "beta > 0");
  simulate->add_option("--gamma", sim_gamma, "gamma >= 0");
  simulate->add_flag("--pseudo", sim_pseudo,
                     "draw from the pseudo model (tau1, tau2, tau3) instead");
  simulate->add_option("--tau1", sim_tau1, "pseudo model tau1 != 0");
  simulate->add_option("--tau2", sim_tau2, "pseudo model link intercept");
  simulate->add_option("--tau3", sim_tau3, "pseudo model link slope");
  simulate->add_option("-n,--n", sim_n, "number of pairs")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  // lrt ------------------------------------------------------------------
  auto* lrt = app.add_subcommand(
      "lrt", "Likelihood ratio test of mean == variance on one column");
  std::string lrt_input, lrt_col;
  lrt->add_option("--input", lrt_input, "CSV file")->required();
  lrt->add_option("--col", lrt_col, "column name (default: first)");

  // grid -----------------------------------------------------------------
  auto* grid =
      app.add_subcommand("grid", "Density table over a rectangular grid");
  double g_alpha = 1.0, g_beta = 4.0, g_gamma = 5.0;
  GridSpec spec{-10.0, 15.0, -10.0, 15.0, 200, 200};
  std::string grid_out;
  bool report_modes = false;
  grid->add_option("--alpha", g_alpha)->required();
  grid->add_option("--beta", g_beta)->required();
  grid->add_option("--gamma", g_gamma)->required();
  grid->add_option("--x-min", spec.x_min);
  grid->add_option("--x-max", spec.x_max);
  grid->add_option("--y-min", spec.y_min);
  grid->add_option("--y-max", spec.y_max);
  grid->add_option("--nx", spec.nx);
  grid->add_option("--ny", spec.ny);
  grid->add_option("--out", grid_out, "write CSV here instead of stdout");
  grid->add_flag("--report-modes", report_modes,
                 "print a local-maxima count as JSON instead of the table");

  // study ------------------------------------------------------------------
  auto* study = app.add_subcommand(
      "study", "Monte-Carlo recovery study over replicated samples");
  double st_alpha = 1.0, st_beta = 4.0, st_gamma = 5.0;
  std::vector<std::size_t> st_n = {100};
  std::size_t st_reps = 200;
  std::uint64_t st_seed = 1;
  std::vector<std::string> st_estimators = {"mle", "pmle"};
  std::string st_format = "csv";
  int st_parallelism = 0;
  bool st_full = false;
  study->add_option("--alpha", st_alpha, "true alpha")->required();
  study->add_option("--beta", st_beta, "true beta")->required();
  study->add_option("--gamma", st_gamma, "true gamma")->required();
  study->add_option("--n", st_n, "sample sizes")->delimiter(',');
  study->add_option("--replicates", st_reps, "replicates per sample size");
  study->add_option("--seed", st_seed, "base seed");
  study->add_option("--estimators", st_estimators, "subset of mle,pmle")
      ->delimiter(',');
  study->add_option("--format", st_format)
      ->check(CLI::IsMember({"csv", "json"}));
  study->add_option("--parallelism", st_parallelism,
                    "worker threads (1 = serial reference, 0 = all cores)");
  study->add_flag("--full-scale", st_full, "run 5000 replicates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
  }

  try {
    if (*fit) return run_fit(fit_input, fit_x_col, fit_y_col, fit_model);

    if (*compare) return run_compare(cmp_input, cmp_x_col, cmp_y_col);

    if (*simulate) {
      RandomStream rng(sim_seed, 0);
      Sample2D s;
      if (sim_pseudo) {
        s = pseudo_sample(PseudoParams(sim_tau1, sim_tau2, sim_tau3), sim_n,
                          rng);
      } else {
        const NormalizedModel m(EquiDispParams(sim_alpha, sim_beta, sim_gamma),
                                QuadConfig{});
        s = sample(m, sim_n, rng);
      }
      write_xy_csv(sim_out, s);
      return 0;
    }

    if (*lrt) {
      const std::vector<double> xs = load_column_csv(lrt_input, lrt_col);
      const LrtResult r = ueq_lrt(xs);
      std::cout << json{{"tau_hat", r.tau_hat},
                        {"lambda", r.lambda},
                        {"stat", r.stat},
                        {"p_value", r.p_value}}
                       .dump(2)
                << "\n";
      return 0;
    }

    if (*grid) {
      const NormalizedModel m(EquiDispParams(g_alpha, g_beta, g_gamma),
                              QuadConfig{});
      const auto cells = density_grid(m, spec);
      if (report_modes) {
        std::cout << json{{"modes", count_grid_modes(cells, spec)}}.dump()
                  << "\n";
        if (!grid_out.empty()) {
          std::ofstream out(grid_out);
          out << "x,y,density\n";
          out.precision(17);
          for (const GridCell& c : cells)
            out << c.x << ',' << c.y << ',' << c.density << '\n';
        }
        return 0;
      }
      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!grid_out.empty()) {
        file.open(grid_out);
        if (!file) throw ParseError("cannot open for writing: " + grid_out);
        out = &file;
      }
      *out << "x,y,density\n";
      out->precision(17);
      for (const GridCell& c : cells)
        *out << c.x << ',' << c.y << ',' << c.density << '\n';
      return 0;
    }

    if (*study) {
      StudyConfig cfg;
      cfg.truth = EquiDispParams(st_alpha, st_beta, st_gamma);
      cfg.replicates = st_full ? 5000 : st_reps;
      cfg.base_seed = st_seed;
      cfg.parallelism = st_parallelism;
      cfg.run_mle = false;
      cfg.run_pmle = false;
      for (const std::string& e : st_estimators) {
        if (e == "mle")
          cfg.run_mle = true;
        else if (e == "pmle")
          cfg.run_pmle = true;
        else
          throw std::invalid_argument("unknown estimator: " + e);
      }
      std::vector<StudySummary> summaries;
      for (std::size_t n : st_n) {
        cfg.sample_size = n;
        summaries.push_back(run_study(cfg));
      }
      std::cout << summary_table(summaries, st_format == "json"
                                                ? TableFormat::Json
                                                : TableFormat::Csv);
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "equidisp/model.hpp"
#include "equidisp/numerics.hpp"
#include "equidisp/types.hpp"

namespace equidisp {

// Outcome of any model fit. aic always equals 2*n_params - 2*log_likelihood;
// for the pseudo-likelihood fit the log_likelihood field holds the maximized
// pseudo-log-likelihood and notes says so.
struct FitReport {
  std::string model_name;
  std::vector<std::pair<std::string, double>> estimates;
  double log_likelihood = 0.0;
  int n_params = 0;
  double aic = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::string notes;

  double estimate(const std::string& name) const;
};

// Log pseudo-likelihood of the equi-dispersed conditionals model: the sum of
// both conditional log densities over the sample.
double pseudo_loglik(const Sample2D& s, const EquiDispParams& p);

// Analytic gradient of pseudo_loglik in (alpha, beta, gamma); its components
// are exactly the pseudo-likelihood estimating-equation residuals.
std::array<double, 3> pseudo_loglik_gradient(const Sample2D& s,
                                             const EquiDispParams& p);

// Full log-likelihood n log kappa - alpha*Sx2 - beta*Sy2 - gamma*Sx2y2
// + Sx + Sy, with kappa from the one-dimensional normalization.
double equidisp_loglik(const Sample2D& s, const EquiDispParams& p,
                       const QuadConfig& cfg);

// Pseudo-likelihood estimation by cyclic coordinate bisection: each
// estimating equation has a strictly decreasing left side in its own
// parameter, so every coordinate update is a bracketed root solve. An
// interior maximum at gamma <= 0 becomes the boundary solution gamma = 0
// with the other two equations re-solved there.
FitReport fit_pmle(const Sample2D& s);

// Maximum likelihood with the normalizing constant recomputed at every
// objective evaluation. init defaults to the pseudo-likelihood estimates.
FitReport fit_mle(const Sample2D& s,
                  std::optional<EquiDispParams> init = std::nullopt,
                  const QuadConfig& quad_cfg = {},
                  const OptimConfig& opt_cfg = {});

// gamma = 0 submodel: factorizes into two univariate equi-dispersed fits,
// mapped back through alpha = 1/(2 tau_x), beta = 1/(2 tau_y).
FitReport fit_independent_equidisp(const Sample2D& s);

// Closed-form Gaussian fit, with or without the covariance term.
FitReport fit_bivariate_normal(const Sample2D& s, bool independent);

struct ModelComparison {
  std::vector<FitReport> ranked;       // ascending AIC
  std::vector<std::string> failures;   // "model: reason" for fits that threw
};

// Fits the equi-dispersed conditionals model, its independence submodel and
// the two Gaussian competitors, then ranks by AIC.
ModelComparison compare_models(const Sample2D& s, const QuadConfig& quad_cfg,
                               const OptimConfig& opt_cfg);

}  // namespace equidisp

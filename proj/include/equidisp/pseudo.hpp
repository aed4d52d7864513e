#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "equidisp/estimation.hpp"
#include "equidisp/random.hpp"
#include "equidisp/types.hpp"

namespace equidisp {

// Parameter of the normal family with variance equal to the squared mean,
// N(tau, tau^2). tau may be negative, never zero.
struct VarMeanSqParam {
  explicit VarMeanSqParam(double v) : tau(v) {
    if (!std::isfinite(v) || v == 0.0)
      throw std::invalid_argument("VarMeanSqParam: tau must be nonzero");
  }
  double tau;
};

// Parameters of the pseudo joint model: X ~ N(tau1, tau1^2) and
// Y | X = x ~ N(tau(x), tau(x)^2) with the affine link tau(x) = tau2 + tau3*x.
struct PseudoParams {
  double tau1;
  double tau2;
  double tau3;

  PseudoParams(double t1, double t2, double t3) : tau1(t1), tau2(t2), tau3(t3) {
    if (!std::isfinite(t1) || !std::isfinite(t2) || !std::isfinite(t3))
      throw std::invalid_argument("PseudoParams: non-finite parameter");
    if (t1 == 0.0)
      throw std::invalid_argument("PseudoParams: tau1 must be nonzero");
  }

  double link(double x) const { return tau2 + tau3 * x; }
};

// Neighbourhood of tau = 0 excluded from the link; the conditional density
// degenerates there.
constexpr double kEpsilonTau = 1e-6;

// log density of N(tau, tau^2): -log(|tau| sqrt(2 pi)) - (x-tau)^2/(2 tau^2).
double vms_logpdf(double x, VarMeanSqParam p);

struct VmsFit {
  VarMeanSqParam tau_hat;
  double loglik;
};

// MLE in the var = mean^2 family. Stationary points solve
// n tau^2 + tau * sum(x) - sum(x^2) = 0; of the two real roots the one with
// the larger log-likelihood is returned, ties broken to the positive root.
VmsFit vms_mle(std::span<const double> xs);

// Joint log density of the pseudo model. Throws SingularLinkError when
// |tau(x)| < kEpsilonTau.
double pseudo_logpdf(const PseudoParams& p, double x, double y);

// Draws n pairs; X draws whose link would be singular are redrawn (counted,
// DegenerateLinkError if more than half of all draws are rejected).
Sample2D pseudo_sample(const PseudoParams& p, std::size_t n, RandomStream& rng);

struct DegenerateLinkError : NumericError {
  using NumericError::NumericError;
};

// Factorized MLE: tau1 from vms_mle on the x coordinate alone; (tau2, tau3)
// maximize the conditional term, started from least squares of y on x.
FitReport pseudo_fit(const Sample2D& s, const OptimConfig& opt_cfg = {});

}  // namespace equidisp

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "equidisp/errors.hpp"
#include "equidisp/random.hpp"

namespace equidisp {

// Parameter of the one-parameter equi-dispersed normal family N(tau, tau):
// tau is simultaneously the mean and the variance.
struct Tau {
  explicit Tau(double v) : value(v) {
    if (!std::isfinite(v) || !(v > 0.0))
      throw std::invalid_argument("Tau: value must be finite and > 0");
  }
  double value;
};

// log f(x; tau) = -0.5*log(2*pi*tau) - (x - tau)^2 / (2*tau).
double ueq_logpdf(double x, Tau tau);

// Log-likelihood of a sample at an arbitrary tau > 0 (used by the LRT and by
// test oracles).
double ueq_loglik(std::span<const double> xs, double tau);

// MLE: the unique positive root of tau^2 + tau - m2 = 0 with
// m2 = mean(x_i^2), i.e. tau_hat = sqrt(m2 + 1/4) - 1/2.
// Throws DegenerateSampleError when every observation is zero.
Tau ueq_mle(std::span<const double> xs);

struct LrtResult {
  double tau_hat;
  double mu_hat;
  double sigma2_hat;
  double lambda;   // restricted-vs-unrestricted likelihood ratio, in (0, 1]
  double stat;     // -2 log lambda
  double p_value;  // upper-tail chi^2_1 probability of stat
};

// Likelihood ratio test of mean == variance within the normal family.
// lambda is computed from the two maximized log-likelihoods directly.
LrtResult ueq_lrt(std::span<const double> xs);

// n independent draws from N(tau, tau).
std::vector<double> ueq_sample(Tau tau, std::size_t n, RandomStream& rng);

// Upper tail of the chi-square distribution with one degree of freedom.
double chisq1_sf(double x);

}  // namespace equidisp

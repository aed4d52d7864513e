#include "equidisp/univariate.hpp"

#include <algorithm>
#include <cmath>

namespace equidisp {

namespace {

double mean_of_squares(std::span<const double> xs) {
  if (xs.empty())
    throw std::invalid_argument("empty sample");
  double sum = 0.0;
  for (double x : xs) {
    if (!std::isfinite(x))
      throw std::invalid_argument("sample contains non-finite value");
    sum += x * x;
  }
  return sum / static_cast<double>(xs.size());
}

}  // namespace

double ueq_logpdf(double x, Tau tau) {
  const double t = tau.value;
  return -0.5 * std::log(2.0 * M_PI * t) - (x - t) * (x - t) / (2.0 * t);
}

double ueq_loglik(std::span<const double> xs, double tau) {
  const Tau t(tau);
  double ll = 0.0;
  for (double x : xs) ll += ueq_logpdf(x, t);
  return ll;
}

Tau ueq_mle(std::span<const double> xs) {
  const double m2 = mean_of_squares(xs);
  if (!(m2 > 0.0))
    throw DegenerateSampleError(
        "ueq_mle: all observations are zero; tau_hat would leave the "
        "parameter space");
  return Tau(std::sqrt(m2 + 0.25) - 0.5);
}

double chisq1_sf(double x) {
  if (x <= 0.0) return 1.0;
  // If Z^2 ~ chi^2_1 then P(Z^2 > x) = 2 P(Z > sqrt(x)) = erfc(sqrt(x/2)).
  return std::erfc(std::sqrt(0.5 * x));
}

LrtResult ueq_lrt(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2)
    throw std::invalid_argument("ueq_lrt: need at least two observations");

  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sigma2 = ss / static_cast<double>(n);
  if (!(sigma2 > 0.0))
    throw DegenerateSampleError("ueq_lrt: constant sample");

  const Tau tau_hat = ueq_mle(xs);

  const double ll_restricted = ueq_loglik(xs, tau_hat.value);
  // Unrestricted normal maximum: -n/2 * (log(2*pi*sigma2_hat) + 1).
  const double ll_full =
      -0.5 * static_cast<double>(n) * (std::log(2.0 * M_PI * sigma2) + 1.0);

  const double log_lambda = std::min(ll_restricted - ll_full, 0.0);
  LrtResult out;
  out.tau_hat = tau_hat.value;
  out.mu_hat = mean;
  out.sigma2_hat = sigma2;
  out.lambda = std::exp(log_lambda);
  out.stat = -2.0 * log_lambda;
  out.p_value = chisq1_sf(out.stat);
  return out;
}

std::vector<double> ueq_sample(Tau tau, std::size_t n, RandomStream& rng) {
  if (n < 1)
    throw std::invalid_argument("ueq_sample: n must be >= 1");
  std::vector<double> out;
  out.reserve(n);
  const double sd = std::sqrt(tau.value);
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.normal(tau.value, sd));
  return out;
}

}  // namespace equidisp

#include "equidisp/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace equidisp {

double vms_logpdf(double x, VarMeanSqParam p) {
  const double t = p.tau;
  const double z = (x - t) / t;
  return -std::log(std::abs(t)) - 0.5 * std::log(2.0 * M_PI) - 0.5 * z * z;
}

namespace {

double vms_loglik(std::span<const double> xs, double tau) {
  const VarMeanSqParam p(tau);
  double ll = 0.0;
  for (double x : xs) ll += vms_logpdf(x, p);
  return ll;
}

}  // namespace

VmsFit vms_mle(std::span<const double> xs) {
  if (xs.empty())
    throw std::invalid_argument("vms_mle: empty sample");
  double s1 = 0.0, s2 = 0.0;
  for (double x : xs) {
    if (!std::isfinite(x))
      throw std::invalid_argument("vms_mle: non-finite value");
    s1 += x;
    s2 += x * x;
  }
  if (!(s2 > 0.0))
    throw DegenerateSampleError("vms_mle: all observations are zero");

  // n tau^2 + tau s1 - s2 = 0; the discriminant is positive and the roots
  // have opposite signs whenever s2 > 0.
  const double n = static_cast<double>(xs.size());
  const double disc = std::sqrt(s1 * s1 + 4.0 * n * s2);
  const double root_pos = (-s1 + disc) / (2.0 * n);
  const double root_neg = (-s1 - disc) / (2.0 * n);

  const double ll_pos = vms_loglik(xs, root_pos);
  const double ll_neg = vms_loglik(xs, root_neg);
  if (ll_pos >= ll_neg) return {VarMeanSqParam(root_pos), ll_pos};
  return {VarMeanSqParam(root_neg), ll_neg};
}

double pseudo_logpdf(const PseudoParams& p, double x, double y) {
  const double tx = p.link(x);
  if (std::abs(tx) < kEpsilonTau) {
    std::ostringstream msg;
    msg << "pseudo_logpdf: link tau(x) = " << tx << " is singular at x = "
        << x;
    throw SingularLinkError(msg.str());
  }
  return vms_logpdf(x, VarMeanSqParam(p.tau1)) +
         vms_logpdf(y, VarMeanSqParam(tx));
}

Sample2D pseudo_sample(const PseudoParams& p, std::size_t n,
                       RandomStream& rng) {
  if (n < 1)
    throw std::invalid_argument("pseudo_sample: n must be >= 1");
  Sample2D out;
  out.pairs.reserve(n);
  const double sd1 = std::abs(p.tau1);
  std::size_t draws = 0, rejects = 0;
  while (out.pairs.size() < n) {
    const double x = rng.normal(p.tau1, sd1);
    ++draws;
    const double tx = p.link(x);
    if (std::abs(tx) < kEpsilonTau) {
      ++rejects;
      if (draws >= 64 && 2 * rejects > draws)
        throw DegenerateLinkError(
            "pseudo_sample: more than half of the X draws hit a singular "
            "link");
      continue;
    }
    const double y = rng.normal(tx, std::abs(tx));
    out.pairs.emplace_back(x, y);
  }
  return out;
}

FitReport pseudo_fit(const Sample2D& s, const OptimConfig& opt_cfg) {
  if (s.n() < 3)
    throw std::invalid_argument("pseudo_fit: need at least 3 observations");
  const std::vector<double> xs = s.xs();
  const std::vector<double> ys = s.ys();

  // The likelihood factorizes: the marginal part depends on tau1 only.
  const VmsFit marginal = vms_mle(xs);

  const auto& pairs = s.pairs;
  std::size_t singular_hits = 0;
  auto neg_cond_loglik = [&pairs,
                          &singular_hits](const std::vector<double>& v) {
    double ll = 0.0;
    for (const auto& [x, y] : pairs) {
      const double t = v[0] + v[1] * x;
      if (std::abs(t) < kEpsilonTau) {
        ++singular_hits;
        return std::numeric_limits<double>::infinity();
      }
      const double z = (y - t) / t;
      ll += -std::log(std::abs(t)) - 0.5 * std::log(2.0 * M_PI) - 0.5 * z * z;
    }
    return -ll;
  };

  // Least-squares line of y on x seeds the link search.
  const double n = static_cast<double>(s.n());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double slope = (sxx > 0.0) ? sxy / sxx : 0.0;
  std::vector<double> start = {my - slope * mx, slope};
  if (!std::isfinite(neg_cond_loglik(start)))
    throw InvalidModelError(
        "pseudo_fit: least-squares start makes the link singular");

  OptimConfig cfg = opt_cfg;
  cfg.lower_bounds.clear();  // tau2, tau3 unbounded
  const MinimizeResult res = minimize_bounded(neg_cond_loglik, start, cfg);

  FitReport report;
  report.model_name = "pseudo";
  report.estimates = {{"tau1", marginal.tau_hat.tau},
                      {"tau2", res.argmin[0]},
                      {"tau3", res.argmin[1]}};
  report.log_likelihood = marginal.loglik - res.min_value;
  report.n_params = 3;
  report.aic = 2.0 * report.n_params - 2.0 * report.log_likelihood;
  report.converged = res.converged;
  report.iterations = res.iterations;
  if (singular_hits > 0) {
    std::ostringstream notes;
    notes << singular_hits << " candidate links rejected as singular";
    report.notes = notes.str();
  }
  return report;
}

}  // namespace equidisp

#include "equidisp/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "equidisp/univariate.hpp"

namespace equidisp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SampleSums {
  double sx = 0.0, sy = 0.0, sx2 = 0.0, sy2 = 0.0, sx2y2 = 0.0;
  std::size_t n = 0;
};

SampleSums sums_of(const Sample2D& s) {
  SampleSums out;
  out.n = s.n();
  for (const auto& [x, y] : s.pairs) {
    if (!std::isfinite(x) || !std::isfinite(y))
      throw std::invalid_argument("sample contains non-finite value");
    out.sx += x;
    out.sy += y;
    out.sx2 += x * x;
    out.sy2 += y * y;
    out.sx2y2 += x * x * y * y;
  }
  return out;
}

void require_fit_sample(const Sample2D& s) {
  if (s.n() < 3)
    throw std::invalid_argument("need at least 3 observations");
}

}  // namespace

double FitReport::estimate(const std::string& name) const {
  for (const auto& [key, value] : estimates)
    if (key == name) return value;
  throw std::out_of_range("FitReport: no estimate named " + name);
}

double pseudo_loglik(const Sample2D& s, const EquiDispParams& p) {
  double ll = -static_cast<double>(s.n()) * std::log(M_PI);
  for (const auto& [x, y] : s.pairs) {
    const double a = p.gamma * y * y + p.alpha;
    const double b = p.gamma * x * x + p.beta;
    ll += 0.5 * std::log(a) - a * x * x - 1.0 / (4.0 * a) + x;
    ll += 0.5 * std::log(b) - b * y * y - 1.0 / (4.0 * b) + y;
  }
  return ll;
}

std::array<double, 3> pseudo_loglik_gradient(const Sample2D& s,
                                             const EquiDispParams& p) {
  double ga = 0.0, gb = 0.0, gg = 0.0;
  for (const auto& [x, y] : s.pairs) {
    const double a = p.gamma * y * y + p.alpha;
    const double b = p.gamma * x * x + p.beta;
    const double da = 0.5 / a + 0.25 / (a * a);
    const double db = 0.5 / b + 0.25 / (b * b);
    ga += da - x * x;
    gb += db - y * y;
    gg += y * y * da + x * x * db - 2.0 * x * x * y * y;
  }
  return {ga, gb, gg};
}

double equidisp_loglik(const Sample2D& s, const EquiDispParams& p,
                       const QuadConfig& cfg) {
  const SampleSums m = sums_of(s);
  const double log_kappa = log_norm_const(p, cfg);
  return static_cast<double>(m.n) * log_kappa - p.alpha * m.sx2 -
         p.beta * m.sy2 - p.gamma * m.sx2y2 + m.sx + m.sy;
}

namespace {

// One pseudo-likelihood coordinate solve: g is strictly decreasing in the
// coordinate. Starts from [1e-8, 1e4] and expands the upper end tenfold up
// to 1e12 before giving up.
struct CoordSolve {
  double value = 0.0;
  bool clamped_low = false;   // root sits below the smallest bracket
  bool no_root_high = false;  // g still positive at 1e12
};

CoordSolve solve_coordinate(const std::function<double(double)>& g) {
  double lo = 1e-8, hi = 1e4;
  CoordSolve out;
  if (g(lo) <= 0.0) {
    out.value = lo;
    out.clamped_low = true;
    return out;
  }
  while (g(hi) >= 0.0) {
    hi *= 10.0;
    if (hi > 1e12) {
      out.value = 1e12;
      out.no_root_high = true;
      return out;
    }
  }
  // Coarse pass to locate the root's magnitude, then a second pass bisected
  // down to a few ulps of the root so the equation residual, not the bracket
  // width, limits the cycle's accuracy (the residual slope scales like
  // n / root^3 and gets steep for small roots).
  const double rough = bisect_decreasing(g, lo, hi, 1e-3 * std::max(1.0, lo));
  double lo2 = std::max(lo, rough * 0.98 - 1e-3);
  double hi2 = std::min(hi, rough * 1.02 + 1e-3);
  if (!(g(lo2) > 0.0) || !(g(hi2) < 0.0)) {
    lo2 = lo;
    hi2 = hi;
  }
  const double width_tol =
      std::max(4.0 * std::numeric_limits<double>::epsilon() * rough, 1e-18);
  out.value = bisect_decreasing(g, lo2, hi2, width_tol);
  return out;
}

}  // namespace

FitReport fit_pmle(const Sample2D& s) {
  require_fit_sample(s);
  const SampleSums m = sums_of(s);
  if (!(m.sx2 > 0.0) || !(m.sy2 > 0.0))
    throw DegenerateSampleError("fit_pmle: a coordinate is identically zero");

  const auto& pairs = s.pairs;
  auto lhs_alpha = [&pairs](double alpha, double gamma) {
    double acc = 0.0;
    for (const auto& [x, y] : pairs) {
      (void)x;
      const double a = gamma * y * y + alpha;
      acc += 0.5 / a + 0.25 / (a * a);
    }
    return acc;
  };
  auto lhs_beta = [&pairs](double beta, double gamma) {
    double acc = 0.0;
    for (const auto& [x, y] : pairs) {
      (void)y;
      const double b = gamma * x * x + beta;
      acc += 0.5 / b + 0.25 / (b * b);
    }
    return acc;
  };
  auto lhs_gamma = [&pairs](double gamma, double alpha, double beta) {
    double acc = 0.0;
    for (const auto& [x, y] : pairs) {
      const double a = gamma * y * y + alpha;
      const double b = gamma * x * x + beta;
      acc += y * y * (0.5 / a + 0.25 / (a * a));
      acc += x * x * (0.5 / b + 0.25 / (b * b));
    }
    return acc;
  };

  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  bool boundary = false, bracket_failed = false, clamped = false;
  constexpr int kMaxCycles = 500;
  constexpr double kResidTol = 1e-8;
  int cycle = 0;
  double resid = kInf;
  bool settled = false;

  for (cycle = 1; cycle <= kMaxCycles && !settled; ++cycle) {
    bracket_failed = false;
    clamped = false;

    const auto sa = solve_coordinate(
        [&](double a) { return lhs_alpha(a, gamma) - m.sx2; });
    alpha = sa.value;
    const auto sb = solve_coordinate(
        [&](double b) { return lhs_beta(b, gamma) - m.sy2; });
    beta = sb.value;
    clamped = sa.clamped_low || sb.clamped_low;
    bracket_failed = sa.no_root_high || sb.no_root_high;

    // Interior maximum in gamma requires a sign change on (0, inf); the
    // equation's left side is decreasing in gamma, so a nonpositive value at
    // zero puts the coordinate maximum on the boundary.
    if (lhs_gamma(0.0, alpha, beta) - 2.0 * m.sx2y2 <= 0.0) {
      gamma = 0.0;
      boundary = true;
      // Settle alpha and beta at gamma = 0 and accept the boundary solution
      // if gamma = 0 is still a coordinate maximum there.
      const auto sa0 = solve_coordinate(
          [&](double a) { return lhs_alpha(a, 0.0) - m.sx2; });
      const auto sb0 = solve_coordinate(
          [&](double b) { return lhs_beta(b, 0.0) - m.sy2; });
      alpha = sa0.value;
      beta = sb0.value;
      clamped = sa0.clamped_low || sb0.clamped_low;
      bracket_failed = sa0.no_root_high || sb0.no_root_high;
      const double ra = lhs_alpha(alpha, 0.0) - m.sx2;
      const double rb = lhs_beta(beta, 0.0) - m.sy2;
      const double rg = lhs_gamma(0.0, alpha, beta) - 2.0 * m.sx2y2;
      if (rg <= 0.0) {
        resid = std::max(std::abs(ra), std::abs(rb));
        settled = resid < kResidTol && !bracket_failed && !clamped;
        if (settled) break;
      }
      continue;  // boundary flipped back to interior (or not settled yet)
    }

    boundary = false;
    const auto sg = solve_coordinate(
        [&](double g) { return lhs_gamma(g, alpha, beta) - 2.0 * m.sx2y2; });
    gamma = sg.value;
    bracket_failed = bracket_failed || sg.no_root_high;

    const double ra = lhs_alpha(alpha, gamma) - m.sx2;
    const double rb = lhs_beta(beta, gamma) - m.sy2;
    const double rg = lhs_gamma(gamma, alpha, beta) - 2.0 * m.sx2y2;
    resid = std::max({std::abs(ra), std::abs(rb), std::abs(rg)});
    settled = resid < kResidTol && !bracket_failed && !clamped;
    if (settled) break;
  }

  const bool converged = settled;

  FitReport report;
  report.model_name = "equidisp-pmle";
  report.estimates = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}};
  report.log_likelihood = pseudo_loglik(s, EquiDispParams(alpha, beta, gamma));
  report.n_params = 3;
  report.aic = 2.0 * report.n_params - 2.0 * report.log_likelihood;
  report.converged = converged;
  report.iterations = std::min(cycle, kMaxCycles);
  report.gradient_norm = resid;
  std::ostringstream notes;
  notes << "log_likelihood is the pseudo-log-likelihood";
  if (boundary) notes << "; boundary solution gamma = 0";
  if (clamped) notes << "; a coordinate was clamped at the bracket floor";
  if (bracket_failed) notes << "; a coordinate had no root below 1e12";
  report.notes = notes.str();
  return report;
}

FitReport fit_mle(const Sample2D& s, std::optional<EquiDispParams> init,
                  const QuadConfig& quad_cfg, const OptimConfig& opt_cfg) {
  require_fit_sample(s);
  const SampleSums m = sums_of(s);
  const double n = static_cast<double>(m.n);

  std::string init_note;
  if (!init.has_value()) {
    try {
      const FitReport pmle = fit_pmle(s);
      init = EquiDispParams(std::max(pmle.estimate("alpha"), 1e-6),
                            std::max(pmle.estimate("beta"), 1e-6),
                            std::max(pmle.estimate("gamma"), 0.0));
      init_note = "init from pseudo-likelihood";
    } catch (const NumericError&) {
      // Fall back to the independence submodel closed form.
      const FitReport indep = fit_independent_equidisp(s);
      init = EquiDispParams(indep.estimate("alpha"), indep.estimate("beta"),
                            0.0);
      init_note = "init from independence submodel (pseudo-likelihood failed)";
    }
  } else {
    init_note = "init supplied";
  }

  int rejected_points = 0;
  auto objective = [&](const std::vector<double>& v) -> double {
    try {
      const EquiDispParams p(v[0], v[1], v[2]);
      const double ll = n * log_norm_const(p, quad_cfg) - p.alpha * m.sx2 -
                        p.beta * m.sy2 - p.gamma * m.sx2y2 + m.sx + m.sy;
      if (!std::isfinite(ll)) return kInf;
      return -ll;
    } catch (const NumericError&) {
      ++rejected_points;
      return kInf;
    } catch (const std::invalid_argument&) {
      ++rejected_points;
      return kInf;
    }
  };

  OptimConfig cfg = opt_cfg;
  cfg.lower_bounds = {cfg.boundary_epsilon, cfg.boundary_epsilon, 0.0};

  const MinimizeResult res = minimize_bounded(
      objective, {init->alpha, init->beta, init->gamma}, cfg);

  FitReport report;
  report.model_name = "equidisp-mle";
  report.estimates = {{"alpha", res.argmin[0]},
                      {"beta", res.argmin[1]},
                      {"gamma", res.argmin[2]}};
  report.log_likelihood = -res.min_value;
  report.n_params = 3;
  report.aic = 2.0 * report.n_params - 2.0 * report.log_likelihood;
  report.converged = res.converged;
  report.iterations = res.iterations;
  std::ostringstream notes;
  notes << init_note;
  if (rejected_points > 0)
    notes << "; " << rejected_points << " objective points rejected";
  report.notes = notes.str();
  return report;
}

FitReport fit_independent_equidisp(const Sample2D& s) {
  require_fit_sample(s);
  const std::vector<double> xs = s.xs();
  const std::vector<double> ys = s.ys();
  const Tau tau_x = ueq_mle(xs);
  const Tau tau_y = ueq_mle(ys);

  FitReport report;
  report.model_name = "equidisp-indep";
  report.estimates = {{"alpha", 1.0 / (2.0 * tau_x.value)},
                      {"beta", 1.0 / (2.0 * tau_y.value)}};
  report.log_likelihood =
      ueq_loglik(xs, tau_x.value) + ueq_loglik(ys, tau_y.value);
  report.n_params = 2;
  report.aic = 2.0 * report.n_params - 2.0 * report.log_likelihood;
  report.converged = true;
  report.iterations = 0;
  return report;
}

FitReport fit_bivariate_normal(const Sample2D& s, bool independent) {
  require_fit_sample(s);
  const double n = static_cast<double>(s.n());

  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : s.pairs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;

  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (const auto& [x, y] : s.pairs) {
    vx += (x - mx) * (x - mx);
    vy += (y - my) * (y - my);
    cxy += (x - mx) * (y - my);
  }
  vx /= n;
  vy /= n;
  cxy /= n;

  if (!(vx > 0.0) || !(vy > 0.0))
    throw DegenerateSampleError("fit_bivariate_normal: constant coordinate");

  FitReport report;
  report.converged = true;
  report.iterations = 0;
  if (independent) {
    report.model_name = "bvn-indep";
    report.estimates = {{"mu1", mx}, {"mu2", my}, {"sigma2_1", vx},
                        {"sigma2_2", vy}};
    report.n_params = 4;
    report.log_likelihood =
        -0.5 * n * (std::log(2.0 * M_PI * vx) + 1.0) -
        0.5 * n * (std::log(2.0 * M_PI * vy) + 1.0);
  } else {
    const double det = vx * vy - cxy * cxy;
    if (!(det > 0.0))
      throw DegenerateSampleError(
          "fit_bivariate_normal: singular covariance matrix");
    report.model_name = "bvn";
    report.estimates = {{"mu1", mx}, {"mu2", my}, {"sigma2_1", vx},
                        {"sigma2_2", vy}, {"cov", cxy}};
    report.n_params = 5;
    report.log_likelihood =
        -n * std::log(2.0 * M_PI) - 0.5 * n * std::log(det) - n;
  }
  report.aic = 2.0 * report.n_params - 2.0 * report.log_likelihood;
  return report;
}

ModelComparison compare_models(const Sample2D& s, const QuadConfig& quad_cfg,
                               const OptimConfig& opt_cfg) {
  ModelComparison out;
  auto attempt = [&out](const std::string& name, auto&& fit) {
    try {
      out.ranked.push_back(fit());
    } catch (const std::exception& e) {
      out.failures.push_back(name + ": " + e.what());
    }
  };

  attempt("equidisp-mle",
          [&] { return fit_mle(s, std::nullopt, quad_cfg, opt_cfg); });
  attempt("equidisp-indep", [&] { return fit_independent_equidisp(s); });
  attempt("bvn", [&] { return fit_bivariate_normal(s, false); });
  attempt("bvn-indep", [&] { return fit_bivariate_normal(s, true); });

  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const FitReport& a, const FitReport& b) {
                     return a.aic < b.aic;
                   });
  return out;
}

}  // namespace equidisp

#include "equidisp/model.hpp"

#include <omp.h>

#include <cmath>
#include <sstream>

namespace equidisp {

double log_unnorm_density(const EquiDispParams& p, double x, double y) {
  return -(p.alpha * x * x + p.beta * y * y + p.gamma * x * x * y * y - x - y);
}

double log_norm_const(const EquiDispParams& p, const QuadConfig& cfg,
                      Axis reduce_axis) {
  // Integrating the Gaussian coordinate analytically leaves (x-reduction)
  //   kappa^{-1} = int sqrt(pi/(g x^2 + b)) exp(-a x^2 + x + 1/(4(g x^2 + b))) dx.
  const double a = (reduce_axis == Axis::X) ? p.alpha : p.beta;
  const double b = (reduce_axis == Axis::X) ? p.beta : p.alpha;
  const double g = p.gamma;

  auto log_integrand = [a, b, g](double t) {
    const double u = g * t * t + b;
    return 0.5 * std::log(M_PI / u) - a * t * t + t + 1.0 / (4.0 * u);
  };

  // The Gaussian factor peaks at 1/(2a); for g > 0 the remaining factor
  // peaks at t = 0 with width ~ sqrt(b/g). The window covers both regions;
  // for small a they can be far apart.
  const double center = 1.0 / (2.0 * a);
  const double scale = 1.0 / std::sqrt(2.0 * a);
  const double m = cfg.truncation_radius_multiplier;
  double lo = center - m * scale;
  double hi = center + m * scale;
  if (g > 0.0) {
    const double zero_width = std::sqrt(b / g);
    lo = std::min(lo, -m * zero_width);
    hi = std::max(hi, m * zero_width);
  }

  // The integrand is evaluated relative to its largest exponent so it stays
  // inside double range; a coarse scan plus the analytic peak candidates
  // locate that exponent.
  double shift = log_integrand(0.0);
  shift = std::max(shift, log_integrand(center));
  constexpr int kScan = 128;
  for (int i = 0; i <= kScan; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / kScan;
    shift = std::max(shift, log_integrand(t));
  }

  auto shifted = [&log_integrand, shift](double t) {
    return std::exp(log_integrand(t) - shift);
  };
  const double integral = integrate_real_line(
      shifted, 0.5 * (lo + hi), (hi - lo) / (2.0 * m), cfg);
  // kappa^{-1} = e^{shift} * integral.
  return -shift - std::log(integral);
}

NormalizedModel::NormalizedModel(const EquiDispParams& p,
                                 const QuadConfig& cfg)
    : params_(p), quad_cfg_(cfg), log_kappa_(log_norm_const(p, cfg, Axis::X)) {}

double logpdf(const NormalizedModel& m, double x, double y) {
  return m.log_kappa() + log_unnorm_density(m.params(), x, y);
}

CondMoments conditional_law(const EquiDispParams& p, CondAxis axis, double t) {
  const double denom = (axis == CondAxis::XgivenY)
                           ? p.gamma * t * t + p.alpha
                           : p.gamma * t * t + p.beta;
  const double v = 1.0 / (2.0 * denom);
  return {v, v};
}

double marginal_logpdf(const NormalizedModel& m, Axis axis, double t) {
  const EquiDispParams& p = m.params();
  const double a = (axis == Axis::X) ? p.alpha : p.beta;
  const double b = (axis == Axis::X) ? p.beta : p.alpha;
  const double u = p.gamma * t * t + b;
  return m.log_kappa() - a * t * t + t + 0.5 * std::log(M_PI / u) +
         1.0 / (4.0 * u);
}

Sample2D sample(const NormalizedModel& m, std::size_t n, RandomStream& rng) {
  if (n < 1)
    throw std::invalid_argument("sample: n must be >= 1");
  const EquiDispParams& p = m.params();

  const double env_mean = 1.0 / (2.0 * p.alpha);
  const double env_sd = std::sqrt(1.0 / (2.0 * p.alpha));
  const double inv_4beta = 1.0 / (4.0 * p.beta);

  Sample2D out;
  out.pairs.reserve(n);

  constexpr std::size_t kWindow = 1000000;
  std::size_t window_proposals = 0;
  std::size_t window_accepts = 0;

  while (out.pairs.size() < n) {
    const double x = rng.normal(env_mean, env_sd);
    const double u = rng.uniform01();
    ++window_proposals;

    // f_X(x) / (M phi(x)) where the non-Gaussian marginal factor is
    // maximized at x = 0.
    const double q = p.gamma * x * x + p.beta;
    const double accept_prob =
        std::sqrt(p.beta / q) * std::exp(1.0 / (4.0 * q) - inv_4beta);
    if (u <= accept_prob) {
      ++window_accepts;
      const double cm = 1.0 / (2.0 * q);  // conditional mean == variance
      const double y = rng.normal(cm, std::sqrt(cm));
      out.pairs.emplace_back(x, y);
    }

    if (window_proposals >= kWindow) {
      const double rate = static_cast<double>(window_accepts) /
                          static_cast<double>(window_proposals);
      if (rate < 1e-4) {
        std::ostringstream msg;
        msg << "sample: acceptance rate " << rate
            << " below 1e-4 over a 1e6-proposal window";
        throw SamplerStallError(msg.str());
      }
      window_proposals = 0;
      window_accepts = 0;
    }
  }
  return out;
}

void GridSpec::validate() const {
  if (!(x_min < x_max) || !(y_min < y_max))
    throw std::invalid_argument("GridSpec: min must be below max");
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("GridSpec: counts must be >= 1");
  if (nx * ny > 10000000ULL)
    throw GridSizeError("GridSpec: nx*ny exceeds 1e7");
}

std::vector<GridCell> density_grid(const NormalizedModel& m, const GridSpec& g,
                                   int threads) {
  g.validate();
  const double dx = (g.nx > 1) ? (g.x_max - g.x_min) / double(g.nx - 1) : 0.0;
  const double dy = (g.ny > 1) ? (g.y_max - g.y_min) / double(g.ny - 1) : 0.0;

  std::vector<GridCell> cells(g.nx * g.ny);
  auto fill_row = [&](std::size_t i) {
    const double x = g.x_min + double(i) * dx;
    for (std::size_t j = 0; j < g.ny; ++j) {
      const double y = g.y_min + double(j) * dy;
      cells[i * g.ny + j] = {x, y, std::exp(logpdf(m, x, y))};
    }
  };

  if (threads == 1) {
    // Serial reference path.
    for (std::size_t i = 0; i < g.nx; ++i) fill_row(i);
  } else {
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::size_t i = 0; i < g.nx; ++i) fill_row(i);
  }
  return cells;
}

std::size_t count_grid_modes(const std::vector<GridCell>& grid,
                             const GridSpec& g) {
  if (grid.size() != g.nx * g.ny)
    throw std::invalid_argument("count_grid_modes: grid/spec mismatch");
  std::size_t modes = 0;
  for (std::size_t i = 1; i + 1 < g.nx; ++i) {
    for (std::size_t j = 1; j + 1 < g.ny; ++j) {
      const double v = grid[i * g.ny + j].density;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di)
        for (int dj = -1; dj <= 1 && is_max; ++dj) {
          if (di == 0 && dj == 0) continue;
          const std::size_t ni = i + static_cast<std::size_t>(di);
          const std::size_t nj = j + static_cast<std::size_t>(dj);
          if (grid[ni * g.ny + nj].density >= v) is_max = false;
        }
      if (is_max) ++modes;
    }
  }
  return modes;
}

Moments model_moments(const NormalizedModel& m) {
  const EquiDispParams& p = m.params();
  const QuadConfig& cfg = m.quad_cfg();

  auto marginal_integral = [&m, &cfg](Axis axis,
                                      const std::function<double(double)>& w) {
    const EquiDispParams& q = m.params();
    const double a = (axis == Axis::X) ? q.alpha : q.beta;
    auto f = [&m, axis, &w](double t) {
      return w(t) * std::exp(marginal_logpdf(m, axis, t));
    };
    return integrate_real_line(f, 1.0 / (2.0 * a), 1.0 / std::sqrt(2.0 * a),
                               cfg);
  };

  const double ex = marginal_integral(Axis::X, [](double t) { return t; });
  const double ex2 =
      marginal_integral(Axis::X, [](double t) { return t * t; });
  const double ey = marginal_integral(Axis::Y, [](double t) { return t; });
  const double ey2 =
      marginal_integral(Axis::Y, [](double t) { return t * t; });

  // E[XY] = E[X E(Y|X)] = E[X / (2(gamma X^2 + beta))].
  const double exy = marginal_integral(Axis::X, [&p](double t) {
    return t / (2.0 * (p.gamma * t * t + p.beta));
  });

  Moments out;
  out.ex = ex;
  out.ey = ey;
  out.var_x = ex2 - ex * ex;
  out.var_y = ey2 - ey * ey;
  out.cov = exy - ex * ey;
  return out;
}

}  // namespace equidisp

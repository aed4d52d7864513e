#include "equidisp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>

namespace equidisp {

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::invalid_argument("QuadConfig: tolerances must be positive");
  if (max_subdivisions < 1)
    throw std::invalid_argument("QuadConfig: max_subdivisions must be >= 1");
  if (!(truncation_radius_multiplier >= 6.0))
    throw std::invalid_argument(
        "QuadConfig: truncation_radius_multiplier must be >= 6");
}

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1]. Columns: abscissa, G7 weight,
// K15 weight; the first row is the center node, the rest come in +/- pairs.
constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

double eval_checked(const std::function<double(double)>& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "integrand returned non-finite value at t = " << t;
    throw EvaluationError(msg.str());
  }
  return v;
}

// One GK15 panel over [a, b]; err receives the usual Kronrod error estimate.
double gk15_panel(const std::function<double(double)>& f, double a, double b,
                  double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = eval_checked(f, mid);
  double g7 = kGK15[0][1] * f0;
  double k15 = kGK15[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i][0];
    const double fi = eval_checked(f, mid + dx) + eval_checked(f, mid - dx);
    g7 += kGK15[i][1] * fi;
    k15 += kGK15[i][2] * fi;
  }
  g7 *= half;
  k15 *= half;

  err = std::pow(200.0 * std::abs(g7 - k15), 1.5);
  return k15;
}

struct Interval {
  double a, b, value, error;
};

}  // namespace

double integrate_real_line(const std::function<double(double)>& f,
                           double center, double scale,
                           const QuadConfig& cfg) {
  cfg.validate();
  if (!(scale > 0.0) || !std::isfinite(center) || !std::isfinite(scale))
    throw std::invalid_argument("integrate_real_line: bad center/scale");

  // Pick the finite window: start at +/- m*scale around the center and keep
  // doubling until the integrand has decayed at both ends.
  const double decay_cap = cfg.abs_tol * 1e-3;
  double half_width = cfg.truncation_radius_multiplier * scale;
  int growth = 0;
  while (true) {
    const double fl = eval_checked(f, center - half_width);
    const double fr = eval_checked(f, center + half_width);
    if (std::abs(fl) <= decay_cap && std::abs(fr) <= decay_cap) break;
    if (++growth > cfg.max_subdivisions)
      throw TailTruncationError(
          "integrate_real_line: integrand has not decayed after window "
          "growth was exhausted");
    half_width *= 2.0;
  }

  // Adaptive bisection of the window, worst interval first.
  std::vector<Interval> heap;
  heap.reserve(64);
  auto push = [&heap, &f](double a, double b) {
    Interval iv;
    iv.a = a;
    iv.b = b;
    iv.value = gk15_panel(f, a, b, iv.error);
    heap.push_back(iv);
  };

  // Seed with two panels split at the center so a sharp central peak is not
  // averaged away by one wide panel.
  push(center - half_width, center);
  push(center, center + half_width);

  int splits = 0;
  while (true) {
    double total = 0.0, total_err = 0.0;
    for (const Interval& iv : heap) {
      total += iv.value;
      total_err += iv.error;
    }
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (total_err <= target || splits >= cfg.max_subdivisions) return total;

    std::size_t worst = 0;
    for (std::size_t i = 1; i < heap.size(); ++i)
      if (heap[i].error > heap[worst].error) worst = i;

    const Interval iv = heap[worst];
    heap.erase(heap.begin() + static_cast<std::ptrdiff_t>(worst));
    const double mid = 0.5 * (iv.a + iv.b);
    push(iv.a, mid);
    push(mid, iv.b);
    ++splits;
  }
}

void OptimConfig::validate() const {
  if (!(param_tol > 0.0) || !(objective_tol > 0.0))
    throw std::invalid_argument("OptimConfig: tolerances must be positive");
  if (max_iterations < 1)
    throw std::invalid_argument("OptimConfig: max_iterations must be >= 1");
  if (!(boundary_epsilon > 0.0) || !(boundary_epsilon < 1e-3))
    throw std::invalid_argument(
        "OptimConfig: boundary_epsilon must be in (0, 1e-3)");
}

namespace {

using Vec = std::vector<double>;

void project_onto_bounds(Vec& x, const Vec& lb) {
  for (std::size_t i = 0; i < x.size() && i < lb.size(); ++i)
    if (std::isfinite(lb[i]) && x[i] < lb[i]) x[i] = lb[i];
}

double checked_objective(
    const std::function<double(const Vec&)>& objective, const Vec& x) {
  const double v = objective(x);
  if (std::isnan(v))
    throw SearchError("minimize_bounded: objective returned NaN", x);
  return v;
}

}  // namespace

MinimizeResult minimize_bounded(
    const std::function<double(const Vec&)>& objective, Vec init,
    const OptimConfig& cfg) {
  cfg.validate();
  const std::size_t dim = init.size();
  if (dim == 0)
    throw std::invalid_argument("minimize_bounded: empty start point");
  const Vec& lb = cfg.lower_bounds;
  if (!lb.empty() && lb.size() != dim)
    throw std::invalid_argument(
        "minimize_bounded: lower_bounds size mismatch");

  // Start strictly inside the bounds.
  for (std::size_t i = 0; i < dim && i < lb.size(); ++i)
    if (std::isfinite(lb[i]) && init[i] < lb[i] + cfg.boundary_epsilon)
      init[i] = lb[i] + cfg.boundary_epsilon;

  const double f_init = checked_objective(objective, init);
  if (!std::isfinite(f_init))
    throw SearchError("minimize_bounded: objective not finite at start",
                      init);

  struct Vertex {
    Vec x;
    double f;
  };

  std::vector<Vertex> simplex;
  int iterations = 0;

  // `at` is taken by value: the restart passes the current best vertex,
  // which clear() would otherwise destroy before the copy.
  auto build_simplex = [&](Vec at, double f_at) {
    simplex.clear();
    simplex.push_back({std::move(at), f_at});
    for (std::size_t i = 0; i < dim; ++i) {
      Vec v = simplex.front().x;
      const double step =
          (v[i] != 0.0) ? 0.05 * std::abs(v[i]) : 0.00025;
      v[i] += step;
      project_onto_bounds(v, lb);
      const double base = simplex.front().x[i];
      if (v[i] == base) v[i] = base + step;  // bound swallowed the step
      simplex.push_back({v, checked_objective(objective, v)});
    }
  };

  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  auto centroid_of_best = [&] {
    Vec c(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) c[i] += simplex[k].x[i];
    }
    for (double& ci : c) ci /= static_cast<double>(dim);
    return c;
  };

  auto converged_now = [&] {
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();
    double spread = 0.0, magnitude = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      magnitude = std::max(magnitude, std::abs(best.x[i]));
    for (std::size_t k = 1; k < simplex.size(); ++k)
      for (std::size_t i = 0; i < dim; ++i)
        spread = std::max(spread, std::abs(simplex[k].x[i] - best.x[i]));
    const bool param_ok = spread <= cfg.param_tol * (1.0 + magnitude);
    const bool obj_ok =
        std::abs(worst.f - best.f) <= cfg.objective_tol * (1.0 + std::abs(best.f));
    return param_ok && obj_ok;
  };

  bool converged = false;

  // One restart from the found point guards against simplex collapse along
  // an active bound.
  for (int round = 0; round < 2; ++round) {
    if (round == 0)
      build_simplex(init, f_init);
    else
      build_simplex(simplex.front().x, simplex.front().f);
    order();

    while (iterations < cfg.max_iterations) {
      ++iterations;
      if (converged_now()) {
        converged = true;
        break;
      }

      const Vec c = centroid_of_best();
      const Vertex& worst = simplex.back();

      auto make_point = [&](double coef) {
        Vec p(dim);
        for (std::size_t i = 0; i < dim; ++i)
          p[i] = c[i] + coef * (c[i] - worst.x[i]);
        project_onto_bounds(p, lb);
        return p;
      };

      Vec xr = make_point(1.0);
      const double fr = checked_objective(objective, xr);

      if (fr < simplex.front().f) {
        Vec xe = make_point(2.0);
        const double fe = checked_objective(objective, xe);
        simplex.back() =
            (fe < fr) ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
      } else if (fr < simplex[simplex.size() - 2].f) {
        simplex.back() = Vertex{std::move(xr), fr};
      } else {
        const bool outside = fr < worst.f;
        Vec xc(dim);
        for (std::size_t i = 0; i < dim; ++i) {
          const double towards = outside ? xr[i] : worst.x[i];
          xc[i] = c[i] + 0.5 * (towards - c[i]);
        }
        project_onto_bounds(xc, lb);
        const double fc = checked_objective(objective, xc);
        if (fc < std::min(fr, worst.f)) {
          simplex.back() = Vertex{std::move(xc), fc};
        } else {
          // Shrink towards the best vertex.
          for (std::size_t k = 1; k < simplex.size(); ++k) {
            for (std::size_t i = 0; i < dim; ++i)
              simplex[k].x[i] =
                  simplex.front().x[i] +
                  0.5 * (simplex[k].x[i] - simplex.front().x[i]);
            project_onto_bounds(simplex[k].x, lb);
            simplex[k].f = checked_objective(objective, simplex[k].x);
          }
        }
      }
      order();
    }

    if (iterations >= cfg.max_iterations) break;
    converged = false;  // require the restarted simplex to converge again
  }

  // Re-check convergence: the final simplex state decides the flag.
  converged = converged_now() && iterations < cfg.max_iterations;

  MinimizeResult result;
  result.argmin = simplex.front().x;
  result.min_value = simplex.front().f;
  result.converged = converged;
  result.iterations = iterations;
  return result;
}

double bisect_decreasing(const std::function<double(double)>& g, double lo,
                         double hi, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("bisect_decreasing: tol must be positive");
  if (!(lo < hi))
    throw BracketError("bisect_decreasing: lo must be below hi");
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (!(g_lo > 0.0))
    throw BracketError("bisect_decreasing: g(lo) must be positive");
  if (!(g_hi < 0.0))
    throw BracketError("bisect_decreasing: g(hi) must be negative");

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point limit
    const double gm = g(mid);
    if (gm > 0.0)
      lo = mid;
    else if (gm < 0.0)
      hi = mid;
    else
      return mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace equidisp

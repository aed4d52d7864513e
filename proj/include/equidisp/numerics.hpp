#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "equidisp/errors.hpp"

namespace equidisp {

// Adaptive quadrature settings for integrals over the real line.
//
// Integration runs on the finite window [center - m*scale, center + m*scale]
// with m = truncation_radius_multiplier, after checking that the integrand
// has decayed below abs_tol*1e-3 at both endpoints; if not, the window is
// doubled, at most max_subdivisions times. max_subdivisions also caps the
// number of adaptive interval splits inside the window.
struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
  double truncation_radius_multiplier = 12.0;

  void validate() const;
};

// Integrates f over (-inf, inf). `center` and `scale` locate where the mass
// of f lives (typically the mean and standard deviation of a Gaussian
// envelope). Throws EvaluationError on a non-finite integrand value and
// TailTruncationError when window growth is exhausted.
double integrate_real_line(const std::function<double(double)>& f,
                           double center, double scale,
                           const QuadConfig& cfg = {});

// Settings for derivative-free bounded minimization.
//
// lower_bounds may be empty (fully unbounded) or hold one entry per
// coordinate; -inf entries mean unbounded below. boundary_epsilon is the
// interior offset applied to the start point for strictly-positive
// parameters; returned points may sit exactly on a bound.
struct OptimConfig {
  double param_tol = 1e-7;
  double objective_tol = 1e-9;
  int max_iterations = 4000;
  std::vector<double> lower_bounds;
  double boundary_epsilon = 1e-6;

  void validate() const;
};

struct MinimizeResult {
  std::vector<double> argmin;
  double min_value = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  int iterations = 0;
};

// Nelder-Mead simplex search with projection onto the lower bounds. The
// objective may return +inf to reject a point; NaN raises SearchError with
// the offending point attached.
MinimizeResult minimize_bounded(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> init, const OptimConfig& cfg);

// Root of a strictly decreasing g on [lo, hi] with g(lo) > 0 > g(hi).
// Returns the bracket midpoint once the bracket width is <= tol.
double bisect_decreasing(const std::function<double(double)>& g, double lo,
                         double hi, double tol);

}  // namespace equidisp

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace equidisp {

// Parameters of the three-parameter bivariate model with equi-dispersed
// normal conditionals: density proportional to
// exp(-[alpha x^2 + beta y^2 + gamma x^2 y^2 - x - y]).
// gamma == 0 is the independence submodel.
struct EquiDispParams {
  double alpha;
  double beta;
  double gamma;

  EquiDispParams(double a, double b, double g) : alpha(a), beta(b), gamma(g) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(g)))
      throw std::invalid_argument("EquiDispParams: non-finite parameter");
    if (!(a > 0.0) || !(b > 0.0) || !(g >= 0.0))
      throw std::invalid_argument(
          "EquiDispParams: need alpha > 0, beta > 0, gamma >= 0");
  }
};

// Paired observations, the unit of all bivariate fitting.
struct Sample2D {
  std::vector<std::pair<double, double>> pairs;

  std::size_t n() const { return pairs.size(); }

  std::vector<double> xs() const {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [x, y] : pairs) out.push_back(x);
    return out;
  }
  std::vector<double> ys() const {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [x, y] : pairs) out.push_back(y);
    return out;
  }
};

}  // namespace equidisp

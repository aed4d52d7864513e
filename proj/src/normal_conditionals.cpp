#include "equidisp/normal_conditionals.hpp"

#include <cmath>
#include <sstream>

namespace equidisp {

namespace {

// Equality constraints are checked against exact construction, not noisy
// estimation, so a tight absolute tolerance is appropriate.
constexpr double kEqTol = 1e-12;

bool near(double v, double target) { return std::abs(v - target) <= kEqTol; }

}  // namespace

NCClassification validate_nc(const NCMatrix& A) {
  const double a02 = A(0, 2), a20 = A(2, 0), a11 = A(1, 1);
  const double a12 = A(1, 2), a21 = A(2, 1), a22 = A(2, 2);

  if (near(a22, 0.0) && near(a12, 0.0) && near(a21, 0.0)) {
    if (!(a20 > 0.0)) return {NCClass::Invalid, "classical case needs a20 > 0"};
    if (!(a02 > 0.0)) return {NCClass::Invalid, "classical case needs a02 > 0"};
    if (!(a11 * a11 < 4.0 * a02 * a20))
      return {NCClass::Invalid,
              "classical case needs a11^2 < 4 a02 a20 (positive definite "
              "quadratic form)"};
    return {NCClass::ClassicalBivariateNormal, ""};
  }

  if (!(a22 > 0.0))
    return {NCClass::Invalid, "a22 > 0 violated"};
  if (!(4.0 * a22 * a02 > a12 * a12))
    return {NCClass::Invalid, "4 a22 a02 > a12^2 violated"};
  if (!(4.0 * a20 * a22 > a21 * a21))
    return {NCClass::Invalid, "4 a20 a22 > a21^2 violated"};
  return {NCClass::GeneralNC, ""};
}

CondMoments nc_conditional_moments(const NCMatrix& A, CondAxis axis,
                                   double t) {
  const auto cls = validate_nc(A).kind;
  if (cls == NCClass::Invalid)
    throw InvalidModelError(
        "nc_conditional_moments: matrix is not integrable");

  double denom, numer;
  if (axis == CondAxis::XgivenY) {
    denom = A(2, 2) * t * t + A(2, 1) * t + A(2, 0);
    numer = A(1, 2) * t * t + A(1, 1) * t + A(1, 0);
  } else {
    denom = A(2, 2) * t * t + A(1, 2) * t + A(0, 2);
    numer = A(2, 1) * t * t + A(1, 1) * t + A(0, 1);
  }
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "nc_conditional_moments: nonpositive variance denominator at t = "
        << t;
    throw InvalidModelError(msg.str());
  }
  return {-numer / (2.0 * denom), 1.0 / (2.0 * denom)};
}

EquiDispReduction nc_equidisp_reduce(const NCMatrix& A) {
  EquiDispReduction out;
  if (!near(A(1, 1), 0.0)) { out.violated = "a11 != 0"; return out; }
  if (!near(A(1, 2), 0.0)) { out.violated = "a12 != 0"; return out; }
  if (!near(A(2, 1), 0.0)) { out.violated = "a21 != 0"; return out; }
  if (!near(A(1, 0), -1.0)) { out.violated = "a10 != -1"; return out; }
  if (!near(A(0, 1), -1.0)) { out.violated = "a01 != -1"; return out; }

  const double alpha = A(2, 0), beta = A(0, 2), gamma = A(2, 2);
  if (!(alpha > 0.0)) { out.violated = "a20 (alpha) not > 0"; return out; }
  if (!(beta > 0.0)) { out.violated = "a02 (beta) not > 0"; return out; }
  if (gamma < 0.0) { out.violated = "a22 (gamma) negative"; return out; }

  out.is_equidispersed = true;
  out.alpha = alpha;
  out.beta = beta;
  out.gamma = gamma;
  return out;
}

VarMeanSqCheck nc_check_var_eq_meansq(const NCMatrix& A) {
  VarMeanSqCheck out;
  if (!near(A(1, 2), 0.0)) { out.reason = "a12 != 0"; return out; }
  if (!near(A(2, 1), 0.0)) { out.reason = "a21 != 0"; return out; }
  if (!near(A(1, 1), 0.0)) {
    // a11 != 0 forces a10 = a01 = 0 and then a20 = a02 = 0, which is not
    // integrable.
    out.reason = "a11 != 0 leads to a nonintegrable model";
    return out;
  }
  if (!near(A(2, 2), 0.0)) { out.reason = "a22 != 0"; return out; }

  const double a10 = A(1, 0), a01 = A(0, 1);
  if (near(a10, 0.0)) { out.reason = "a10 == 0 (marginal not integrable)"; return out; }
  if (near(a01, 0.0)) { out.reason = "a01 == 0 (marginal not integrable)"; return out; }
  if (!near(A(2, 0), 0.5 * a10 * a10)) { out.reason = "a20 != a10^2/2"; return out; }
  if (!near(A(0, 2), 0.5 * a01 * a01)) { out.reason = "a02 != a01^2/2"; return out; }

  // The density factorizes into independent normal marginals. Marginal of X
  // is proportional to exp(-(a20 x^2 + a10 x)): mean -a10/(2 a20) = -1/a10,
  // variance 1/(2 a20) = 1/a10^2 = mean^2.
  out.admissible = true;
  out.tau_x = -1.0 / a10;
  out.tau_y = -1.0 / a01;
  return out;
}

MeanVarOrder nc_mean_variance_order(const NCMatrix& A) {
  if (validate_nc(A).kind != NCClass::GeneralNC)
    throw InvalidModelError(
        "nc_mean_variance_order: matrix must classify as GeneralNC");

  const double a01 = A(0, 1), a02 = A(0, 2), a10 = A(1, 0), a11 = A(1, 1);
  const double a12 = A(1, 2), a20 = A(2, 0), a21 = A(2, 1), a22 = A(2, 2);

  const bool positive_variances =
      (a12 * a12 < 4.0 * a22 * a02) && (a21 * a21 < 4.0 * a22 * a20);
  // mu +/- sigma^2 never touching zero: the quadratics
  // a12 y^2 + a11 y + (a10 + 1) and a21 x^2 + a11 x + (a01 + 1) must have no
  // real roots.
  const bool no_real_roots = (4.0 * a12 * (a10 + 1.0) > a11 * a11) &&
                             (4.0 * a21 * (a01 + 1.0) > a11 * a11);

  if (positive_variances && no_real_roots) {
    if (a12 < 0.0 && a21 < 0.0) return MeanVarOrder::MeanExceedsVariance;
    if (a12 > 0.0 && a21 > 0.0) return MeanVarOrder::VarianceExceedsMean;
  }
  return MeanVarOrder::Neither;
}

NCMatrix nc_embed_equidisp(const EquiDispParams& p) {
  NCMatrix A;
  A(2, 0) = p.alpha;
  A(0, 2) = p.beta;
  A(2, 2) = p.gamma;
  A(1, 0) = -1.0;
  A(0, 1) = -1.0;
  return A;
}

}  // namespace equidisp

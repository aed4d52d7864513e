#pragma once

#include <array>
#include <string>

#include "equidisp/errors.hpp"
#include "equidisp/types.hpp"

namespace equidisp {

// Coefficient matrix a_ij, i,j in {0,1,2}, of the eight-parameter bivariate
// family with normal conditionals: the joint density is
//   exp{ -(1, x, x^2) A (1, y, y^2)^T }.
// a(0,0) is the normalizer slot; the type itself admits invalid matrices so
// that the diagnostics below can run on anything.
struct NCMatrix {
  std::array<std::array<double, 3>, 3> a{};

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
};

enum class NCClass { ClassicalBivariateNormal, GeneralNC, Invalid };

struct NCClassification {
  NCClass kind = NCClass::Invalid;
  std::string reason;  // first violated condition, set when kind == Invalid
};

// Integrability classification of the coefficient matrix.
//
// ClassicalBivariateNormal: a22 = a12 = a21 = 0, a20 > 0, a02 > 0, and the
// quadratic form a20 x^2 + a11 x y + a02 y^2 is positive definite
// (a11^2 < 4 a02 a20), which is what makes the classical density integrable.
// GeneralNC: a22 > 0, 4 a22 a02 > a12^2, 4 a20 a22 > a21^2.
NCClassification validate_nc(const NCMatrix& A);

enum class CondAxis { XgivenY, YgivenX };

struct CondMoments {
  double mean;
  double variance;
};

// Conditional mean and variance of one coordinate given the other equals t.
// Throws InvalidModelError when the variance denominator is not positive.
CondMoments nc_conditional_moments(const NCMatrix& A, CondAxis axis, double t);

struct EquiDispReduction {
  bool is_equidispersed = false;
  // Set when is_equidispersed: (alpha, beta, gamma) = (a20, a02, a22).
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  std::string violated;  // name of the first failing constraint otherwise
};

// Checks the five constraints that make both conditional families
// equi-dispersed (a11 = a12 = a21 = 0 and a10 = a01 = -1, within 1e-12) and
// relabels the surviving coefficients.
EquiDispReduction nc_equidisp_reduce(const NCMatrix& A);

struct VarMeanSqCheck {
  bool admissible = false;
  // Marginal means of the factorized solution; each marginal satisfies
  // variance == mean^2. Set when admissible.
  double tau_x = 0.0, tau_y = 0.0;
  std::string reason;  // violated relation otherwise
};

// Searches for the conditional-variance == squared-conditional-mean
// structure. The only admissible solutions factorize into independent normal
// marginals with a20 = a10^2/2, a02 = a01^2/2 (and a11 = a12 = a21 = a22 = 0,
// a10 != 0, a01 != 0); then tau_x = -1/a10 and tau_y = -1/a01.
VarMeanSqCheck nc_check_var_eq_meansq(const NCMatrix& A);

enum class MeanVarOrder { MeanExceedsVariance, VarianceExceedsMean, Neither };

// Uniform ordering of conditional means against conditional variances for a
// GeneralNC matrix. Requires validate_nc(A).kind == GeneralNC.
MeanVarOrder nc_mean_variance_order(const NCMatrix& A);

// Embeds (alpha, beta, gamma) back into the coefficient matrix (inverse of
// nc_equidisp_reduce; the normalizer slot is left at zero).
NCMatrix nc_embed_equidisp(const EquiDispParams& p);

}  // namespace equidisp

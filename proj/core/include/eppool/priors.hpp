#ifndef EPPOOL_PRIORS_HPP
#define EPPOOL_PRIORS_HPP

#include <array>
#include <random>
#include <vector>

#include "eppool/types.hpp"

namespace eppool {

/// Independent per-parameter priors: t0 ~ Uniform[1970, 1990], all other
/// coordinates Gaussian with the means/SDs below (Norm(a, b) = mean a, SD b).
struct IndependentPrior {
  double t0_lo = 1970.0;
  double t0_hi = 1990.0;
  // Entry 0 carries the Gaussianized moments of the uniform (mean 1980,
  // SD 20/sqrt(12)); the independent density and sampler keep the hard
  // uniform, the Gaussian moments serve the hierarchical prior and the
  // sampler's standardization scale.
  std::array<double, ParamVector::dim> mean{1980.0, 20.0, 0.42, 0.46,
                                            0.17,   -0.68, -0.038, 0.14};
  std::array<double, ParamVector::dim> sd{5.7735026918962575, 4.5,  0.23,
                                          0.12, 0.07, 0.24, 0.009, 0.045};

  double log_density(const ParamVector& theta) const;
  ParamVector sample(std::mt19937_64& rng) const;
};

double independent_logprior(const ParamVector& theta, const IndependentPrior& prior = {});

/// Per-parameter split of the independent prior variance into between-area
/// (sigma0) and within-area (sigma1) components with lambda = sigma1^2/sigma0^2.
struct HierPriorConfig {
  std::array<double, ParamVector::dim> mu0{};
  std::array<double, ParamVector::dim> sigma0{};
  std::array<double, ParamVector::dim> sigma1{};
  double t0_lo = 1970.0;
  double t0_hi = 1990.0;

  double lambda(int j) const { return sigma1[j] * sigma1[j] / (sigma0[j] * sigma0[j]); }
  double marginal_var(int j) const { return sigma0[j] * sigma0[j] + sigma1[j] * sigma1[j]; }

  static std::array<double, ParamVector::dim> default_lambda();
  static HierPriorConfig from_lambda(const std::array<double, ParamVector::dim>& lambda,
                                     const IndependentPrior& prior = {});
};

/// Joint log-density of K area parameter vectors under the hierarchical
/// prior with the country-level mean integrated out: per coordinate, a
/// K-variate Gaussian with mean mu0 and covariance sigma1^2 I + sigma0^2 J.
/// The t0 coordinate additionally enforces the [t0_lo, t0_hi] support.
double hier_logprior(const std::vector<ParamVector>& thetas, const HierPriorConfig& cfg);

/// Single-coordinate version over K scalar values.
double hier_logprior_coord(const std::vector<double>& values, double mu0,
                           double sigma0, double sigma1);

/// Product of the per-coordinate marginals N(mu0j, sigma0j^2 + sigma1j^2),
/// with the t0 support enforced; hier_logprior at K=1 equals this exactly.
double hier_marginal_logprior(const ParamVector& theta, const HierPriorConfig& cfg);

struct LambdaEstimate {
  std::array<double, ParamVector::dim> lambda{};
  std::array<double, ParamVector::dim> sigma_between{};
  std::array<double, ParamVector::dim> sigma_within{};
  bool degenerate = false;  // some coordinate had non-positive between-variance
};

/// lambda_j = sigma_within^2 / sigma_between^2, elementwise.
std::array<double, ParamVector::dim> lambda_from_sds(
    const std::array<double, ParamVector::dim>& sigma_between,
    const std::array<double, ParamVector::dim>& sigma_within);

/// One-way random-effects (method-of-moments) variance decomposition of
/// per-area parameter point estimates grouped by country. Requires at least
/// two groups each holding at least two areas. Coordinates with a
/// non-positive between-variance estimate get lambda = +inf.
LambdaEstimate empirical_lambda(const std::vector<std::vector<ParamVector>>& country_groups);

}  // namespace eppool

#endif

#include "eppool/priors.hpp"

#include <cmath>
#include <limits>

namespace eppool {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

double normal_logpdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * (kLog2Pi + z * z) - std::log(sd);
}

}  // namespace

double IndependentPrior::log_density(const ParamVector& theta) const {
  if (theta.t0 < t0_lo || theta.t0 > t0_hi) return kNegInf;
  double lp = -std::log(t0_hi - t0_lo);
  for (int j = 1; j < ParamVector::dim; ++j)
    lp += normal_logpdf(theta[j], mean[j], sd[j]);
  return lp;
}

ParamVector IndependentPrior::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(t0_lo, t0_hi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ParamVector theta;
  theta.t0 = unif(rng);
  for (int j = 1; j < ParamVector::dim; ++j)
    theta[j] = mean[j] + sd[j] * gauss(rng);
  return theta;
}

double independent_logprior(const ParamVector& theta, const IndependentPrior& prior) {
  return prior.log_density(theta);
}

std::array<double, ParamVector::dim> HierPriorConfig::default_lambda() {
  // beta4's ratio is reported as both 0.12 and 0.11 in the source material;
  // 0.12 is the default, overridable via config.
  return {0.35, 0.24, 2.15, 0.28, 0.40, 2.19, 0.61, 0.12};
}

HierPriorConfig HierPriorConfig::from_lambda(
    const std::array<double, ParamVector::dim>& lambda,
    const IndependentPrior& prior) {
  HierPriorConfig cfg;
  cfg.t0_lo = prior.t0_lo;
  cfg.t0_hi = prior.t0_hi;
  for (int j = 0; j < ParamVector::dim; ++j) {
    if (!(lambda[j] > 0.0))
      throw ValidationError("lambda must be positive for every parameter");
    const double total = prior.sd[j] * prior.sd[j];
    const double s1_sq = total * lambda[j] / (1.0 + lambda[j]);
    const double s0_sq = total / (1.0 + lambda[j]);
    cfg.mu0[j] = prior.mean[j];
    cfg.sigma0[j] = std::sqrt(s0_sq);
    cfg.sigma1[j] = std::sqrt(s1_sq);
  }
  return cfg;
}

double hier_logprior_coord(const std::vector<double>& values, double mu0,
                           double sigma0, double sigma1) {
  // K-variate Gaussian, mean mu0 * 1, covariance s1^2 I + s0^2 J.
  const auto k = values.size();
  const double s0_sq = sigma0 * sigma0;
  const double s1_sq = sigma1 * sigma1;
  double quad_diag = 0.0, resid_sum = 0.0;
  for (double v : values) {
    const double d = v - mu0;
    quad_diag += d * d;
    resid_sum += d;
  }
  const double kd = static_cast<double>(k);
  const double denom = s1_sq + kd * s0_sq;
  const double logdet = (kd - 1.0) * std::log(s1_sq) + std::log(denom);
  const double quad = quad_diag / s1_sq - s0_sq * resid_sum * resid_sum / (s1_sq * denom);
  return -0.5 * (kd * kLog2Pi + logdet + quad);
}

double hier_logprior(const std::vector<ParamVector>& thetas, const HierPriorConfig& cfg) {
  if (thetas.empty())
    throw std::invalid_argument("hier_logprior requires at least one area");
  double lp = 0.0;
  std::vector<double> values(thetas.size());
  for (int j = 0; j < ParamVector::dim; ++j) {
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      if (j == 0 && (thetas[i].t0 < cfg.t0_lo || thetas[i].t0 > cfg.t0_hi))
        return kNegInf;
      values[i] = thetas[i][j];
    }
    lp += hier_logprior_coord(values, cfg.mu0[j], cfg.sigma0[j], cfg.sigma1[j]);
  }
  return lp;
}

double hier_marginal_logprior(const ParamVector& theta, const HierPriorConfig& cfg) {
  if (theta.t0 < cfg.t0_lo || theta.t0 > cfg.t0_hi) return kNegInf;
  double lp = 0.0;
  for (int j = 0; j < ParamVector::dim; ++j)
    lp += normal_logpdf(theta[j], cfg.mu0[j], std::sqrt(cfg.marginal_var(j)));
  return lp;
}

std::array<double, ParamVector::dim> lambda_from_sds(
    const std::array<double, ParamVector::dim>& sigma_between,
    const std::array<double, ParamVector::dim>& sigma_within) {
  std::array<double, ParamVector::dim> lambda{};
  for (int j = 0; j < ParamVector::dim; ++j)
    lambda[j] = (sigma_within[j] * sigma_within[j]) /
                (sigma_between[j] * sigma_between[j]);
  return lambda;
}

LambdaEstimate empirical_lambda(
    const std::vector<std::vector<ParamVector>>& country_groups) {
  const auto n_groups = country_groups.size();
  if (n_groups < 2)
    throw ValidationError("empirical_lambda needs at least two countries");
  double n_total = 0.0, sum_sq_sizes = 0.0;
  for (const auto& g : country_groups) {
    if (g.size() < 2)
      throw ValidationError("every country needs at least two areas");
    n_total += static_cast<double>(g.size());
    sum_sq_sizes += static_cast<double>(g.size()) * static_cast<double>(g.size());
  }
  const double g_count = static_cast<double>(n_groups);
  // Effective group size for the method-of-moments between-variance.
  const double n0 = (n_total - sum_sq_sizes / n_total) / (g_count - 1.0);

  LambdaEstimate est;
  for (int j = 0; j < ParamVector::dim; ++j) {
    double grand = 0.0;
    std::vector<double> group_means;
    group_means.reserve(n_groups);
    for (const auto& g : country_groups) {
      double m = 0.0;
      for (const auto& th : g) m += th[j];
      m /= static_cast<double>(g.size());
      group_means.push_back(m);
      grand += m * static_cast<double>(g.size());
    }
    grand /= n_total;

    double ss_between = 0.0, ss_within = 0.0;
    for (std::size_t gi = 0; gi < n_groups; ++gi) {
      const auto& g = country_groups[gi];
      const double gm = group_means[gi];
      ss_between += static_cast<double>(g.size()) * (gm - grand) * (gm - grand);
      for (const auto& th : g) ss_within += (th[j] - gm) * (th[j] - gm);
    }
    const double ms_between = ss_between / (g_count - 1.0);
    const double ms_within = ss_within / (n_total - g_count);
    const double var_within = ms_within;
    const double var_between = (ms_between - ms_within) / n0;

    est.sigma_within[j] = std::sqrt(var_within);
    if (var_between > 0.0) {
      est.sigma_between[j] = std::sqrt(var_between);
      est.lambda[j] = var_within / var_between;
    } else {
      est.sigma_between[j] = 0.0;
      est.lambda[j] = std::numeric_limits<double>::infinity();
      est.degenerate = true;
    }
  }
  return est;
}

}  // namespace eppool

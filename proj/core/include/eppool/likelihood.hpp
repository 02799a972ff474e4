#ifndef EPPOOL_LIKELIHOOD_HPP
#define EPPOOL_LIKELIHOOD_HPP

#include "eppool/dynamics.hpp"
#include "eppool/types.hpp"

namespace eppool {

struct LikelihoodConfig {
  double sigma_site = 0.15;   // site random-effect SD, probit scale
  double sigma_extra = 0.05;  // extra observation noise SD, probit scale
  double continuity = 0.5;    // continuity correction constant c
};

double probit(double p);          // standard normal quantile
double probit_density(double x);  // standard normal pdf

struct ProbitPoint {
  double value;     // Phi^-1((p n + c)/(n + 2c))
  double variance;  // delta-method sampling variance of value
};

/// Continuity-corrected probit transform of a binomial proportion with its
/// delta-method variance.
ProbitPoint probit_transform(double p, double n, double c);

/// Log-likelihood of ANC site series given the model trajectory. Within a
/// site the shared random effect induces compound-symmetry covariance
/// diag(v + sigma_extra^2) + sigma_site^2 J, integrated out analytically.
/// Returns -inf for clamped trajectories.
double anc_loglik(const Trajectory& traj, const std::vector<AncObservation>& anc,
                  double beta4, const LikelihoodConfig& cfg);

/// Independent probit-scale normals for survey estimates; no clinic bias.
double npbs_loglik(const Trajectory& traj, const std::vector<NpbsObservation>& npbs);

double total_loglik(const ParamVector& params, const AreaDataset& ds,
                    const LikelihoodConfig& cfg, const ProjectionConfig& proj = {});

/// Zero-mean multivariate normal log-density for covariance D + s2 * J with
/// D diagonal, via the rank-one determinant and inverse identities.
double compound_symmetry_logpdf(const std::vector<double>& resid,
                                const std::vector<double>& diag_var,
                                double s2);

}  // namespace eppool

#endif

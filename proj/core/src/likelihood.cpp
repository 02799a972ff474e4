#include "eppool/likelihood.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <map>

namespace eppool {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
// Keeps model prevalence probit-transformable when a draw puts an
// observation year before the epidemic start.
constexpr double kRhoFloor = 1e-10;

const boost::math::normal_distribution<double>& std_normal() {
  static const boost::math::normal_distribution<double> d(0.0, 1.0);
  return d;
}

double model_probit_prevalence(const Trajectory& traj, int year) {
  if (!traj.covers(year))
    throw ValidationError("trajectory does not cover observation year " +
                          std::to_string(year));
  const double rho =
      std::clamp(traj.prevalence_at(year), kRhoFloor, 1.0 - kRhoFloor);
  return boost::math::quantile(std_normal(), rho);
}

}  // namespace

double probit(double p) { return boost::math::quantile(std_normal(), p); }

double probit_density(double x) { return boost::math::pdf(std_normal(), x); }

ProbitPoint probit_transform(double p, double n, double c) {
  const double p_star = (p * n + c) / (n + 2.0 * c);
  const double w = probit(p_star);
  const double phi = probit_density(w);
  const double v = p_star * (1.0 - p_star) / (n * phi * phi);
  return {w, v};
}

double compound_symmetry_logpdf(const std::vector<double>& resid,
                                const std::vector<double>& diag_var, double s2) {
  const auto m = resid.size();
  // Sigma = D + s2 * 1 1^T: determinant lemma and Sherman-Morrison.
  double logdet = 0.0, inv_sum = 0.0, quad_diag = 0.0, weighted_resid = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    logdet += std::log(diag_var[i]);
    inv_sum += 1.0 / diag_var[i];
    quad_diag += resid[i] * resid[i] / diag_var[i];
    weighted_resid += resid[i] / diag_var[i];
  }
  const double denom = 1.0 + s2 * inv_sum;
  logdet += std::log(denom);
  const double quad = quad_diag - s2 * weighted_resid * weighted_resid / denom;
  return -0.5 * (static_cast<double>(m) * kLog2Pi + logdet + quad);
}

double anc_loglik(const Trajectory& traj, const std::vector<AncObservation>& anc,
                  double beta4, const LikelihoodConfig& cfg) {
  if (anc.empty()) return 0.0;
  if (traj.clamped) return kNegInf;

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> sites;
  for (const auto& o : anc) {
    const ProbitPoint w =
        probit_transform(o.prevalence, static_cast<double>(o.sample_size),
                         cfg.continuity);
    auto& [resid, var] = sites[o.site_id];
    resid.push_back(w.value - model_probit_prevalence(traj, o.year) - beta4);
    var.push_back(w.variance + cfg.sigma_extra * cfg.sigma_extra);
  }

  double ll = 0.0;
  const double s2 = cfg.sigma_site * cfg.sigma_site;
  for (const auto& [site, rv] : sites)
    ll += compound_symmetry_logpdf(rv.first, rv.second, s2);
  return ll;
}

double npbs_loglik(const Trajectory& traj, const std::vector<NpbsObservation>& npbs) {
  if (npbs.empty()) return 0.0;
  if (traj.clamped) return kNegInf;

  double ll = 0.0;
  for (const auto& o : npbs) {
    const double p = std::clamp(o.prevalence, kRhoFloor, 1.0 - kRhoFloor);
    const double w = probit(p);
    const double se_probit = o.std_error / probit_density(w);
    const double d = w - model_probit_prevalence(traj, o.year);
    ll += -0.5 * (kLog2Pi + 2.0 * std::log(se_probit) +
                  d * d / (se_probit * se_probit));
  }
  return ll;
}

double total_loglik(const ParamVector& params, const AreaDataset& ds,
                    const LikelihoodConfig& cfg, const ProjectionConfig& proj) {
  const Trajectory traj = project(params, ds.demography, ds.demography.year_start,
                                  ds.demography.year_end, proj);
  const double a = anc_loglik(traj, ds.anc, params.beta4, cfg);
  if (a == kNegInf) return kNegInf;
  const double n = npbs_loglik(traj, ds.npbs);
  return a + n;
}

}  // namespace eppool

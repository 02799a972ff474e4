#ifndef EPPOOL_DYNAMICS_HPP
#define EPPOOL_DYNAMICS_HPP

#include <iosfwd>
#include <vector>

#include "eppool/types.hpp"

namespace eppool {

struct ProjectionConfig {
  double dt = 0.1;               // Euler step, years
  double seed_fraction = 0.0025; // fraction of N(t0) moved to Y at t0
  double hiv_mortality = 0.1;    // per-year death rate of infecteds
};

/// Yearly epidemic state over [year_start, year_end].
struct Trajectory {
  int year_start = 0;
  std::vector<double> susceptible;     // Z(t)
  std::vector<double> infected;        // Y(t)
  std::vector<double> prevalence;      // rho(t) = Y/N
  std::vector<double> infection_rate;  // r(t) in force during year t
  std::vector<double> incidence;       // r(t) Y(t) Z(t) / N(t)
  std::vector<double> hiv_deaths;      // alpha * Y(t)
  bool clamped = false;  // a compartment was driven below 0 and pinned

  int n_years() const { return static_cast<int>(prevalence.size()); }
  int year_end() const { return year_start + n_years() - 1; }
  bool covers(int year) const { return year >= year_start && year <= year_end(); }
  int index(int year) const { return year - year_start; }
  double population(int i) const { return susceptible[i] + infected[i]; }
  double prevalence_at(int year) const { return prevalence[index(year)]; }
};

/// One step of the r-trend recursion:
///   r(t+1) = r(t) * exp(b1*(b0 - r(t)) - b2*rho(t) + b3*gamma(t)).
/// Throws NumericalError if the result is not finite and positive.
double rtrend_step(double r_t, double rho_t, double gamma_t, const ParamVector& params);

/// Stabilization driver gamma(t) = (rho(t+1) - rho(t)) * (t - t0 - t1)^+ / rho(t).
double gamma_term(double rho_t, double rho_next, double t, double t0, double t1);

/// Forward-simulates the two-compartment model under the r-trend recursion.
/// The epidemic is seeded at t0 by moving seed_fraction of N from Z to Y;
/// r and gamma update on yearly boundaries, compartments integrate with
/// fixed Euler sub-steps. Compartments driven negative are pinned at 0 and
/// flagged via Trajectory::clamped.
Trajectory project(const ParamVector& params, const Demography& demog,
                   int year_start, int year_end,
                   const ProjectionConfig& cfg = {});

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace eppool

#endif

#include "eppool/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace eppool {

double rtrend_step(double r_t, double rho_t, double gamma_t, const ParamVector& p) {
  const double log_change =
      p.beta1 * (p.beta0 - r_t) - p.beta2 * rho_t + p.beta3 * gamma_t;
  const double r_next = r_t * std::exp(log_change);
  if (!std::isfinite(r_next) || !(r_next > 0.0)) {
    std::ostringstream ss;
    ss << "infection-rate update overflowed: r=" << r_t << " rho=" << rho_t
       << " gamma=" << gamma_t << " beta0=" << p.beta0 << " beta1=" << p.beta1
       << " beta2=" << p.beta2 << " beta3=" << p.beta3;
    throw NumericalError(ss.str());
  }
  return r_next;
}

double gamma_term(double rho_t, double rho_next, double t, double t0, double t1) {
  const double elapsed = t - (t0 + t1);
  if (elapsed <= 0.0 || rho_t <= 0.0) return 0.0;
  return (rho_next - rho_t) * elapsed / rho_t;
}

Trajectory project(const ParamVector& params, const Demography& demog,
                   int year_start, int year_end, const ProjectionConfig& cfg) {
  if (year_end < year_start)
    throw ValidationError("projection year range is empty");
  if (!demog.covers(year_start) || !demog.covers(year_end))
    throw ValidationError("demography does not cover the projection range");

  const int n_years = year_end - year_start + 1;
  const int steps_per_year = std::max(1, static_cast<int>(std::lround(1.0 / cfg.dt)));
  const double dt = 1.0 / steps_per_year;

  Trajectory traj;
  traj.year_start = year_start;
  traj.susceptible.reserve(n_years);
  traj.infected.reserve(n_years);
  traj.prevalence.reserve(n_years);
  traj.infection_rate.reserve(n_years);
  traj.incidence.reserve(n_years);
  traj.hiv_deaths.reserve(n_years);

  double Z = demog.initial_population;
  double Y = 0.0;
  double r = std::exp(params.log_r0);
  bool seeded = false;

  auto seed_epidemic = [&] {
    const double seed = cfg.seed_fraction * (Z + Y);
    Z -= seed;
    Y += seed;
    seeded = true;
  };

  if (params.t0 <= year_start) seed_epidemic();

  auto record = [&](double rr) {
    const double N = Z + Y;
    traj.susceptible.push_back(Z);
    traj.infected.push_back(Y);
    const double rho = N > 0.0 ? Y / N : 0.0;
    traj.prevalence.push_back(rho);
    traj.infection_rate.push_back(rr);
    traj.incidence.push_back(N > 0.0 ? rr * Y * Z / N : 0.0);
    traj.hiv_deaths.push_back(cfg.hiv_mortality * Y);
  };

  for (int year = year_start; year <= year_end; ++year) {
    record(r);
    if (year == year_end) break;

    const int di = demog.index(year);
    const double entrants = demog.entrants[di];
    const double mu = demog.non_aids_mortality[di];
    const double a50 = demog.age_out[di];
    const double mig = demog.net_migration[di];

    const double rho_year = traj.prevalence.back();
    for (int k = 0; k < steps_per_year; ++k) {
      const double time = year + k * dt;
      if (!seeded && params.t0 < time + dt) seed_epidemic();

      const double N = Z + Y;
      if (N <= 0.0) {
        traj.clamped = true;
        break;
      }
      const double infections = r * Y * Z / N;
      const double dZ = entrants - infections - mu * Z - a50 * Z / N + mig * Z / N;
      const double dY = infections - cfg.hiv_mortality * Y - a50 * Y / N + mig * Y / N;
      Z += dt * dZ;
      Y += dt * dY;
      if (Z < 0.0) {
        Z = 0.0;
        traj.clamped = true;
      }
      if (Y < 0.0) {
        Y = 0.0;
        traj.clamped = true;
      }
    }

    if (seeded) {
      const double N = Z + Y;
      const double rho_next = N > 0.0 ? Y / N : 0.0;
      const double g = gamma_term(rho_year, rho_next, year, params.t0, params.t1);
      r = rtrend_step(r, rho_year, g, params);
    }
  }

  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "year,Z,Y,N,rho,r,incidence,hiv_deaths\n";
  for (int i = 0; i < traj.n_years(); ++i) {
    os << traj.year_start + i << ',' << traj.susceptible[i] << ','
       << traj.infected[i] << ',' << traj.population(i) << ','
       << traj.prevalence[i] << ',' << traj.infection_rate[i] << ','
       << traj.incidence[i] << ',' << traj.hiv_deaths[i] << '\n';
  }
}

}  // namespace eppool

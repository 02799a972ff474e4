#include "eppool/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace eppool {

Demography Demography::flat(double initial_population, int year_start, int year_end,
                            double mortality_rate) {
  Demography d;
  d.year_start = year_start;
  d.year_end = year_end;
  d.initial_population = initial_population;
  const int n = d.n_years();
  d.entrants.assign(n, mortality_rate * initial_population);
  d.non_aids_mortality.assign(n, mortality_rate);
  d.age_out.assign(n, 0.0);
  d.net_migration.assign(n, 0.0);
  return d;
}

const std::array<const char*, ParamVector::dim>& ParamVector::names() {
  static const std::array<const char*, dim> n = {
      "t0", "t1", "log_r0", "beta0", "beta1", "beta2", "beta3", "beta4"};
  return n;
}

double ParamVector::operator[](int j) const {
  switch (j) {
    case 0: return t0;
    case 1: return t1;
    case 2: return log_r0;
    case 3: return beta0;
    case 4: return beta1;
    case 5: return beta2;
    case 6: return beta3;
    case 7: return beta4;
  }
  throw std::out_of_range("ParamVector index");
}

double& ParamVector::operator[](int j) {
  switch (j) {
    case 0: return t0;
    case 1: return t1;
    case 2: return log_r0;
    case 3: return beta0;
    case 4: return beta1;
    case 5: return beta2;
    case 6: return beta3;
    case 7: return beta4;
  }
  throw std::out_of_range("ParamVector index");
}

std::array<double, ParamVector::dim> ParamVector::as_array() const {
  return {t0, t1, log_r0, beta0, beta1, beta2, beta3, beta4};
}

ParamVector ParamVector::from_array(const std::array<double, dim>& a) {
  ParamVector p;
  for (int j = 0; j < dim; ++j) p[j] = a[j];
  return p;
}

bool ParamVector::all_finite() const {
  for (int j = 0; j < dim; ++j)
    if (!std::isfinite((*this)[j])) return false;
  return true;
}

namespace {

void check_demography(const Demography& d) {
  if (d.year_end < d.year_start)
    throw ValidationError("demography year range is empty");
  if (!(d.initial_population > 0.0))
    throw ValidationError("initial_population must be positive");
  const auto n = static_cast<std::size_t>(d.n_years());
  if (d.entrants.size() != n || d.non_aids_mortality.size() != n ||
      d.age_out.size() != n || d.net_migration.size() != n)
    throw ValidationError("demography tables must cover every simulated year");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(d.entrants) || !finite(d.non_aids_mortality) || !finite(d.age_out) ||
      !finite(d.net_migration))
    throw ValidationError("demography tables contain non-finite values");
  for (double mu : d.non_aids_mortality)
    if (mu < 0.0) throw ValidationError("non-AIDS mortality rate must be >= 0");
}

}  // namespace

void validate(const AreaDataset& ds) {
  check_demography(ds.demography);
  if (ds.anc.empty() && ds.npbs.empty())
    throw ValidationError("area '" + ds.area_id + "' has no observations");
  for (const auto& o : ds.anc) {
    if (!(o.prevalence >= 0.0 && o.prevalence <= 1.0))
      throw ValidationError("ANC prevalence outside [0,1] at site " + o.site_id);
    if (o.sample_size < 1)
      throw ValidationError("ANC sample size must be >= 1 at site " + o.site_id);
    if (!ds.demography.covers(o.year))
      throw ValidationError("ANC year " + std::to_string(o.year) +
                            " outside demography range");
  }
  for (const auto& o : ds.npbs) {
    if (!(o.prevalence >= 0.0 && o.prevalence <= 1.0))
      throw ValidationError("NPBS prevalence outside [0,1]");
    if (!(o.std_error > 0.0))
      throw ValidationError("NPBS standard error must be positive");
    if (!ds.demography.covers(o.year))
      throw ValidationError("NPBS year " + std::to_string(o.year) +
                            " outside demography range");
  }
}

std::vector<int> data_years(const AreaDataset& ds) {
  std::set<int> years;
  for (const auto& o : ds.anc) years.insert(o.year);
  for (const auto& o : ds.npbs) years.insert(o.year);
  return {years.begin(), years.end()};
}

}  // namespace eppool

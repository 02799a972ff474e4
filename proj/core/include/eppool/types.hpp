#ifndef EPPOOL_TYPES_HPP
#define EPPOOL_TYPES_HPP

#include <array>
#include <string>
#include <vector>

#include "eppool/errors.hpp"

namespace eppool {

/// One antenatal-clinic observation: prevalence among sample_size women
/// tested at one sentinel site in one calendar year.
struct AncObservation {
  std::string site_id;
  int year = 0;
  double prevalence = 0.0;
  int sample_size = 0;
};

/// One national population-based survey estimate with its standard error
/// on the proportion scale.
struct NpbsObservation {
  int year = 0;
  double prevalence = 0.0;
  double std_error = 0.0;
};

/// Per-year demographic inputs for the 15-49 population, treated as
/// external givens. All tables cover [year_start, year_end] inclusive.
struct Demography {
  int year_start = 0;
  int year_end = 0;
  std::vector<double> entrants;            // persons/yr entering at age 15
  std::vector<double> non_aids_mortality;  // rate/yr
  std::vector<double> age_out;             // persons/yr exiting at age 50
  std::vector<double> net_migration;       // persons/yr, net inflow
  double initial_population = 0.0;         // N at year_start

  int n_years() const { return year_end - year_start + 1; }
  bool covers(int year) const { return year >= year_start && year <= year_end; }
  int index(int year) const { return year - year_start; }

  /// Flat demography for synthetic runs: entrants balance non-AIDS deaths
  /// at the initial population size, no ageing-out or migration table.
  static Demography flat(double initial_population, int year_start, int year_end,
                         double mortality_rate = 0.02);
};

struct AreaDataset {
  std::string area_id;
  std::vector<AncObservation> anc;
  std::vector<NpbsObservation> npbs;
  Demography demography;
};

/// The 8 r-trend inputs for one area, in the fixed ordering used for
/// every vector/matrix operation: (t0, t1, log r0, b0, b1, b2, b3, b4).
struct ParamVector {
  double t0 = 1980.0;      // epidemic start year
  double t1 = 20.0;        // years to stabilization after t0
  double log_r0 = 0.42;    // log initial infection rate
  double beta0 = 0.46;
  double beta1 = 0.17;
  double beta2 = -0.68;
  double beta3 = -0.038;
  double beta4 = 0.14;     // ANC clinic bias, probit scale

  static constexpr int dim = 8;
  static const std::array<const char*, dim>& names();

  double operator[](int j) const;
  double& operator[](int j);

  std::array<double, dim> as_array() const;
  static ParamVector from_array(const std::array<double, dim>& a);

  bool all_finite() const;
};

/// Throws ValidationError on any violated invariant.
void validate(const AreaDataset& ds);

/// Sorted distinct union of ANC and NPBS observation years.
std::vector<int> data_years(const AreaDataset& ds);

}  // namespace eppool

#endif

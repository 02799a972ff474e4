#ifndef EPPOOL_EVALUATION_HPP
#define EPPOOL_EVALUATION_HPP

#include <cstdint>
#include <vector>

#include "eppool/dynamics.hpp"
#include "eppool/imis.hpp"
#include "eppool/likelihood.hpp"
#include "eppool/pooling.hpp"
#include "eppool/types.hpp"

namespace eppool {

/// Predictive-evaluation truncation: sorted data years split into three
/// contiguous blocks (first block ceil(n/3) years, remainder balanced to
/// middle then last); ANC rows in the middle block are kept, and only the
/// earliest NPBS observation survives. Throws ValidationError below 3 data
/// years.
AreaDataset truncate_dataset(const AreaDataset& ds);

struct ExpectedLoglik {
  double value = 0.0;
  double inadmissible_fraction = 0.0;  // share of -inf samples
};

ExpectedLoglik expected_loglik(const std::vector<ParamVector>& samples,
                               const AreaDataset& ds, const LikelihoodConfig& cfg,
                               const ProjectionConfig& proj = {});

struct SimulationConfig {
  int site_count = 6;
  int anc_sample_size = 300;
  std::vector<int> anc_years;   // one observation per site per year
  std::vector<int> npbs_years;
  double npbs_se = 0.005;
  double sigma_site = 0.15;     // site random-effect SD, probit scale
};

/// Synthetic ground-truth dataset: projects truth, draws site effects
/// N(0, sigma_site^2), ANC counts Binomial(n, Phi(probit(rho) + b4 + b_s)),
/// NPBS from the probit survey model. Deterministic per seed.
AreaDataset simulate_dataset(const ParamVector& truth, const Demography& demog,
                             const SimulationConfig& sim, std::uint64_t seed,
                             const std::string& area_id = "synthetic",
                             const ProjectionConfig& proj = {});

struct ScenarioRow {
  std::string area;
  int n_data_years = 0;
  int n_anc_sites = 0;
  // hierarchical minus independent expected log-likelihood
  double d_full_full = 0.0;
  double d_full_trunc = 0.0;
  double d_trunc_trunc = 0.0;
};

struct ScenarioConfig {
  LikelihoodConfig likelihood;
  ProjectionConfig projection;
  ImisConfig imis;
  HierPriorConfig hier;
  IndependentPrior prior;
  int n_candidates = 100000;  // joint candidate tuples per pooling pass
  int n_eval_draws = 1000;    // posterior draws averaged per metric
};

/// Fits every area independently on full and truncated data, pools within
/// the country under scenarios (full,full) and (full with one truncated),
/// and reports the expected log-likelihood improvements per area, mirroring
/// the (full,full)/(full,trunc)/(trunc,trunc) layout.
std::vector<ScenarioRow> scenario_table(const std::vector<AreaDataset>& areas,
                                        const ScenarioConfig& cfg,
                                        std::uint64_t seed);

std::string serialize_scenario_csv(const std::vector<ScenarioRow>& rows);

}  // namespace eppool

#endif
